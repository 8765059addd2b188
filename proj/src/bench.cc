// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fairspread/bench.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>
#include <utility>

#include "fairspread/errors.h"
#include "fairspread/random.h"
#include "json.hpp"

namespace fairspread {
namespace {

using nlohmann::json;

void check_p(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidArgument("p must lie in [0, 1]");
  }
}

// Appends both arcs of an undirected edge.
void edge(std::vector<Arc>& arcs, int a, int b) {
  arcs.push_back({a, b});
  arcs.push_back({b, a});
}

}  // namespace

PofRationalInstance gen_pof_rational(int s, double p) {
  if (s < 3) {
    throw InvalidArgument("gen_pof_rational needs s >= 3 so part L holds a K2");
  }
  check_p(p);
  // 0 x1, 1 x2, 2 x3, 3 y, then the other s-1 leaves, then s-3 isolated.
  const int n = 2 * s;
  std::vector<std::string> ids = {"x1", "x2", "x3", "y"};
  std::vector<Arc> arcs;
  edge(arcs, 2, 3);
  edge(arcs, 1, 0);
  std::vector<int> leaves = {0}, part_l = {2, 3};
  for (int i = 1; i < s; ++i) {
    const int v = static_cast<int>(ids.size());
    ids.push_back("leaf" + std::to_string(i));
    edge(arcs, 1, v);
    leaves.push_back(v);
  }
  for (int i = 0; i < s - 3; ++i) {
    part_l.push_back(static_cast<int>(ids.size()));
    ids.push_back("iso" + std::to_string(i));
  }
  std::vector<int> c2 = part_l;
  c2.push_back(1);
  return PofRationalInstance{
      AttributedGraph(n, std::move(arcs), p, {leaves, c2}, std::move(ids),
                      {"C1", "C2"}),
      /*k=*/2, /*x1=*/0, /*x2=*/1, /*x3=*/2,
      /*fair_total=*/2.0 + 2.0 * p + (s - 1) * p * p,
      /*optimal_total=*/2.0 + p + p * s,
      /*demands=*/{1.0, 1.0 + p}};
}

PofMaximinInstance gen_pof_maximin(int s, double p) {
  if (s < 1) throw InvalidArgument("gen_pof_maximin needs s >= 1");
  check_p(p);
  // 0 x1, 1 y, 2 x2, then s leaves.
  std::vector<std::string> ids = {"x1", "y", "x2"};
  std::vector<Arc> arcs;
  edge(arcs, 0, 1);
  std::vector<int> c2 = {0, 2};
  for (int i = 0; i < s; ++i) {
    const int v = static_cast<int>(ids.size());
    ids.push_back("leaf" + std::to_string(i));
    edge(arcs, 2, v);
    c2.push_back(v);
  }
  const int n = static_cast<int>(ids.size());
  return PofMaximinInstance{
      AttributedGraph(n, std::move(arcs), p, {{1}, c2}, std::move(ids),
                      {"C1", "C2"}),
      /*k=*/1, /*x1=*/0, /*x2=*/2, /*y=*/1,
      /*optimal_total=*/1.0 + p * s, /*fair_total=*/1.0 + p};
}

OverlapInstance gen_overlap_rational(int s, double p) {
  if (s < 1) throw InvalidArgument("gen_overlap_rational needs s >= 1");
  check_p(p);
  // 0 x1, 1 y, 2 x2, then s leaves.
  std::vector<std::string> ids = {"x1", "y", "x2"};
  std::vector<Arc> arcs;
  edge(arcs, 0, 1);
  std::vector<int> c1 = {1};
  for (int i = 0; i < s; ++i) {
    const int v = static_cast<int>(ids.size());
    ids.push_back("leaf" + std::to_string(i));
    edge(arcs, 2, v);
    c1.push_back(v);
  }
  const int n = static_cast<int>(ids.size());
  AttributedGraph g(n, arcs, p, {c1, {0, 2}}, ids, {"C1", "C2"});
  std::vector<int> c1_prime = c1;
  c1_prime.push_back(0);
  AttributedGraph g2(n, std::move(arcs), p, {c1_prime, {0, 2}},
                     std::move(ids), {"C1", "C2"});
  // Seeding x2 meets both demands of G (1 each) iff ps >= 1, and misses the
  // raised demand 1 + p of the overlapping C1 iff ps < 1 + p.
  const bool holds = p * s >= 1.0 && p * s < 1.0 + p;
  return OverlapInstance{std::move(g), std::move(g2), /*k=*/1, /*x1=*/0,
                         /*x2=*/2, 1.0 + p * s, 1.0 + p, holds};
}

OverlapInstance gen_overlap_maximin(int s, double p) {
  if (s < 1) throw InvalidArgument("gen_overlap_maximin needs s >= 1");
  if (!(p > 0.0 && p < 1.0 / 3.0)) {
    throw InvalidArgument("gen_overlap_maximin needs 0 < p < 1/3");
  }
  const int t = static_cast<int>(std::lround(s / (1.0 - 3.0 * p)));
  // 0 x1, 1 x2, 2 z, then s leaves of x1, then t leaves of x2.
  std::vector<std::string> ids = {"x1", "x2", "z"};
  std::vector<Arc> arcs;
  edge(arcs, 1, 2);
  std::vector<int> c2 = {1};
  for (int i = 0; i < s; ++i) {
    const int v = static_cast<int>(ids.size());
    ids.push_back("a" + std::to_string(i));
    edge(arcs, 0, v);
    c2.push_back(v);
  }
  for (int i = 0; i < t; ++i) {
    const int v = static_cast<int>(ids.size());
    ids.push_back("b" + std::to_string(i));
    edge(arcs, 1, v);
    c2.push_back(v);
  }
  const int n = static_cast<int>(ids.size());
  AttributedGraph g(n, arcs, p, {{0, 2}, c2}, ids, {"C1", "C2"});
  AttributedGraph g2(n, std::move(arcs), p, {{0, 1, 2}, c2}, std::move(ids),
                     {"C1", "C2"});
  const double big = s + t + 1.0;
  const double g_x1 = std::min(0.5, p * s / big);
  const double g_x2 = std::min(p / 2.0, (1.0 + p * t) / big);
  const double h_x1 = std::min(1.0 / 3.0, p * s / big);
  const double h_x2 = std::min((1.0 + p) / 3.0, (1.0 + p * t) / big);
  return OverlapInstance{std::move(g), std::move(g2), /*k=*/1, /*x1=*/0,
                         /*x2=*/1, 1.0 + p * s, 1.0 + p * (t + 1),
                         g_x1 > g_x2 && h_x2 > h_x1};
}

std::vector<WitnessFixture> nonsubmodularity_witnesses() {
  // 0 x, 1 a, 2 b, 3 c.
  std::vector<Arc> arcs;
  edge(arcs, 1, 2);
  const AttributedGraph g(4, arcs, 0.1, {{0, 1}, {2, 3}},
                          {"x", "a", "b", "c"}, {"C1", "C2"});
  return {
      WitnessFixture{"maximin", g, UtilityKind::kMaximin, 4, {1, 2},
                     {1, 2, 3}, 0},
      WitnessFixture{"rational", g, UtilityKind::kRational, 4, {1, 2},
                     {1, 2, 3}, 0},
  };
}

AttributedGraph gen_attributed_random(const AttributedRandomParams& params) {
  const int n = params.n;
  if (n < 1) throw InvalidArgument("n must be positive");
  if (params.group_sizes.empty()) {
    throw InvalidArgument("group size profile is empty");
  }
  int64_t total = 0;
  for (const int size : params.group_sizes) {
    if (size < 1 || size > n) {
      throw InvalidArgument("every group size must lie in [1, n]");
    }
    total += size;
  }
  if (total < n) {
    throw InvalidArgument("group sizes sum to less than n; some node would "
                          "belong to no group");
  }
  if (!(params.homophily >= 0.0 && params.homophily <= 1.0)) {
    throw InvalidArgument("homophily must lie in [0, 1]");
  }
  if (!(params.mean_degree >= 0.0)) {
    throw InvalidArgument("mean degree must be >= 0");
  }
  check_p(params.p);

  RandomStream rng(derive_seed(params.seed, "groups"));
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    std::swap(perm[i], perm[rng.below(static_cast<uint64_t>(i) + 1)]);
  }
  const int m = static_cast<int>(params.group_sizes.size());
  std::vector<std::vector<int>> groups(m);
  int cursor = 0;
  for (int i = 0; i < m; ++i) {
    const int take = std::min(params.group_sizes[i], n - cursor);
    groups[i].assign(perm.begin() + cursor, perm.begin() + cursor + take);
    cursor += take;
    std::vector<char> member(n, 0);
    for (const int v : groups[i]) member[v] = 1;
    std::vector<int> others;
    for (int v = 0; v < n; ++v) {
      if (!member[v]) others.push_back(v);
    }
    for (int extra = params.group_sizes[i] - take; extra > 0; --extra) {
      const std::size_t pick = rng.below(others.size());
      groups[i].push_back(others[pick]);
      others.erase(others.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    std::sort(groups[i].begin(), groups[i].end());
  }

  std::vector<std::vector<uint64_t>> mask(
      n, std::vector<uint64_t>(static_cast<std::size_t>((m + 63) / 64), 0));
  for (int i = 0; i < m; ++i) {
    for (const int v : groups[i]) mask[v][i >> 6] |= uint64_t{1} << (i & 63);
  }
  auto share = [&](int u, int v) {
    for (std::size_t w = 0; w < mask[u].size(); ++w) {
      if (mask[u][w] & mask[v][w]) return true;
    }
    return false;
  };
  const double h = params.homophily;
  double weight_sum = 0.0;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      weight_sum += share(u, v) ? 1.0 : 1.0 - h;
    }
  }
  const double c =
      weight_sum > 0.0 ? params.mean_degree * n / (2.0 * weight_sum) : 0.0;
  const RandomStream coins(derive_seed(params.seed, "edges"));
  std::vector<Arc> arcs;
  uint64_t pair = 0;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v, ++pair) {
      const double prob = std::min(1.0, c * (share(u, v) ? 1.0 : 1.0 - h));
      if (coins.uniform_at(pair) < prob) edge(arcs, u, v);
    }
  }
  std::vector<std::string> names;
  for (int i = 0; i < m; ++i) names.push_back("g" + std::to_string(i));
  return AttributedGraph(n, std::move(arcs), params.p, std::move(groups), {},
                         std::move(names));
}

namespace {

template <typename T>
T get_or(const json& obj, const char* key, T fallback,
         const std::string& where) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParseError(where + "." + key, "wrong type");
  }
}

struct InstanceSpec {
  std::string name;
  AttributedGraph graph;
};

AttributedGraph make_generated(const std::string& generator, const json& prm,
                               double default_p, uint64_t seed,
                               const std::string& where) {
  const double p = get_or<double>(prm, "p", default_p, where);
  if (generator == "attributed") {
    AttributedRandomParams a;
    a.n = get_or<int>(prm, "n", a.n, where);
    a.group_sizes =
        get_or<std::vector<int>>(prm, "group_sizes", a.group_sizes, where);
    a.homophily = get_or<double>(prm, "homophily", a.homophily, where);
    a.mean_degree = get_or<double>(prm, "mean_degree", a.mean_degree, where);
    a.p = p;
    a.seed = get_or<uint64_t>(prm, "seed", seed, where);
    return gen_attributed_random(a);
  }
  const int s = get_or<int>(prm, "s", 10, where);
  const bool overlapping =
      get_or<std::string>(prm, "variant", "disjoint", where) == "overlapping";
  if (generator == "pof-rational") return gen_pof_rational(s, p).graph;
  if (generator == "pof-maximin") return gen_pof_maximin(s, p).graph;
  if (generator == "overlap-rational") {
    OverlapInstance o = gen_overlap_rational(s, p);
    return overlapping ? o.overlapping : o.graph;
  }
  if (generator == "overlap-maximin") {
    OverlapInstance o = gen_overlap_maximin(s, p);
    return overlapping ? o.overlapping : o.graph;
  }
  throw ParseError(where + ".generator", "unknown generator '" + generator +
                                             "'");
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

ExperimentResult run_experiment(const std::string& config_json,
                                const std::filesystem::path& base_dir) {
  json cfg;
  try {
    cfg = json::parse(config_json);
  } catch (const json::parse_error& e) {
    throw ParseError("byte " + std::to_string(e.byte), e.what());
  }
  if (!cfg.is_object()) throw ParseError("<root>", "expected an object");
  const std::string root = "config";
  const int k = get_or<int>(cfg, "k", 15, root);
  const int runs = get_or<int>(cfg, "runs", 30, root);
  const uint64_t seed = get_or<uint64_t>(cfg, "seed", 0, root);
  std::optional<double> p_override;
  if (cfg.contains("p")) p_override = get_or<double>(cfg, "p", 0.1, root);
  const std::vector<std::string> algorithms = get_or<std::vector<std::string>>(
      cfg, "algorithms", {"greedy", "dc", "maximin"}, root);
  for (const auto& a : algorithms) {
    if (a != "greedy" && a != "dc" && a != "maximin") {
      throw ParseError("config.algorithms", "unknown algorithm '" + a + "'");
    }
  }
  if (runs < 1) throw ValidationError("runs must be >= 1");
  const bool timing = get_or<bool>(cfg, "timing", true, root);

  FairnessParams base;
  const json samples = cfg.value("samples", json::object());
  base.optimization_samples =
      get_or<int>(samples, "optimization", 1000, "config.samples");
  base.report_samples = get_or<int>(samples, "report", 100000,
                                    "config.samples");
  const json solver = cfg.value("solver", json::object());
  const std::string sw = "config.solver";
  MultiObjectiveParams& sp = base.solver;
  sp.epsilon = get_or<double>(solver, "epsilon", sp.epsilon, sw);
  sp.threshold_epsilon =
      get_or<double>(solver, "threshold_epsilon", sp.threshold_epsilon, sw);
  sp.oracle_epsilon =
      get_or<double>(solver, "oracle_epsilon", sp.oracle_epsilon, sw);
  sp.fw_iterations =
      get_or<int>(solver, "fw_iterations", sp.fw_iterations, sw);
  sp.md_iterations =
      get_or<int>(solver, "md_iterations", sp.md_iterations, sw);
  sp.eta_scale = get_or<double>(solver, "eta_scale", sp.eta_scale, sw);
  sp.value_samples =
      get_or<int>(solver, "value_samples", base.optimization_samples, sw);
  sp.selection_samples = get_or<int>(solver, "selection_samples",
                                     base.optimization_samples, sw);
  sp.rounding_repetitions = get_or<int>(solver, "rounding_repetitions",
                                        sp.rounding_repetitions, sw);
  base.search_epsilon =
      get_or<double>(solver, "search_epsilon", base.search_epsilon, sw);
  base.strict = get_or<bool>(solver, "strict", base.strict, sw);
  base.exact_demand =
      get_or<bool>(solver, "exact_demand", base.exact_demand, sw);

  if (!cfg.contains("instances") || !cfg["instances"].is_array()) {
    throw ParseError("config.instances", "expected an array");
  }
  std::vector<InstanceSpec> instances;
  const json& list = cfg["instances"];
  for (std::size_t q = 0; q < list.size(); ++q) {
    const std::string where = "config.instances[" + std::to_string(q) + "]";
    const json& inst = list[q];
    if (!inst.is_object()) throw ParseError(where, "expected an object");
    if (inst.contains("graph")) {
      std::filesystem::path path = get_or<std::string>(inst, "graph", "", where);
      if (path.is_relative()) path = base_dir / path;
      std::optional<std::filesystem::path> attrs;
      if (inst.contains("attributes")) {
        attrs = get_or<std::string>(inst, "attributes", "", where);
        if (attrs->is_relative()) attrs = base_dir / *attrs;
      }
      if (!std::filesystem::exists(path)) {
        throw ValidationError("graph file not found: " + path.string());
      }
      AttributedGraph g = read_graph_file(
          path, attrs, p_override.value_or(0.1),
          get_or<bool>(inst, "directed", false, where));
      if (p_override) g = g.with_p(*p_override);
      instances.push_back(
          {get_or<std::string>(inst, "name", path.stem().string(), where),
           std::move(g)});
      continue;
    }
    const std::string generator =
        get_or<std::string>(inst, "generator", "", where);
    if (generator.empty()) {
      throw ParseError(where, "needs either 'graph' or 'generator'");
    }
    const std::string name = get_or<std::string>(inst, "name", generator,
                                                 where);
    const int count = get_or<int>(inst, "count", 1, where);
    const json prm = inst.value("params", json::object());
    for (int c = 0; c < count; ++c) {
      const std::string full = count > 1 ? name + "-" + std::to_string(c)
                                         : name;
      const uint64_t inst_seed = derive_seed(
          derive_seed(seed, "instance:" + name), static_cast<uint64_t>(c));
      instances.push_back(
          {full, make_generated(generator, prm, p_override.value_or(0.1),
                                inst_seed, where + ".params")});
    }
  }

  ExperimentResult result;
  if (cfg.contains("output")) {
    std::filesystem::path out = get_or<std::string>(cfg, "output", "", root);
    if (out.is_relative()) out = base_dir / out;
    result.output = out;
  }
  for (const InstanceSpec& inst : instances) {
    const AttributedGraph& g = inst.graph;
    if (k < 1 || k > g.node_count()) {
      throw ValidationError("k = " + std::to_string(k) +
                            " is outside [1, n] for instance " + inst.name);
    }
    for (int run = 0; run < runs; ++run) {
      FairnessParams params = base;
      params.seed = derive_seed(derive_seed(seed, "run:" + inst.name),
                                static_cast<uint64_t>(run));
      params.demands = compute_demands(g, k, params);
      std::vector<ExperimentRow> rows;
      double greedy_total = 0.0;
      auto timed = [&](const std::string& algo) {
        const auto start = std::chrono::steady_clock::now();
        SolveResult r = algo == "greedy"  ? solve_greedy(g, k, params)
                        : algo == "dc"    ? solve_diversity(g, k, params)
                                          : solve_maximin(g, k, params);
        const auto stop = std::chrono::steady_clock::now();
        ExperimentRow row;
        row.instance = inst.name;
        row.run = run;
        row.algorithm = algo;
        row.total = r.total_influence;
        row.maximin_value = r.maximin_value;
        row.mean_violation_pct = r.mean_violation_pct;
        row.wall_ms =
            timing ? std::chrono::duration<double, std::milli>(stop - start)
                         .count()
                   : 0.0;
        row.group_fractions = r.per_group_fraction;
        return row;
      };
      // Greedy first: its total is the PoF numerator for the other rows.
      ExperimentRow greedy_row = timed("greedy");
      greedy_total = greedy_row.total;
      for (const std::string& algo : algorithms) {
        ExperimentRow row = algo == "greedy" ? greedy_row : timed(algo);
        row.pof = row.total > 0.0 ? greedy_total / row.total
                                  : std::numeric_limits<double>::infinity();
        result.rows.push_back(std::move(row));
      }
    }
  }
  if (result.output) {
    std::ofstream out(*result.output);
    if (!out) {
      throw ValidationError("cannot write " + result.output->string());
    }
    write_experiment_csv(result.rows, out);
  }
  return result;
}

void write_experiment_csv(const std::vector<ExperimentRow>& rows,
                          std::ostream& out, bool include_timing) {
  out << "instance,run,algorithm,total,maximin_value,mean_violation_pct,pof,"
         "wall_ms,group_fractions\n";
  for (const ExperimentRow& r : rows) {
    std::string fractions;
    for (std::size_t i = 0; i < r.group_fractions.size(); ++i) {
      if (i) fractions += ';';
      fractions += format_number(r.group_fractions[i]);
    }
    out << r.instance << ',' << r.run << ',' << r.algorithm << ','
        << format_number(r.total) << ',' << format_number(r.maximin_value)
        << ',' << format_number(r.mean_violation_pct) << ','
        << format_number(r.pof) << ','
        << (include_timing ? format_number(r.wall_ms) : std::string("0"))
        << ',' << fractions << '\n';
  }
}

}  // namespace fairspread
