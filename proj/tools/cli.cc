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

#include "fairspread/cli.h"

#include <algorithm>
#include <cctype>
#include <climits>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fairspread/bench.h"
#include "fairspread/errors.h"
#include "fairspread/fairness.h"
#include "fairspread/graph.h"
#include "fairspread/parallel.h"
#include "json.hpp"

namespace fairspread {
namespace {

using nlohmann::json;

constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;

std::string env_name(const std::string& flag) {
  std::string name = "FAIRSPREAD_";
  for (const char c : flag) {
    name += c == '-' ? '_' : static_cast<char>(std::toupper(c));
  }
  return name;
}

// Registers --flag with its FAIRSPREAD_ environment fallback.
template <typename T>
CLI::Option* flag(CLI::App* app, const std::string& name, T& target,
                  const std::string& help) {
  return app->add_option("--" + name, target, help)
      ->envname(env_name(name))
      ->capture_default_str();
}

CLI::Option* switch_flag(CLI::App* app, const std::string& name, bool& target,
                         const std::string& help) {
  return app->add_flag("--" + name, target, help)->envname(env_name(name));
}

struct GraphArgs {
  std::string graph;
  std::string attributes;
  bool directed = false;
  std::optional<double> p;
};

struct SolverArgs {
  int k = 15;
  int samples = 1000;
  int report_samples = 100000;
  uint64_t seed = 0;
  double epsilon = 0.01;
  int fw_iters = 100;
  int md_iters = 500;
  double eta_scale = 3.0;
  double search_epsilon = 0.01;
  int rounding_reps = 5;
  bool strict = false;
  bool exact_demand = false;
};

void add_graph_flags(CLI::App* app, GraphArgs& a, bool required = true) {
  auto* g = flag(app, "graph", a.graph,
                 "graph file (.json, or an edge list with --attributes)");
  if (required) g->required();
  flag(app, "attributes", a.attributes, "CSV attribute file for edge lists");
  switch_flag(app, "directed", a.directed, "edge list arcs are directed");
  app->add_option("--p", a.p, "override the propagation probability")
      ->envname(env_name("p"))
      ->check(CLI::Range(0.0, 1.0));
}

void add_solver_flags(CLI::App* app, SolverArgs& a) {
  flag(app, "k", a.k, "seed budget")->check(CLI::Range(1, INT_MAX));
  flag(app, "samples", a.samples, "live-edge samples inside optimization")
      ->check(CLI::Range(1, INT_MAX));
  flag(app, "report-samples", a.report_samples,
       "live-edge samples for reported estimates")
      ->check(CLI::Range(1, INT_MAX));
  flag(app, "seed", a.seed, "master seed");
  flag(app, "epsilon", a.epsilon, "solver precision")
      ->check(CLI::Range(0.0, 1.0));
  flag(app, "fw-iters", a.fw_iters, "Frank-Wolfe iterations")
      ->check(CLI::Range(1, INT_MAX));
  flag(app, "md-iters", a.md_iters, "mirror-descent iterations")
      ->check(CLI::Range(1, INT_MAX));
  flag(app, "eta-scale", a.eta_scale, "mirror-descent step-size multiplier")
      ->check(CLI::PositiveNumber);
  flag(app, "search-epsilon", a.search_epsilon, "binary-search precision")
      ->check(CLI::Range(1e-9, 0.999999));
  flag(app, "rounding-reps", a.rounding_reps, "swap-rounding repetitions")
      ->check(CLI::Range(1, INT_MAX));
  switch_flag(app, "strict", a.strict, "accept probes only at full target");
  switch_flag(app, "exact-demand", a.exact_demand,
              "brute-force group demands on small induced subgraphs");
}

AttributedGraph load(const GraphArgs& a) {
  std::optional<std::filesystem::path> attrs;
  if (!a.attributes.empty()) attrs = a.attributes;
  AttributedGraph g =
      read_graph_file(a.graph, attrs, a.p.value_or(0.1), a.directed);
  if (a.p) g = g.with_p(*a.p);
  return g;
}

FairnessParams make_params(const SolverArgs& a) {
  FairnessParams p;
  p.seed = a.seed;
  p.optimization_samples = a.samples;
  p.report_samples = a.report_samples;
  p.search_epsilon = a.search_epsilon;
  p.strict = a.strict;
  p.exact_demand = a.exact_demand;
  p.solver.epsilon = a.epsilon;
  p.solver.fw_iterations = a.fw_iters;
  p.solver.md_iterations = a.md_iters;
  p.solver.eta_scale = a.eta_scale;
  p.solver.value_samples = a.samples;
  p.solver.selection_samples = a.samples;
  p.solver.rounding_repetitions = a.rounding_reps;
  return p;
}

json params_json(const SolverArgs& a) {
  return {{"k", a.k},
          {"samples", a.samples},
          {"report_samples", a.report_samples},
          {"seed", a.seed},
          {"epsilon", a.epsilon},
          {"fw_iters", a.fw_iters},
          {"md_iters", a.md_iters},
          {"eta_scale", a.eta_scale},
          {"search_epsilon", a.search_epsilon},
          {"rounding_reps", a.rounding_reps},
          {"strict", a.strict},
          {"exact_demand", a.exact_demand}};
}

json result_json(const AttributedGraph& g, const SolveResult& r) {
  json seeds = json::array();
  for (const int v : r.seeds) seeds.push_back(g.node_ids()[v]);
  json groups = json::array();
  for (int i = 0; i < g.group_count(); ++i) {
    groups.push_back({{"name", g.group_names()[i]},
                      {"size", g.group_size(i)},
                      {"influence", r.per_group_influence[i]},
                      {"std_error", r.per_group_std_error[i]},
                      {"fraction", r.per_group_fraction[i]},
                      {"demand", r.demands[i]},
                      {"violation", r.violations[i]}});
  }
  json trace = json::array();
  for (const SearchProbe& p : r.search_trace) {
    trace.push_back({{"target", p.target}, {"feasible", p.feasible}});
  }
  return {{"algorithm", r.algorithm},
          {"k", r.budget},
          {"seeds", seeds},
          {"seed_indices", r.seeds},
          {"total_influence", r.total_influence},
          {"total_std_error", r.total_std_error},
          {"per_group_influence", r.per_group_influence},
          {"per_group_fraction", r.per_group_fraction},
          {"maximin_value", r.maximin_value},
          {"demands", r.demands},
          {"violations", r.violations},
          {"mean_violation_pct", r.mean_violation_pct},
          {"groups", groups},
          {"search_trace", trace}};
}

void emit(const std::string& text, const std::string& path,
          std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw ValidationError("cannot write " + path);
  file << text;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Fair influence maximization on attributed networks",
               "fairspread"};
  app.require_subcommand(1);
  int threads = 0;
  flag(&app, "threads", threads, "worker threads (0 = all cores)")
      ->check(CLI::Range(0, 4096));

  GraphArgs graph;
  SolverArgs solver;
  std::string out_path;

  auto* solve = app.add_subcommand("solve", "choose k seeds");
  std::string algo;
  add_graph_flags(solve, graph);
  add_solver_flags(solve, solver);
  flag(solve, "algo", algo, "greedy, maximin or dc")
      ->required()
      ->check(CLI::IsMember({"greedy", "maximin", "dc"}));
  flag(solve, "out", out_path, "write JSON here instead of stdout");

  auto* evaluate =
      app.add_subcommand("evaluate", "fairness diagnostics of a seed set");
  std::string seed_list, demand_list;
  add_graph_flags(evaluate, graph);
  add_solver_flags(evaluate, solver);
  flag(evaluate, "seeds", seed_list, "comma-separated node ids")->required();
  flag(evaluate, "demands", demand_list,
       "comma-separated group demands (computed when absent)");
  flag(evaluate, "out", out_path, "write JSON here instead of stdout");

  auto* pof = app.add_subcommand("pof", "price of fairness");
  std::string concept_name = "maximin";
  add_graph_flags(pof, graph);
  add_solver_flags(pof, solver);
  flag(pof, "concept", concept_name, "maximin or rational")
      ->check(CLI::IsMember({"maximin", "rational"}));
  flag(pof, "out", out_path, "write JSON here instead of stdout");

  auto* gen = app.add_subcommand("gen", "write a generated graph as JSON");
  std::string generator, variant = "disjoint", sizes = "80,20";
  int s = 10;
  double gen_p = 0.1;
  AttributedRandomParams rp;
  gen->add_option("generator", generator, "generator name")
      ->required()
      ->check(CLI::IsMember({"pof-rational", "pof-maximin",
                             "overlap-rational", "overlap-maximin",
                             "attributed"}));
  flag(gen, "s", s, "construction size parameter");
  flag(gen, "p", gen_p, "propagation probability")
      ->check(CLI::Range(0.0, 1.0));
  flag(gen, "variant", variant, "disjoint or overlapping groups")
      ->check(CLI::IsMember({"disjoint", "overlapping"}));
  flag(gen, "n", rp.n, "node count")->check(CLI::Range(1, INT_MAX));
  flag(gen, "groups", sizes, "comma-separated group sizes");
  flag(gen, "homophily", rp.homophily, "homophily in [0, 1]")
      ->check(CLI::Range(0.0, 1.0));
  flag(gen, "mean-degree", rp.mean_degree, "expected mean degree")
      ->check(CLI::Range(0.0, 1e9));
  flag(gen, "seed", rp.seed, "generator seed");
  flag(gen, "out", out_path, "write JSON here instead of stdout");

  auto* bench = app.add_subcommand("bench", "run an experiment config");
  std::string config_path;
  flag(bench, "config", config_path, "experiment JSON")->required();
  flag(bench, "out", out_path, "CSV path (overrides the config)");
  bool no_timing = false;
  switch_flag(bench, "no-timing", no_timing,
              "write 0 for wall_ms so repeated runs are byte-identical");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    set_max_threads(threads);
    if (*solve) {
      const AttributedGraph g = load(graph);
      const FairnessParams params = make_params(solver);
      if (solver.k > g.node_count()) {
        throw InvalidArgument("--k exceeds the node count " +
                              std::to_string(g.node_count()));
      }
      const SolveResult r = algo == "greedy"
                                ? solve_greedy(g, solver.k, params)
                            : algo == "maximin"
                                ? solve_maximin(g, solver.k, params)
                                : solve_diversity(g, solver.k, params);
      json doc = result_json(g, r);
      doc["params"] = params_json(solver);
      emit(doc.dump(2) + "\n", out_path, out);
    } else if (*evaluate) {
      const AttributedGraph g = load(graph);
      std::vector<int> members;
      for (const std::string& id : split(seed_list, ',')) {
        const auto v = g.find_node(id);
        if (!v) throw ValidationError("unknown seed node '" + id + "'");
        members.push_back(*v);
      }
      std::optional<std::vector<double>> demands;
      if (!demand_list.empty()) {
        demands.emplace();
        for (const std::string& d : split(demand_list, ',')) {
          try {
            demands->push_back(std::stod(d));
          } catch (const std::exception&) {
            throw InvalidArgument("bad demand value '" + d + "'");
          }
        }
      }
      if (solver.k > g.node_count()) {
        throw InvalidArgument("--k exceeds the node count");
      }
      const FairnessParams params = make_params(solver);
      const SolveResult r = evaluate_fairness(
          g, SeedSet(members, solver.k), demands, solver.report_samples,
          derive_seed(solver.seed, "report"), params);
      json doc = result_json(g, r);
      doc["params"] = params_json(solver);
      emit(doc.dump(2) + "\n", out_path, out);
    } else if (*pof) {
      const AttributedGraph g = load(graph);
      if (solver.k > g.node_count()) {
        throw InvalidArgument("--k exceeds the node count");
      }
      const PriceOfFairness r = price_of_fairness(
          g, solver.k,
          concept_name == "maximin" ? FairnessConcept::kMaximin
                                    : FairnessConcept::kRational,
          make_params(solver));
      json doc = {{"concept", concept_name},
                  {"k", solver.k},
                  {"optimal_total", r.optimal_total},
                  {"fair_total", r.fair_total},
                  {"pof_infinite", std::isinf(r.ratio)},
                  {"optimal", result_json(g, r.optimal)},
                  {"fair", result_json(g, r.fair)},
                  {"params", params_json(solver)}};
      doc["pof"] = std::isinf(r.ratio) ? json(nullptr) : json(r.ratio);
      emit(doc.dump(2) + "\n", out_path, out);
    } else if (*gen) {
      std::optional<AttributedGraph> g;
      if (generator == "pof-rational") {
        g = gen_pof_rational(s, gen_p).graph;
      } else if (generator == "pof-maximin") {
        g = gen_pof_maximin(s, gen_p).graph;
      } else if (generator == "overlap-rational") {
        OverlapInstance o = gen_overlap_rational(s, gen_p);
        g = variant == "overlapping" ? o.overlapping : o.graph;
      } else if (generator == "overlap-maximin") {
        OverlapInstance o = gen_overlap_maximin(s, gen_p);
        g = variant == "overlapping" ? o.overlapping : o.graph;
      } else {
        rp.p = gen_p;
        rp.group_sizes.clear();
        for (const std::string& part : split(sizes, ',')) {
          try {
            rp.group_sizes.push_back(std::stoi(part));
          } catch (const std::exception&) {
            throw InvalidArgument("bad group size '" + part + "'");
          }
        }
        g = gen_attributed_random(rp);
      }
      emit(serialize_graph_json(*g), out_path, out);
    } else if (*bench) {
      std::ifstream in(config_path);
      if (!in) throw ValidationError("cannot open config " + config_path);
      std::stringstream text;
      text << in.rdbuf();
      const std::filesystem::path base =
          std::filesystem::path(config_path).parent_path();
      std::string config = text.str();
      if (no_timing) {
        json cfg;
        try {
          cfg = json::parse(config);
        } catch (const json::parse_error& e) {
          throw ParseError(config_path, e.what());
        }
        if (cfg.is_object()) cfg["timing"] = false;
        config = cfg.dump();
      }
      ExperimentResult r = run_experiment(config, base.empty() ? "." : base);
      if (!out_path.empty()) {
        std::ofstream file(out_path);
        if (!file) throw ValidationError("cannot write " + out_path);
        write_experiment_csv(r.rows, file);
      } else if (!r.output) {
        write_experiment_csv(r.rows, out);
      }
    }
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return 0;
}

}  // namespace fairspread
