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

#include "fairspread/fairness.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "fairspread/cascade.h"
#include "fairspread/errors.h"

namespace fairspread {
namespace {

constexpr double kOneMinusInvE = 1.0 - 0.36787944117144233;

void check_budget(const AttributedGraph& g, int k) {
  if (k < 1 || k > g.node_count()) {
    throw InvalidArgument("budget k must satisfy 1 <= k <= n (got " +
                          std::to_string(k) + ")");
  }
}

int probe_count(double precision) {
  if (!(precision > 0.0 && precision < 1.0)) {
    throw InvalidArgument("search precision must lie in (0, 1)");
  }
  return static_cast<int>(std::ceil(std::log2(1.0 / precision)));
}

OracleConfig oracle_config(const FairnessParams& params) {
  OracleConfig cfg = params.oracle;
  cfg.singleton_samples = params.optimization_samples;
  cfg.seed = derive_seed(params.seed, "oracle");
  return cfg;
}

struct Probe {
  bool feasible = false;
  std::vector<int> seeds;
  std::vector<double> achieved;
};

// Runs the multiobjective solver at `targets` and applies the acceptance
// rule to its own achieved estimates.
Probe run_probe(const MultiObjectiveOracle& oracle,
                const std::vector<double>& targets, int k,
                const FairnessParams& params, int index) {
  MultiObjectiveParams solver = params.solver;
  solver.seed = derive_seed(derive_seed(params.seed, "probe"),
                            static_cast<uint64_t>(index));
  Probe probe;
  try {
    const MultiObjectiveResult r =
        multiobjective_maximize(oracle, targets, k, solver);
    probe.seeds = r.seeds;
    probe.feasible = true;
    const double alpha = params.acceptance_ratio();
    for (std::size_t i = 0; i < targets.size(); ++i) {
      probe.achieved.push_back(r.reports[i].achieved);
      if (r.reports[i].achieved < alpha * targets[i] - solver.epsilon) {
        probe.feasible = false;
      }
    }
  } catch (const InfeasibleBudgetError&) {
    probe.feasible = false;
  }
  return probe;
}

SolveResult finish(const AttributedGraph& g, const std::vector<int>& seeds,
                   int k, const FairnessParams& params, std::string name) {
  std::optional<std::vector<double>> demands = params.demands;
  if (!demands) demands = compute_demands(g, k, params);
  SolveResult r =
      evaluate_fairness(g, SeedSet(seeds, k), demands, params.report_samples,
                        derive_seed(params.seed, "report"), params);
  r.algorithm = std::move(name);
  return r;
}

template <typename F>
void for_each_subset(int n, int r, F&& f) {
  std::vector<int> idx(r);
  for (int i = 0; i < r; ++i) idx[i] = i;
  while (true) {
    f(std::span<const int>(idx));
    int i = r - 1;
    while (i >= 0 && idx[i] == n - r + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
}

double exact_group_demand(const AttributedGraph& g, int group, int k_i) {
  const InducedSubgraph sub = induced_subgraph(g, g.group(group));
  const int budget = std::min(k_i, sub.graph.node_count());
  double best = 0.0;
  for_each_subset(sub.graph.node_count(), budget,
                  [&](std::span<const int> s) {
                    best = std::max(best, exact_spread(sub.graph, s).total);
                  });
  return best;
}

}  // namespace

double FairnessParams::acceptance_ratio() const {
  return strict ? 1.0 : kOneMinusInvE * (1.0 - solver.epsilon);
}

std::vector<double> compute_demands(const AttributedGraph& g, int k,
                                    const FairnessParams& params) {
  check_budget(g, k);
  std::vector<double> out;
  const uint64_t seed = derive_seed(params.seed, "demands");
  for (int i = 0; i < g.group_count(); ++i) {
    DemandOptions opt;
    opt.num_samples = params.optimization_samples;
    opt.seed = derive_seed(seed, static_cast<uint64_t>(i));
    opt.exact = params.exact_demand;
    out.push_back(group_demand(g, i, fair_allocation(g, k, i), opt));
  }
  return out;
}

SolveResult evaluate_fairness(const AttributedGraph& g, const SeedSet& seeds,
                              const std::optional<std::vector<double>>& demands,
                              int num_samples, uint64_t master_seed,
                              const FairnessParams& params) {
  seeds.validate_for(g);
  const int m = g.group_count();
  SolveResult r;
  r.algorithm = "evaluate";
  r.seeds = seeds.members();
  r.budget = seeds.budget();
  const SpreadEstimate est =
      estimate_spread(g, seeds.members(), num_samples, master_seed);
  r.total_influence = est.total;
  r.total_std_error = est.total_std_error;
  r.per_group_influence = est.per_group;
  r.per_group_std_error = est.std_error;
  r.maximin_value = std::numeric_limits<double>::infinity();
  for (int i = 0; i < m; ++i) {
    const double frac = est.per_group[i] / g.group_size(i);
    r.per_group_fraction.push_back(frac);
    r.maximin_value = std::min(r.maximin_value, frac);
  }
  if (demands) {
    if (static_cast<int>(demands->size()) != m) {
      throw InvalidArgument("expected one demand per group");
    }
    r.demands = *demands;
  } else {
    r.demands = compute_demands(g, seeds.budget(), params);
  }
  double sum = 0.0;
  for (int i = 0; i < m; ++i) {
    const double w = r.demands[i];
    const double v =
        w > 0.0 ? std::clamp((w - est.per_group[i]) / w, 0.0, 1.0) : 0.0;
    r.violations.push_back(v);
    sum += v;
  }
  r.mean_violation_pct = 100.0 * sum / m;
  return r;
}

SolveResult solve_greedy(const AttributedGraph& g, int k,
                         const FairnessParams& params) {
  check_budget(g, k);
  SpreadObjective objective(g, params.optimization_samples,
                            derive_seed(params.seed, "greedy"));
  const GreedyResult gr = lazy_greedy(objective, k);
  return finish(g, gr.seeds, k, params, "greedy");
}

SolveResult solve_maximin(const AttributedGraph& g, int k,
                          const FairnessParams& params) {
  check_budget(g, k);
  const int m = g.group_count();
  const InfluenceOracles oracle(g, group_weights(g, false),
                                oracle_config(params));
  const int probes = probe_count(params.search_epsilon);
  double lo = 0.0, hi = 1.0;
  std::vector<SearchProbe> trace;
  // Feasibility only steers the search; the answer is the probe solution
  // with the highest achieved maximin value.
  std::vector<int> best;
  double best_value = -1.0;
  for (int q = 0; q < probes; ++q) {
    const double w = 0.5 * (lo + hi);
    std::vector<double> targets(m);
    for (int i = 0; i < m; ++i) targets[i] = w * g.group_size(i);
    const Probe probe = run_probe(oracle, targets, k, params, q);
    trace.push_back({w, probe.feasible});
    if (!probe.achieved.empty()) {
      double value = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        value = std::min(value, probe.achieved[i] / g.group_size(i));
      }
      if (value > best_value) {
        best_value = value;
        best = probe.seeds;
      }
    }
    (probe.feasible ? lo : hi) = w;
  }
  SolveResult r = finish(g, best, k, params, "maximin");
  r.search_trace = std::move(trace);
  return r;
}

SolveResult solve_diversity(const AttributedGraph& g, int k,
                            const FairnessParams& params) {
  check_budget(g, k);
  const int m = g.group_count();
  FairnessParams with_demands = params;
  if (!with_demands.demands) {
    with_demands.demands = compute_demands(g, k, params);
  }
  const std::vector<double>& demands = *with_demands.demands;
  const InfluenceOracles oracle(g, group_weights(g, true),
                                oracle_config(params));
  const int probes = probe_count(params.search_epsilon);
  double lo = 0.0, hi = g.node_count();
  std::vector<SearchProbe> trace;
  std::vector<int> best_fair, best_fallback;
  double best_fair_total = -1.0;
  double best_violation = std::numeric_limits<double>::infinity();
  double best_fallback_total = -1.0;
  for (int q = 0; q < probes; ++q) {
    const double w = 0.5 * (lo + hi);
    std::vector<double> targets = demands;
    targets.push_back(w);
    const Probe probe = run_probe(oracle, targets, k, with_demands, q);
    trace.push_back({w, probe.feasible});
    if (!probe.achieved.empty()) {
      bool demands_met = true;
      double violation = 0.0;
      for (int i = 0; i < m; ++i) {
        // The answer must meet the demands themselves; alpha only steers
        // the search.
        if (probe.achieved[i] < demands[i] - params.solver.epsilon) {
          demands_met = false;
        }
        if (demands[i] > 0.0) {
          violation +=
              std::max(0.0, (demands[i] - probe.achieved[i]) / demands[i]);
        }
      }
      const double total = probe.achieved[m];
      if (demands_met && total > best_fair_total) {
        best_fair_total = total;
        best_fair = probe.seeds;
      }
      if (violation < best_violation - 1e-12 ||
          (violation <= best_violation + 1e-12 &&
           total > best_fallback_total)) {
        best_violation = std::min(best_violation, violation);
        best_fallback_total = total;
        best_fallback = probe.seeds;
      }
    }
    (probe.feasible ? lo : hi) = w;
  }
  SolveResult r = finish(g, best_fair_total >= 0.0 ? best_fair : best_fallback,
                         k, with_demands, "dc");
  r.search_trace = std::move(trace);
  return r;
}

PriceOfFairness price_of_fairness(const AttributedGraph& g, int k,
                                  FairnessConcept fairness_concept,
                                  const FairnessParams& params) {
  FairnessParams shared = params;
  if (!shared.demands) shared.demands = compute_demands(g, k, params);
  PriceOfFairness out;
  out.optimal = solve_greedy(g, k, shared);
  out.fair = fairness_concept == FairnessConcept::kMaximin
                 ? solve_maximin(g, k, shared)
                 : solve_diversity(g, k, shared);
  out.optimal_total = out.optimal.total_influence;
  out.fair_total = out.fair.total_influence;
  out.ratio = out.fair_total > 0.0
                  ? out.optimal_total / out.fair_total
                  : std::numeric_limits<double>::infinity();
  return out;
}

double exact_maximin_utility(const AttributedGraph& g,
                             std::span<const int> seeds) {
  const SpreadEstimate e = exact_spread(g, seeds);
  double u = std::numeric_limits<double>::infinity();
  for (int i = 0; i < g.group_count(); ++i) {
    u = std::min(u, e.per_group[i] / g.group_size(i));
  }
  return u;
}

double exact_rational_utility(const AttributedGraph& g,
                              std::span<const int> seeds, int k) {
  check_budget(g, k);
  const SpreadEstimate e = exact_spread(g, seeds);
  for (int i = 0; i < g.group_count(); ++i) {
    const double demand =
        exact_group_demand(g, i, fair_allocation(g, k, i));
    if (e.per_group[i] < demand - 1e-12) return 0.0;
  }
  return e.total;
}

}  // namespace fairspread
