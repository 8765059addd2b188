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

// Maximin fairness and diversity constraints on top of the multiobjective
// solver, plus fairness diagnostics and the price of fairness.

#ifndef FAIRSPREAD_FAIRNESS_H_
#define FAIRSPREAD_FAIRNESS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairspread/graph.h"
#include "fairspread/greedy.h"
#include "fairspread/multiobjective.h"
#include "fairspread/oracles.h"

namespace fairspread {

struct FairnessParams {
  MultiObjectiveParams solver;
  OracleConfig oracle;
  // Binary-search precision: on the fraction scale for maximin, times n
  // for the total-influence search of the diversity solver.
  double search_epsilon = 0.01;
  // Accept a probe at alpha * target - epsilon, with alpha = (1 - 1/e)(1 -
  // epsilon), or alpha = 1 in strict mode.
  bool strict = false;
  int optimization_samples = 1000;
  int report_samples = 100000;
  bool exact_demand = false;
  // Precomputed group demands; computed on demand when absent.
  std::optional<std::vector<double>> demands;
  uint64_t seed = 0;

  double acceptance_ratio() const;
};

struct SearchProbe {
  double target = 0.0;
  bool feasible = false;
};

struct SolveResult {
  std::string algorithm;
  std::vector<int> seeds;
  int budget = 0;
  double total_influence = 0.0;
  double total_std_error = 0.0;
  std::vector<double> per_group_influence;
  std::vector<double> per_group_std_error;
  std::vector<double> per_group_fraction;
  double maximin_value = 0.0;
  std::vector<double> demands;
  std::vector<double> violations;
  double mean_violation_pct = 0.0;
  std::vector<SearchProbe> search_trace;
};

// Demands W_i = group_demand(G, i, fair_allocation(G, k, i)).
std::vector<double> compute_demands(const AttributedGraph& g, int k,
                                    const FairnessParams& params);

// Diagnostics of an externally chosen seed set with report-size sampling.
// Demands are computed for budget seeds.budget() when not supplied.
SolveResult evaluate_fairness(const AttributedGraph& g, const SeedSet& seeds,
                              const std::optional<std::vector<double>>& demands,
                              int num_samples, uint64_t master_seed,
                              const FairnessParams& params = {});

// Unconstrained influence maximization (lazy greedy on total spread).
SolveResult solve_greedy(const AttributedGraph& g, int k,
                         const FairnessParams& params);

SolveResult solve_maximin(const AttributedGraph& g, int k,
                          const FairnessParams& params);

SolveResult solve_diversity(const AttributedGraph& g, int k,
                            const FairnessParams& params);

enum class FairnessConcept { kMaximin, kRational };

struct PriceOfFairness {
  double optimal_total = 0.0;
  double fair_total = 0.0;
  // optimal_total / fair_total; +infinity when fair_total is 0.
  double ratio = 0.0;
  SolveResult optimal;
  SolveResult fair;
};

PriceOfFairness price_of_fairness(const AttributedGraph& g, int k,
                                  FairnessConcept fairness_concept,
                                  const FairnessParams& params);

// Exact utilities for small graphs (exact_spread enumeration).
double exact_maximin_utility(const AttributedGraph& g,
                             std::span<const int> seeds);
// Total spread if every group reaches its exact demand (optimum inside
// G[C_i] with fair_allocation(G, k, i) seeds), else 0.
double exact_rational_utility(const AttributedGraph& g,
                              std::span<const int> seeds, int k);

}  // namespace fairspread

#endif  // FAIRSPREAD_FAIRNESS_H_
