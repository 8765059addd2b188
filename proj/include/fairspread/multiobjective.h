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

// Multiobjective submodular maximization under a cardinality budget:
// threshold include, multiobjective Frank-Wolfe with a stochastic
// saddle-point mirror descent inner loop, and swap rounding.

#ifndef FAIRSPREAD_MULTIOBJECTIVE_H_
#define FAIRSPREAD_MULTIOBJECTIVE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "fairspread/oracles.h"
#include "fairspread/random.h"

namespace fairspread {

struct MultiObjectiveParams {
  // Solve precision: active-set gap, the guarantee's additive slack.
  double epsilon = 0.01;
  // Threshold step admits items worth (1 + oracle_epsilon) *
  // threshold_epsilon^3 * W_i. Kept separate from `epsilon` because
  // epsilon^3 is tiny at practical budgets.
  double threshold_epsilon = 0.8;
  double oracle_epsilon = 0.1;
  int fw_iterations = 100;
  int md_iterations = 500;
  // Multiplies both mirror-descent step sizes.
  double eta_scale = 3.0;
  int value_samples = 1000;
  int rounding_repetitions = 5;
  int selection_samples = 1000;
  uint64_t seed = 0;
};

// Items whose estimated singleton value reaches the per-objective
// threshold, considered in decreasing order of sum_i min(1, f_i({j})/W_i)
// (lowest index first on ties). An item is kept only if its marginal value
// with respect to the items already kept, truncated at W_i, still clears
// the threshold for some objective. Throws InfeasibleBudgetError when more
// than k items are selected.
std::vector<int> threshold_include(const MultiObjectiveOracle& oracle,
                                   std::span<const double> targets, int k,
                                   double threshold_epsilon,
                                   double oracle_epsilon, int samples,
                                   uint64_t seed);

// Projection in KL divergence of a positive vector onto
// {v : 0 <= v_j <= 1, sum v = total} restricted to `eligible` coordinates
// (others are set to 0). Requires total <= number of eligible coordinates.
std::vector<double> project_capped_simplex(std::span<const double> v,
                                           std::span<const char> eligible,
                                           double total);

struct SaddleState {
  std::vector<double> v;      // max player, averaged
  std::vector<double> y;      // min player over active objectives, last
  double eta_v = 0.0;
  double eta_y = 0.0;
  int iterations = 0;
};

// Inner loop for one Frank-Wolfe step at x. `active` lists objective
// indices, `gaps[q]` = W_i - F_i(x) for active[q] (all > 0). Returns the
// average of the v iterates, a point with sum = rank on the coordinates
// outside the oracle's base.
SaddleState ssp_md(const MultiObjectiveOracle& oracle,
                   const FractionalSeedVector& x, std::span<const int> active,
                   std::span<const double> gaps, int rank, int iterations,
                   double eta_scale, uint64_t seed);

struct ConvexDecomposition {
  int ground_size = 0;
  int rank = 0;
  std::vector<double> weights;
  // Each base has exactly `rank` elements; ids >= ground_size are dummies.
  std::vector<std::vector<int>> bases;

  // sum_r weights[r] * 1_{bases[r]}, restricted to real coordinates.
  std::vector<double> point() const;
};

// Exact decomposition of x (padded with `rank` dummy coordinates up to
// sum = rank) into bases of the rank-`rank` uniform matroid. Throws
// InvalidArgument if x is outside the polytope.
ConvexDecomposition decompose(const FractionalSeedVector& x, int rank,
                              double tol = 1e-12);

// One swap-rounding pass over the decomposition, dummies removed.
std::vector<int> swap_round_once(const ConvexDecomposition& d,
                                 RandomStream& rng);

// Best of `repetitions` swap roundings by min_i f_i(prefix u S) / W_i,
// every candidate scored on the same sample pool; earliest repetition wins
// ties. Objectives with W_i <= 0 are ignored by the criterion.
std::vector<int> swap_round(const ConvexDecomposition& d, int repetitions,
                            const MultiObjectiveOracle& selector,
                            std::span<const double> targets, int samples,
                            uint64_t seed, std::span<const int> prefix = {});

struct FrankWolfeResult {
  FractionalSeedVector x;
  ConvexDecomposition decomposition;
  // value_trace[t][i] = F_i(x^t) estimate, t = 0..T.
  std::vector<std::vector<double>> value_trace;
  std::vector<int> active_counts;
};

FrankWolfeResult multi_fw(const MultiObjectiveOracle& oracle,
                          std::span<const double> targets, int rank,
                          const MultiObjectiveParams& params);

struct ObjectiveReport {
  double target = 0.0;
  double achieved = 0.0;
  double std_error = 0.0;
  double ratio = 0.0;  // achieved / target, 1 when target is 0
  double bound = 0.0;  // guaranteed level at the given parameters
  bool met = false;    // achieved >= bound
};

struct MultiObjectiveResult {
  std::vector<int> seeds;
  std::vector<int> threshold_items;
  std::vector<int> rounded_items;
  // Budget left unused by rounding (dummy slots), filled greedily.
  std::vector<int> fill_items;
  std::vector<ObjectiveReport> reports;
  FrankWolfeResult fw;
};

// Threshold include, then Frank-Wolfe on the conditional objectives with
// the residual budget and scaled residual targets, then swap rounding.
// Slots the rounding leaves empty are filled greedily by min_i f_i / W_i.
// Achieved values are estimated on `params.selection_samples` fresh
// samples.
MultiObjectiveResult multiobjective_maximize(
    const MultiObjectiveOracle& oracle, std::span<const double> targets,
    int k, const MultiObjectiveParams& params);

}  // namespace fairspread

#endif  // FAIRSPREAD_MULTIOBJECTIVE_H_
