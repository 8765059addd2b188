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

// Stochastic value and gradient oracles for the multilinear extensions of
// weighted coverage objectives f_i(S) = E_xi[weight_i(reach(S, xi))].

#ifndef FAIRSPREAD_ORACLES_H_
#define FAIRSPREAD_ORACLES_H_

#include <atomic>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "fairspread/cascade.h"
#include "fairspread/graph.h"
#include "fairspread/random.h"

namespace fairspread {

// A point of {x in [0,1]^n : |x|_1 <= budget}.
struct FractionalSeedVector {
  std::vector<double> values;
  int budget = 0;

  // Throws InvalidArgument if x is outside the polytope (1e-9 slack).
  void validate() const;
};

// Incremental evaluation of a growing set on a fixed sample pool.
class SetEvaluator {
 public:
  virtual ~SetEvaluator() = default;
  virtual std::vector<double> marginal(int item) const = 0;
  virtual void add(int item) = 0;
  virtual std::vector<double> current() const = 0;
};

// Oracle access to m monotone submodular objectives over n items and to
// their multilinear extensions. Every call is a pure function of its
// arguments (including `seed`).
class MultiObjectiveOracle {
 public:
  virtual ~MultiObjectiveOracle() = default;

  virtual int num_objectives() const = 0;
  virtual int ground_size() const = 0;

  // F_i(x) for every objective.
  virtual std::vector<Estimate> values(const FractionalSeedVector& x,
                                       int samples, uint64_t seed) const = 0;
  // One unbiased sample of grad F_i(x), entries in [0, gradient_bound()]
  // up to estimator failure.
  virtual std::vector<double> full_gradient(const FractionalSeedVector& x,
                                            int objective,
                                            uint64_t seed) const = 0;
  // One unbiased sample of (d/dx_item) F_i(x) for every i.
  virtual std::vector<double> item_gradient(const FractionalSeedVector& x,
                                            int item, uint64_t seed) const = 0;

  // f_i(set) for every objective.
  virtual std::vector<Estimate> set_values(std::span<const int> set,
                                           int samples,
                                           uint64_t seed) const = 0;
  virtual std::unique_ptr<SetEvaluator> make_set_evaluator(
      int samples, uint64_t seed) const = 0;

  // The objectives f_i(. | base) = f_i(. u base) - f_i(base). Items in the
  // base have zero marginal value.
  virtual std::unique_ptr<MultiObjectiveOracle> condition_on(
      std::span<const int> base) const = 0;
  virtual std::vector<int> base() const = 0;

  // Estimates of f_i({j}) for the unconditioned objectives, [i][j].
  virtual const std::vector<std::vector<Estimate>>& singleton_values()
      const = 0;
  // b = max_{i,j} f_i({j}).
  virtual double singleton_bound() const = 0;
  // c = 2b.
  double gradient_bound() const { return 2.0 * singleton_bound(); }
};

struct OracleConfig {
  // Failure probability of a full-gradient call.
  double delta = 0.01;
  // Cohen repetitions are ceil(cohen_multiplier * ln(n / delta)).
  double cohen_multiplier = 8.0;
  // Clamp Cohen size estimates to [0, 2b].
  bool clamp_cohen = true;
  int singleton_samples = 1000;
  int max_escalations = 3;
  uint64_t seed = 0;
};

// Estimates, for every node v, the total weight reachable from v over
// `live_arcs` among nodes with active[v] != 0 (exponential-rank sketches,
// ell repetitions). Nodes that reach no positive weight get 0. With ell = 1
// the estimate is 1/min-rank, which is biased; ell >= 2 is unbiased.
std::vector<double> cohen_estimate(const AttributedGraph& g,
                                   std::span<const int> live_arcs,
                                   std::span<const char> active,
                                   std::span<const double> weights, int ell,
                                   RandomStream rng);

// Influence objectives: objective i weights node v by weights[i][v].
class InfluenceOracles : public MultiObjectiveOracle {
 public:
  // `g` must outlive the oracle and anything derived from it.
  InfluenceOracles(const AttributedGraph& g,
                   std::vector<std::vector<double>> weights,
                   OracleConfig config = {});

  int num_objectives() const override {
    return static_cast<int>(weights_->size());
  }
  int ground_size() const override { return graph_->node_count(); }

  std::vector<Estimate> values(const FractionalSeedVector& x, int samples,
                               uint64_t seed) const override;
  std::vector<double> full_gradient(const FractionalSeedVector& x,
                                    int objective,
                                    uint64_t seed) const override;
  std::vector<double> item_gradient(const FractionalSeedVector& x, int item,
                                    uint64_t seed) const override;
  std::vector<Estimate> set_values(std::span<const int> set, int samples,
                                   uint64_t seed) const override;
  std::unique_ptr<SetEvaluator> make_set_evaluator(
      int samples, uint64_t seed) const override;
  std::unique_ptr<MultiObjectiveOracle> condition_on(
      std::span<const int> base) const override;
  std::vector<int> base() const override { return base_; }

  const std::vector<std::vector<Estimate>>& singleton_values() const override {
    return *singletons_;
  }
  double singleton_bound() const override { return b_; }

  const OracleConfig& config() const { return config_; }
  int cohen_repetitions() const;
  // Number of Cohen estimates clamped at 2b so far (diagnostic).
  int64_t clamped_estimates() const { return clamp_count_->value; }

 private:
  struct Counter {
    std::atomic<int64_t> value{0};
  };
  InfluenceOracles(const InfluenceOracles& parent, std::vector<int> base);

  // Draws S ~ x for sample key `key`.
  void draw_set(const FractionalSeedVector& x, uint64_t key,
                std::vector<char>& in_set) const;

  const AttributedGraph* graph_;
  std::shared_ptr<const std::vector<std::vector<double>>> weights_;
  OracleConfig config_;
  std::shared_ptr<const std::vector<std::vector<Estimate>>> singletons_;
  double b_ = 0.0;
  std::vector<int> base_;
  std::vector<char> in_base_;
  std::shared_ptr<Counter> clamp_count_;
};

// Per-node weights for group-count objectives: one row per group with
// weight 1 on members, optionally followed by a row of all ones for total
// spread.
std::vector<std::vector<double>> group_weights(const AttributedGraph& g,
                                               bool include_total);

// F_i(x) via the oracle's value sampler.
Estimate value_oracle(const MultiObjectiveOracle& oracle,
                      const FractionalSeedVector& x, int objective,
                      int num_samples, uint64_t master_seed);

}  // namespace fairspread

#endif  // FAIRSPREAD_ORACLES_H_
