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

// Greedy maximization of monotone submodular set functions.

#ifndef FAIRSPREAD_GREEDY_H_
#define FAIRSPREAD_GREEDY_H_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fairspread/cascade.h"
#include "fairspread/graph.h"

namespace fairspread {

// A set function explored one element at a time. gain() is the marginal
// value of `item` with respect to the committed set.
class MarginalObjective {
 public:
  virtual ~MarginalObjective() = default;
  virtual int ground_size() const = 0;
  virtual Estimate gain(int item) = 0;
  virtual void commit(int item) = 0;
  virtual Estimate value() const = 0;
};

// Expected spread in g, optionally weighted per node (default: every node
// counts 1), estimated on a fixed pool of live-edge samples.
class SpreadObjective : public MarginalObjective {
 public:
  SpreadObjective(const AttributedGraph& g, int num_samples,
                  uint64_t master_seed, std::vector<double> node_weights = {});

  int ground_size() const override { return ground_size_; }
  Estimate gain(int item) override { return pool_.marginal(item)[0]; }
  void commit(int item) override { pool_.add(item); }
  Estimate value() const override { return pool_.value()[0]; }

 private:
  int ground_size_;
  CoverageEstimator pool_;
};

// Wraps an exact set function f(S) (std error 0).
class SetFunctionObjective : public MarginalObjective {
 public:
  using Function = std::function<double(std::span<const int>)>;
  SetFunctionObjective(int ground_size, Function f);

  int ground_size() const override { return ground_size_; }
  Estimate gain(int item) override;
  void commit(int item) override;
  Estimate value() const override { return {current_, 0.0}; }

 private:
  int ground_size_;
  Function f_;
  std::vector<int> members_;
  double current_;
};

struct GreedyResult {
  std::vector<int> seeds;  // in selection order
  std::vector<double> gains;
  std::vector<double> gain_std_errors;
  Estimate value;
  int64_t evaluations = 0;
};

// CELF lazy greedy. Returns min(k, n) items. A stale bound is re-evaluated
// only while it exceeds the best fresh gain by more than that gain's std
// error; among fresh gains within 1e-9 of the best the lowest index wins.
GreedyResult lazy_greedy(MarginalObjective& objective, int k);

// Reference implementation evaluating every remaining item each round.
GreedyResult naive_greedy(MarginalObjective& objective, int k);

struct DemandOptions {
  int num_samples = 1000;
  uint64_t seed = 0;
  // Brute-force optimum of the induced subgraph when it is small enough
  // for exact_spread; otherwise falls back to greedy.
  bool exact = false;
  int exact_arc_cap = kDefaultExactArcCap;
  int64_t exact_max_subsets = 200000;
};

// Influence group i can generate on its own with k_i seeds: the spread of
// the greedy (or exact) seed set inside G[C_i]. The greedy value is
// re-estimated on independent samples so selection noise does not inflate
// it.
double group_demand(const AttributedGraph& g, int group, int k_i,
                    const DemandOptions& options = {});

}  // namespace fairspread

#endif  // FAIRSPREAD_GREEDY_H_
