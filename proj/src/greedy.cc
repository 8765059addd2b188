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

#include "fairspread/greedy.h"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>
#include <utility>

#include "fairspread/errors.h"

namespace fairspread {
namespace {

constexpr double kTieEps = 1e-9;

std::vector<std::vector<double>> weight_rows(const AttributedGraph& g,
                                             std::vector<double> w) {
  if (w.empty()) w.assign(g.node_count(), 1.0);
  return {std::move(w)};
}

// Lowest index among items within kTieEps of the best gain.
bool better(double gain, int item, double best_gain, int best_item) {
  if (best_item < 0) return true;
  if (gain > best_gain + kTieEps) return true;
  return gain >= best_gain - kTieEps && item < best_item;
}

void record(GreedyResult& r, MarginalObjective& obj, int item,
            const Estimate& g) {
  obj.commit(item);
  r.seeds.push_back(item);
  r.gains.push_back(g.value);
  r.gain_std_errors.push_back(g.std_error);
}

}  // namespace

SpreadObjective::SpreadObjective(const AttributedGraph& g, int num_samples,
                                 uint64_t master_seed,
                                 std::vector<double> node_weights)
    : ground_size_(g.node_count()),
      pool_(g, weight_rows(g, std::move(node_weights)), num_samples,
            master_seed) {}

SetFunctionObjective::SetFunctionObjective(int ground_size, Function f)
    : ground_size_(ground_size), f_(std::move(f)) {
  current_ = f_(members_);
}

Estimate SetFunctionObjective::gain(int item) {
  if (std::find(members_.begin(), members_.end(), item) != members_.end()) {
    return {0.0, 0.0};
  }
  std::vector<int> with = members_;
  with.push_back(item);
  return {f_(with) - current_, 0.0};
}

void SetFunctionObjective::commit(int item) {
  members_.push_back(item);
  current_ = f_(members_);
}

GreedyResult lazy_greedy(MarginalObjective& objective, int k) {
  const int n = objective.ground_size();
  if (k < 0) throw InvalidArgument("greedy budget must be nonnegative");
  const int rounds = std::min(k, n);
  GreedyResult result;
  if (rounds == 0) {
    result.value = objective.value();
    return result;
  }

  struct Entry {
    double bound;
    int item;
    int round;  // round in which `bound` was computed
  };
  auto cmp = [](const Entry& a, const Entry& b) {
    if (a.bound != b.bound) return a.bound < b.bound;
    return a.item > b.item;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> heap(cmp);
  std::vector<Estimate> fresh(n);
  for (int j = 0; j < n; ++j) {
    fresh[j] = objective.gain(j);
    ++result.evaluations;
    heap.push({fresh[j].value, j, 0});
  }

  for (int round = 0; round < rounds; ++round) {
    std::vector<Entry> popped;
    int best = -1;
    double best_gain = 0.0, best_se = 0.0;
    while (!heap.empty()) {
      const Entry top = heap.top();
      if (best >= 0 && top.bound <= best_gain + best_se - kTieEps) break;
      heap.pop();
      Entry e = top;
      if (e.round != round) {
        fresh[e.item] = objective.gain(e.item);
        ++result.evaluations;
        e.bound = fresh[e.item].value;
        e.round = round;
      }
      popped.push_back(e);
      if (best < 0 || e.bound > best_gain + kTieEps) {
        best = e.item;
        best_gain = e.bound;
        best_se = fresh[e.item].std_error;
      }
    }
    int chosen = -1;
    for (const Entry& e : popped) {
      if (e.bound >= best_gain - kTieEps &&
          (chosen < 0 || e.item < chosen)) {
        chosen = e.item;
      }
    }
    for (const Entry& e : popped) {
      if (e.item != chosen) heap.push(e);
    }
    record(result, objective, chosen, fresh[chosen]);
  }
  result.value = objective.value();
  return result;
}

GreedyResult naive_greedy(MarginalObjective& objective, int k) {
  const int n = objective.ground_size();
  if (k < 0) throw InvalidArgument("greedy budget must be nonnegative");
  const int rounds = std::min(k, n);
  GreedyResult result;
  std::vector<char> taken(n, 0);
  for (int round = 0; round < rounds; ++round) {
    int best = -1;
    Estimate best_gain;
    for (int j = 0; j < n; ++j) {
      if (taken[j]) continue;
      const Estimate g = objective.gain(j);
      ++result.evaluations;
      if (better(g.value, j, best_gain.value, best)) {
        best = j;
        best_gain = g;
      }
    }
    taken[best] = 1;
    record(result, objective, best, best_gain);
  }
  result.value = objective.value();
  return result;
}

namespace {

// Visits every size-r subset of [0, n) in lexicographic order.
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

double binomial(int n, int r) {
  double c = 1.0;
  for (int i = 1; i <= r; ++i) c = c * (n - r + i) / i;
  return c;
}

}  // namespace

double group_demand(const AttributedGraph& g, int group, int k_i,
                    const DemandOptions& options) {
  if (group < 0 || group >= g.group_count()) {
    throw InvalidArgument("group index " + std::to_string(group) +
                          " out of range");
  }
  if (k_i < 1) throw InvalidArgument("group budget must be positive");
  const InducedSubgraph sub = induced_subgraph(g, g.group(group));
  const AttributedGraph& h = sub.graph;
  const int budget = std::min(k_i, h.node_count());

  if (options.exact &&
      binomial(h.node_count(), budget) <=
          static_cast<double>(options.exact_max_subsets)) {
    try {
      double best = 0.0;
      for_each_subset(h.node_count(), budget, [&](std::span<const int> s) {
        best = std::max(best, exact_spread(h, s, options.exact_arc_cap).total);
      });
      return best;
    } catch (const EnumerationCapError&) {
      // Too many arcs for enumeration; use the greedy surrogate.
    }
  }

  SpreadObjective objective(h, options.num_samples,
                            derive_seed(options.seed, "demand-select"));
  const GreedyResult r = lazy_greedy(objective, budget);
  const double value =
      estimate_spread(h, r.seeds, options.num_samples,
                      derive_seed(options.seed, "demand-value"))
          .total;
  return std::min(value, static_cast<double>(h.node_count()));
}

}  // namespace fairspread
