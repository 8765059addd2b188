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

// Independent cascade simulation on live-edge graphs.
//
// A live-edge sample is identified by a 64-bit key: arc a is live iff the
// a-th draw of RandomStream(key) falls below p. Nothing is materialized
// unless a caller asks for it, so a BFS only pays for the arcs it touches.

#ifndef FAIRSPREAD_CASCADE_H_
#define FAIRSPREAD_CASCADE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "fairspread/graph.h"
#include "fairspread/random.h"

namespace fairspread {

// Mean of a Monte Carlo quantity and the standard error of that mean.
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

// Builds an Estimate from a sample count, sum and sum of squares.
Estimate make_estimate(double sum, double sum_sq, int64_t samples);

class LiveEdgeSample {
 public:
  LiveEdgeSample(const AttributedGraph& g, uint64_t key)
      : graph_(&g), key_(key), threshold_(threshold_for(g.p())) {}

  const AttributedGraph& graph() const { return *graph_; }
  uint64_t key() const { return key_; }

  bool live(int arc) const {
    return threshold_ != 0 &&
           (threshold_ == ~uint64_t{0} ||
            RandomStream(key_).at(static_cast<uint64_t>(arc)) < threshold_);
  }

  // Ids of all live arcs, ascending.
  std::vector<int> live_arcs() const;

 private:
  static uint64_t threshold_for(double p);

  const AttributedGraph* graph_;
  uint64_t key_;
  uint64_t threshold_;
};

// One realization drawn from `rng`; identical streams give identical
// samples. The returned sample refers to g, which must outlive it.
LiveEdgeSample sample_live_edges(const AttributedGraph& g,
                                 const RandomStream& rng);

// Key of the i-th live-edge sample of a Monte Carlo run.
inline uint64_t live_edge_key(uint64_t master_seed, int64_t sample) {
  return derive_seed(derive_seed(master_seed, static_cast<uint64_t>(sample)),
                     uint64_t{0x11fe});
}

// Reusable BFS state with epoch-stamped visit marks.
class ReachWorkspace {
 public:
  explicit ReachWorkspace(int node_count);

  // Forgets all marks. O(1) amortized.
  void clear();
  bool visited(int v) const { return mark_[v] == epoch_; }
  // Marks v and queues it; returns false if it was already marked.
  bool visit(int v);
  // Visits every unmarked node reachable over live arcs from the queued
  // nodes at positions >= `from`. Returns the new queue size.
  std::size_t expand(const LiveEdgeSample& sample, std::size_t from = 0);

  // Nodes marked since the last clear(), in visit order.
  const std::vector<int>& order() const { return order_; }

 private:
  std::vector<uint32_t> mark_;
  uint32_t epoch_ = 0;
  std::vector<int> order_;
};

// Nodes reachable from `seeds` over live arcs, seeds included, ascending.
std::vector<int> reachable(const LiveEdgeSample& sample,
                           std::span<const int> seeds);

struct SpreadEstimate {
  double total = 0.0;
  std::vector<double> per_group;
  int64_t samples = 0;
  double total_std_error = 0.0;
  std::vector<double> std_error;  // per group
};

// Monte Carlo estimate over num_samples live-edge samples keyed by
// live_edge_key(master_seed, i). The result does not depend on the number
// of worker threads.
SpreadEstimate estimate_spread(const AttributedGraph& g,
                               std::span<const int> seeds, int num_samples,
                               uint64_t master_seed);

inline constexpr int kDefaultExactArcCap = 25;

// Exact expectation by enumerating live/dead states of the arcs that can
// matter: arcs whose tail is reachable from the seeds in G and whose head is
// not a seed. Throws EnumerationCapError when more than `arc_cap` such arcs
// exist. std errors are 0.
SpreadEstimate exact_spread(const AttributedGraph& g,
                            std::span<const int> seeds,
                            int arc_cap = kDefaultExactArcCap);

// A pool of live-edge samples shared by many marginal-gain queries (common
// random numbers). Tracks, per sample, the nodes covered by the committed
// set. Each objective is a per-node weight vector; the value of a set under
// objective i is the expected total weight of the nodes it reaches.
class CoverageEstimator {
 public:
  CoverageEstimator(const AttributedGraph& g,
                    std::vector<std::vector<double>> node_weights,
                    int num_samples, uint64_t master_seed);

  int objective_count() const { return static_cast<int>(weights_.size()); }
  int sample_count() const { return num_samples_; }

  // Expected weight newly reached by adding v, per objective.
  std::vector<Estimate> marginal(int v) const;
  void add(int v);
  std::vector<Estimate> value() const;
  const std::vector<int>& members() const { return members_; }

 private:
  bool covered(int sample, int v) const {
    return (covered_[static_cast<std::size_t>(sample) * words_ + (v >> 6)] >>
            (v & 63)) &
           1u;
  }

  const AttributedGraph* graph_;
  std::vector<std::vector<double>> weights_;
  int num_samples_;
  uint64_t master_seed_;
  std::size_t words_;
  std::vector<uint64_t> covered_;
  // Per objective, per sample: covered weight.
  std::vector<std::vector<double>> covered_weight_;
  std::vector<int> members_;
};

}  // namespace fairspread

#endif  // FAIRSPREAD_CASCADE_H_
