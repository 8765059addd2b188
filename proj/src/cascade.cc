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

#include "fairspread/cascade.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "fairspread/errors.h"
#include "fairspread/parallel.h"

namespace fairspread {
namespace {

constexpr int kSamplesPerChunk = 64;

ReachWorkspace& local_workspace(int n) {
  thread_local ReachWorkspace workspace(0);
  thread_local int size = 0;
  if (size < n) {
    workspace = ReachWorkspace(n);
    size = n;
  }
  workspace.clear();
  return workspace;
}

std::size_t chunk_count(int samples) {
  return static_cast<std::size_t>((samples + kSamplesPerChunk - 1) /
                                  kSamplesPerChunk);
}

}  // namespace

Estimate make_estimate(double sum, double sum_sq, int64_t samples) {
  if (samples <= 0) return {};
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  if (samples == 1) return {mean, 0.0};
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n)};
}

uint64_t LiveEdgeSample::threshold_for(double p) {
  if (p <= 0.0) return 0;
  if (p >= 1.0) return ~uint64_t{0};
  const double scaled = std::ldexp(p, 64);
  if (scaled >= 18446744073709551615.0) return ~uint64_t{0};
  return static_cast<uint64_t>(scaled);
}

std::vector<int> LiveEdgeSample::live_arcs() const {
  std::vector<int> out;
  for (int a = 0; a < graph_->arc_count(); ++a) {
    if (live(a)) out.push_back(a);
  }
  return out;
}

LiveEdgeSample sample_live_edges(const AttributedGraph& g,
                                 const RandomStream& rng) {
  return LiveEdgeSample(g, rng.key());
}

ReachWorkspace::ReachWorkspace(int node_count) : mark_(node_count, 0) {
  order_.reserve(node_count);
}

void ReachWorkspace::clear() {
  order_.clear();
  if (++epoch_ == 0) {
    std::fill(mark_.begin(), mark_.end(), 0);
    epoch_ = 1;
  }
}

bool ReachWorkspace::visit(int v) {
  if (mark_[v] == epoch_) return false;
  mark_[v] = epoch_;
  order_.push_back(v);
  return true;
}

std::size_t ReachWorkspace::expand(const LiveEdgeSample& sample,
                                   std::size_t from) {
  const AttributedGraph& g = sample.graph();
  for (std::size_t i = from; i < order_.size(); ++i) {
    const int u = order_[i];
    for (const int a : g.out_arcs(u)) {
      const int w = g.arc(a).head;
      if (mark_[w] != epoch_ && sample.live(a)) visit(w);
    }
  }
  return order_.size();
}

std::vector<int> reachable(const LiveEdgeSample& sample,
                           std::span<const int> seeds) {
  ReachWorkspace ws(sample.graph().node_count());
  ws.clear();
  for (const int s : seeds) ws.visit(s);
  ws.expand(sample);
  std::vector<int> out = ws.order();
  std::sort(out.begin(), out.end());
  return out;
}

SpreadEstimate estimate_spread(const AttributedGraph& g,
                               std::span<const int> seeds, int num_samples,
                               uint64_t master_seed) {
  if (num_samples < 1) throw InvalidArgument("num_samples must be >= 1");
  for (const int s : seeds) {
    if (s < 0 || s >= g.node_count()) {
      throw ValidationError("seed " + std::to_string(s) +
                            " is not a node of the graph");
    }
  }
  const int m = g.group_count();
  const std::size_t chunks = chunk_count(num_samples);
  // Integer moments make the reduction independent of scheduling.
  struct Moments {
    int64_t sum = 0, sum_sq = 0;
    std::vector<int64_t> group_sum, group_sum_sq;
  };
  std::vector<Moments> partial(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    Moments& mo = partial[c];
    mo.group_sum.assign(m, 0);
    mo.group_sum_sq.assign(m, 0);
    std::vector<int64_t> counts(m);
    const int begin = static_cast<int>(c) * kSamplesPerChunk;
    const int end = std::min(num_samples, begin + kSamplesPerChunk);
    for (int t = begin; t < end; ++t) {
      ReachWorkspace& ws = local_workspace(g.node_count());
      for (const int s : seeds) ws.visit(s);
      ws.expand(LiveEdgeSample(g, live_edge_key(master_seed, t)));
      std::fill(counts.begin(), counts.end(), 0);
      for (const int v : ws.order()) {
        for (const int i : g.groups_of(v)) ++counts[i];
      }
      const int64_t total = static_cast<int64_t>(ws.order().size());
      mo.sum += total;
      mo.sum_sq += total * total;
      for (int i = 0; i < m; ++i) {
        mo.group_sum[i] += counts[i];
        mo.group_sum_sq[i] += counts[i] * counts[i];
      }
    }
  });
  Moments all;
  all.group_sum.assign(m, 0);
  all.group_sum_sq.assign(m, 0);
  for (const Moments& mo : partial) {
    all.sum += mo.sum;
    all.sum_sq += mo.sum_sq;
    for (int i = 0; i < m; ++i) {
      all.group_sum[i] += mo.group_sum[i];
      all.group_sum_sq[i] += mo.group_sum_sq[i];
    }
  }
  SpreadEstimate out;
  out.samples = num_samples;
  const Estimate total =
      make_estimate(static_cast<double>(all.sum),
                    static_cast<double>(all.sum_sq), num_samples);
  out.total = total.value;
  out.total_std_error = total.std_error;
  for (int i = 0; i < m; ++i) {
    const Estimate e =
        make_estimate(static_cast<double>(all.group_sum[i]),
                      static_cast<double>(all.group_sum_sq[i]), num_samples);
    out.per_group.push_back(e.value);
    out.std_error.push_back(e.std_error);
  }
  return out;
}

namespace {

// Depth-first enumeration over the live/dead state of every arc that leaves
// the reached set, in discovery order. Arcs into already reached nodes are
// never branched on, so the number of leaves is usually far below 2^arcs.
class ExactEnumerator {
 public:
  ExactEnumerator(const AttributedGraph& g) : g_(g) {
    reached_.assign(g.node_count(), 0);
    group_count_.assign(g.group_count(), 0);
    group_acc_.assign(g.group_count(), 0.0L);
  }

  void seed(int v) { reach(v); }

  void run() { explore(0, 1.0); }

  double total() const { return static_cast<double>(total_acc_); }
  std::vector<double> groups() const {
    return std::vector<double>(group_acc_.begin(), group_acc_.end());
  }

 private:
  void reach(int v) {
    reached_[v] = 1;
    ++total_count_;
    for (const int i : g_.groups_of(v)) ++group_count_[i];
    for (const int a : g_.out_arcs(v)) frontier_.push_back(a);
  }

  void unreach(int v, std::size_t frontier_size) {
    reached_[v] = 0;
    --total_count_;
    for (const int i : g_.groups_of(v)) --group_count_[i];
    frontier_.resize(frontier_size);
  }

  // Extended precision: the sum runs over up to 2^cap leaves.
  void explore(std::size_t idx, long double prob) {
    while (idx < frontier_.size() && reached_[g_.arc(frontier_[idx]).head]) {
      ++idx;
    }
    if (idx == frontier_.size()) {
      total_acc_ += prob * total_count_;
      for (std::size_t i = 0; i < group_count_.size(); ++i) {
        group_acc_[i] += prob * group_count_[i];
      }
      return;
    }
    const double p = g_.p();
    const int head = g_.arc(frontier_[idx]).head;
    if (p < 1.0) explore(idx + 1, prob * (1.0 - p));
    if (p > 0.0) {
      const std::size_t saved = frontier_.size();
      reach(head);
      explore(idx + 1, prob * p);
      unreach(head, saved);
    }
  }

  const AttributedGraph& g_;
  std::vector<char> reached_;
  std::vector<int> frontier_;
  int64_t total_count_ = 0;
  std::vector<int64_t> group_count_;
  long double total_acc_ = 0.0L;
  std::vector<long double> group_acc_;
};

}  // namespace

SpreadEstimate exact_spread(const AttributedGraph& g,
                            std::span<const int> seeds, int arc_cap) {
  std::vector<char> is_seed(g.node_count(), 0);
  for (const int s : seeds) {
    if (s < 0 || s >= g.node_count()) {
      throw ValidationError("seed " + std::to_string(s) +
                            " is not a node of the graph");
    }
    is_seed[s] = 1;
  }
  // Full-graph reachability bounds the arcs that can change the outcome.
  std::vector<char> seen(g.node_count(), 0);
  std::vector<int> queue;
  for (int v = 0; v < g.node_count(); ++v) {
    if (is_seed[v]) {
      seen[v] = 1;
      queue.push_back(v);
    }
  }
  int relevant = 0;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    for (const int a : g.out_arcs(queue[i])) {
      const int w = g.arc(a).head;
      if (is_seed[w]) continue;
      if (g.p() > 0.0) ++relevant;
      if (!seen[w]) {
        seen[w] = 1;
        queue.push_back(w);
      }
    }
  }
  if (relevant > arc_cap) {
    throw EnumerationCapError(
        std::to_string(relevant) + " arcs affect the spread, above the exact "
        "enumeration cap of " + std::to_string(arc_cap) +
        "; use estimate_spread instead");
  }
  ExactEnumerator en(g);
  for (int v = 0; v < g.node_count(); ++v) {
    if (is_seed[v]) en.seed(v);
  }
  en.run();
  SpreadEstimate out;
  out.total = en.total();
  out.per_group = en.groups();
  out.std_error.assign(g.group_count(), 0.0);
  return out;
}

CoverageEstimator::CoverageEstimator(
    const AttributedGraph& g, std::vector<std::vector<double>> node_weights,
    int num_samples, uint64_t master_seed)
    : graph_(&g),
      weights_(std::move(node_weights)),
      num_samples_(num_samples),
      master_seed_(master_seed),
      words_(static_cast<std::size_t>((g.node_count() + 63) / 64)) {
  if (num_samples_ < 1) throw InvalidArgument("num_samples must be >= 1");
  for (const auto& w : weights_) {
    if (static_cast<int>(w.size()) != g.node_count()) {
      throw InvalidArgument("weight vector length differs from node count");
    }
  }
  covered_.assign(words_ * num_samples_, 0);
  covered_weight_.assign(weights_.size(),
                         std::vector<double>(num_samples_, 0.0));
}

std::vector<Estimate> CoverageEstimator::marginal(int v) const {
  const int k = objective_count();
  const std::size_t chunks = chunk_count(num_samples_);
  std::vector<std::vector<double>> sums(chunks, std::vector<double>(2 * k));
  parallel_for(chunks, [&](std::size_t c) {
    std::vector<double>& acc = sums[c];
    std::vector<double> gain(k);
    const int begin = static_cast<int>(c) * kSamplesPerChunk;
    const int end = std::min(num_samples_, begin + kSamplesPerChunk);
    for (int t = begin; t < end; ++t) {
      if (covered(t, v)) continue;
      ReachWorkspace& ws = local_workspace(graph_->node_count());
      const LiveEdgeSample sample(*graph_, live_edge_key(master_seed_, t));
      ws.visit(v);
      for (std::size_t q = 0; q < ws.order().size(); ++q) {
        const int u = ws.order()[q];
        for (const int a : graph_->out_arcs(u)) {
          const int w = graph_->arc(a).head;
          if (!ws.visited(w) && !covered(t, w) && sample.live(a)) ws.visit(w);
        }
      }
      std::fill(gain.begin(), gain.end(), 0.0);
      for (const int u : ws.order()) {
        for (int i = 0; i < k; ++i) gain[i] += weights_[i][u];
      }
      for (int i = 0; i < k; ++i) {
        acc[2 * i] += gain[i];
        acc[2 * i + 1] += gain[i] * gain[i];
      }
    }
  });
  std::vector<Estimate> out(k);
  for (int i = 0; i < k; ++i) {
    double s = 0.0, s2 = 0.0;
    for (const auto& acc : sums) {
      s += acc[2 * i];
      s2 += acc[2 * i + 1];
    }
    out[i] = make_estimate(s, s2, num_samples_);
  }
  return out;
}

void CoverageEstimator::add(int v) {
  if (v < 0 || v >= graph_->node_count()) {
    throw InvalidArgument("node " + std::to_string(v) + " out of range");
  }
  members_.push_back(v);
  const int k = objective_count();
  parallel_for(chunk_count(num_samples_), [&](std::size_t c) {
    const int begin = static_cast<int>(c) * kSamplesPerChunk;
    const int end = std::min(num_samples_, begin + kSamplesPerChunk);
    for (int t = begin; t < end; ++t) {
      if (covered(t, v)) continue;
      uint64_t* bits = covered_.data() + static_cast<std::size_t>(t) * words_;
      const LiveEdgeSample sample(*graph_, live_edge_key(master_seed_, t));
      std::vector<int> stack{v};
      bits[v >> 6] |= uint64_t{1} << (v & 63);
      while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int i = 0; i < k; ++i) covered_weight_[i][t] += weights_[i][u];
        for (const int a : graph_->out_arcs(u)) {
          const int w = graph_->arc(a).head;
          if (!covered(t, w) && sample.live(a)) {
            bits[w >> 6] |= uint64_t{1} << (w & 63);
            stack.push_back(w);
          }
        }
      }
    }
  });
}

std::vector<Estimate> CoverageEstimator::value() const {
  std::vector<Estimate> out;
  for (const auto& per_sample : covered_weight_) {
    double s = 0.0, s2 = 0.0;
    for (const double x : per_sample) {
      s += x;
      s2 += x * x;
    }
    out.push_back(make_estimate(s, s2, num_samples_));
  }
  return out;
}

}  // namespace fairspread
