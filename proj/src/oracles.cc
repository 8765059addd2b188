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

#include "fairspread/oracles.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "fairspread/errors.h"
#include "fairspread/parallel.h"

namespace fairspread {
namespace {

constexpr int kSamplesPerChunk = 64;

// Sample t of a Monte Carlo run: S ~ x uses derive_seed(key, 1), the
// live-edge graph uses derive_seed(key, 2).
uint64_t sample_key(uint64_t seed, int64_t t) {
  return derive_seed(seed, static_cast<uint64_t>(t));
}

LiveEdgeSample sample_graph(const AttributedGraph& g, uint64_t key) {
  return LiveEdgeSample(g, derive_seed(key, 2));
}

void add_weights(const std::vector<std::vector<double>>& w,
                 std::span<const int> nodes, std::size_t from,
                 std::vector<double>& acc) {
  for (std::size_t r = 0; r < w.size(); ++r) {
    double s = 0.0;
    for (std::size_t q = from; q < nodes.size(); ++q) s += w[r][nodes[q]];
    acc[r] += s;
  }
}

class BaseCoverageEvaluator : public SetEvaluator {
 public:
  BaseCoverageEvaluator(const AttributedGraph& g,
                        std::vector<std::vector<double>> weights,
                        std::span<const int> base, int samples, uint64_t seed)
      : pool_(g, std::move(weights), samples, seed) {
    for (const int v : base) pool_.add(v);
    for (const Estimate& e : pool_.value()) offset_.push_back(e.value);
  }

  std::vector<double> marginal(int item) const override {
    std::vector<double> out;
    for (const Estimate& e : pool_.marginal(item)) out.push_back(e.value);
    return out;
  }
  void add(int item) override { pool_.add(item); }
  std::vector<double> current() const override {
    std::vector<double> out;
    const auto v = pool_.value();
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back(v[i].value - offset_[i]);
    }
    return out;
  }

 private:
  CoverageEstimator pool_;
  std::vector<double> offset_;
};

}  // namespace

void FractionalSeedVector::validate() const {
  if (budget < 0) throw InvalidArgument("negative budget");
  double sum = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    const double v = values[j];
    if (!(v >= -1e-9 && v <= 1.0 + 1e-9)) {
      throw InvalidArgument("coordinate " + std::to_string(j) +
                            " outside [0, 1]");
    }
    sum += v;
  }
  if (sum > budget + 1e-9) {
    throw InvalidArgument("fractional vector exceeds budget " +
                          std::to_string(budget));
  }
}

std::vector<double> cohen_estimate(const AttributedGraph& g,
                                   std::span<const int> live_arcs,
                                   std::span<const char> active,
                                   std::span<const double> weights, int ell,
                                   RandomStream rng) {
  if (ell < 1) throw InvalidArgument("Cohen repetitions must be >= 1");
  const int n = g.node_count();
  // Reverse adjacency restricted to live arcs between active nodes.
  std::vector<int> offsets(n + 1, 0);
  for (const int a : live_arcs) {
    const Arc& arc = g.arc(a);
    if (active[arc.tail] && active[arc.head]) ++offsets[arc.head + 1];
  }
  for (int v = 0; v < n; ++v) offsets[v + 1] += offsets[v];
  std::vector<int> preds(offsets[n]);
  {
    std::vector<int> cursor(offsets.begin(), offsets.end() - 1);
    for (const int a : live_arcs) {
      const Arc& arc = g.arc(a);
      if (active[arc.tail] && active[arc.head]) {
        preds[cursor[arc.head]++] = arc.tail;
      }
    }
  }
  std::vector<int> sources;
  for (int v = 0; v < n; ++v) {
    if (active[v] && weights[v] > 0.0) sources.push_back(v);
  }
  std::vector<double> sum_min(n, 0.0);
  std::vector<char> reaches(n, 0);
  if (sources.empty()) return std::vector<double>(n, 0.0);

  std::vector<std::pair<double, int>> ranked(sources.size());
  std::vector<uint32_t> mark(n, 0);
  std::vector<int> stack;
  for (int r = 0; r < ell; ++r) {
    const RandomStream rep = rng.child(static_cast<uint64_t>(r));
    for (std::size_t q = 0; q < sources.size(); ++q) {
      const int u = sources[q];
      ranked[q] = {-std::log1p(-rep.uniform_at(static_cast<uint64_t>(u))) /
                       weights[u],
                   u};
    }
    std::sort(ranked.begin(), ranked.end());
    const uint32_t epoch = static_cast<uint32_t>(r + 1);
    for (const auto& [rank, u] : ranked) {
      if (mark[u] == epoch) continue;
      mark[u] = epoch;
      stack.assign(1, u);
      while (!stack.empty()) {
        const int w = stack.back();
        stack.pop_back();
        sum_min[w] += rank;
        reaches[w] = 1;
        for (int q = offsets[w]; q < offsets[w + 1]; ++q) {
          const int pred = preds[q];
          if (mark[pred] != epoch) {
            mark[pred] = epoch;
            stack.push_back(pred);
          }
        }
      }
    }
  }
  std::vector<double> out(n, 0.0);
  const double numer = ell >= 2 ? ell - 1.0 : 1.0;
  for (int v = 0; v < n; ++v) {
    if (active[v] && reaches[v] && sum_min[v] > 0.0) out[v] = numer / sum_min[v];
  }
  return out;
}

std::vector<std::vector<double>> group_weights(const AttributedGraph& g,
                                               bool include_total) {
  std::vector<std::vector<double>> rows(g.group_count(),
                                        std::vector<double>(g.node_count()));
  for (int i = 0; i < g.group_count(); ++i) {
    for (const int v : g.group(i)) rows[i][v] = 1.0;
  }
  if (include_total) rows.emplace_back(g.node_count(), 1.0);
  return rows;
}

InfluenceOracles::InfluenceOracles(const AttributedGraph& g,
                                   std::vector<std::vector<double>> weights,
                                   OracleConfig config)
    : graph_(&g),
      weights_(std::make_shared<const std::vector<std::vector<double>>>(
          std::move(weights))),
      config_(config),
      in_base_(g.node_count(), 0),
      clamp_count_(std::make_shared<Counter>()) {
  if (weights_->empty()) throw InvalidArgument("no objectives");
  for (const auto& row : *weights_) {
    if (static_cast<int>(row.size()) != g.node_count()) {
      throw InvalidArgument("objective weight row has wrong length");
    }
    for (const double w : row) {
      if (!(w >= 0.0)) throw InvalidArgument("objective weights must be >= 0");
    }
  }
  if (!(config_.delta > 0.0 && config_.delta < 1.0)) {
    throw InvalidArgument("delta must lie in (0, 1)");
  }
  CoverageEstimator pool(g, *weights_, config_.singleton_samples,
                         derive_seed(config_.seed, "singletons"));
  const int m = num_objectives();
  auto table = std::make_shared<std::vector<std::vector<Estimate>>>(
      m, std::vector<Estimate>(g.node_count()));
  for (int j = 0; j < g.node_count(); ++j) {
    const auto e = pool.marginal(j);
    for (int i = 0; i < m; ++i) {
      (*table)[i][j] = e[i];
      b_ = std::max(b_, e[i].value);
    }
  }
  singletons_ = std::move(table);
}

InfluenceOracles::InfluenceOracles(const InfluenceOracles& parent,
                                   std::vector<int> base)
    : graph_(parent.graph_),
      weights_(parent.weights_),
      config_(parent.config_),
      singletons_(parent.singletons_),
      b_(parent.b_),
      base_(std::move(base)),
      in_base_(parent.graph_->node_count(), 0),
      clamp_count_(parent.clamp_count_) {
  for (const int v : base_) in_base_[v] = 1;
}

int InfluenceOracles::cohen_repetitions() const {
  const double n = graph_->node_count();
  return std::max(
      2, static_cast<int>(std::ceil(config_.cohen_multiplier *
                                    std::log(n / config_.delta))));
}

void InfluenceOracles::draw_set(const FractionalSeedVector& x, uint64_t key,
                                std::vector<char>& in_set) const {
  const RandomStream coins(derive_seed(key, 1));
  const int n = graph_->node_count();
  in_set.assign(n, 0);
  for (int j = 0; j < n; ++j) {
    const double xj = x.values[j];
    if (xj > 0.0 && coins.uniform_at(static_cast<uint64_t>(j)) < xj) {
      in_set[j] = 1;
    }
  }
}

std::vector<Estimate> InfluenceOracles::values(const FractionalSeedVector& x,
                                               int samples,
                                               uint64_t seed) const {
  if (samples < 1) throw InvalidArgument("samples must be >= 1");
  if (static_cast<int>(x.values.size()) != ground_size()) {
    throw InvalidArgument("fractional vector has wrong length");
  }
  const int m = num_objectives();
  const int n = ground_size();
  const std::size_t chunks =
      static_cast<std::size_t>((samples + kSamplesPerChunk - 1) /
                               kSamplesPerChunk);
  std::vector<std::vector<double>> moments(chunks,
                                           std::vector<double>(2 * m, 0.0));
  parallel_for(chunks, [&](std::size_t c) {
    ReachWorkspace ws(n);
    std::vector<char> in_set;
    std::vector<double> base_w(m), all_w(m);
    const int begin = static_cast<int>(c) * kSamplesPerChunk;
    const int end = std::min(samples, begin + kSamplesPerChunk);
    for (int t = begin; t < end; ++t) {
      const uint64_t key = sample_key(seed, t);
      draw_set(x, key, in_set);
      const LiveEdgeSample xi = sample_graph(*graph_, key);
      ws.clear();
      for (const int v : base_) ws.visit(v);
      const std::size_t base_end = ws.expand(xi);
      for (int j = 0; j < n; ++j) {
        if (in_set[j]) ws.visit(j);
      }
      ws.expand(xi, base_end);
      std::fill(all_w.begin(), all_w.end(), 0.0);
      add_weights(*weights_, ws.order(), base_end, all_w);
      for (int i = 0; i < m; ++i) {
        moments[c][2 * i] += all_w[i];
        moments[c][2 * i + 1] += all_w[i] * all_w[i];
      }
    }
  });
  std::vector<Estimate> out(m);
  for (int i = 0; i < m; ++i) {
    double s = 0.0, s2 = 0.0;
    for (const auto& mo : moments) {
      s += mo[2 * i];
      s2 += mo[2 * i + 1];
    }
    out[i] = make_estimate(s, s2, samples);
  }
  return out;
}

std::vector<double> InfluenceOracles::item_gradient(
    const FractionalSeedVector& x, int item, uint64_t seed) const {
  const int m = num_objectives();
  const int n = ground_size();
  if (item < 0 || item >= n) throw InvalidArgument("item out of range");
  std::vector<double> out(m, 0.0);
  if (in_base_[item]) return out;
  const uint64_t key = derive_seed(seed, "item");
  std::vector<char> in_set;
  draw_set(x, key, in_set);
  const LiveEdgeSample xi = sample_graph(*graph_, key);
  ReachWorkspace ws(n);
  ws.clear();
  for (const int v : base_) ws.visit(v);
  for (int j = 0; j < n; ++j) {
    if (in_set[j] && j != item) ws.visit(j);
  }
  const std::size_t before = ws.expand(xi);
  if (!ws.visit(item)) return out;
  ws.expand(xi, before);
  add_weights(*weights_, ws.order(), before, out);
  return out;
}

std::vector<double> InfluenceOracles::full_gradient(
    const FractionalSeedVector& x, int objective, uint64_t seed) const {
  const int n = ground_size();
  if (objective < 0 || objective >= num_objectives()) {
    throw InvalidArgument("objective index out of range");
  }
  if (static_cast<int>(x.values.size()) != n) {
    throw InvalidArgument("fractional vector has wrong length");
  }
  const std::vector<double>& w = (*weights_)[objective];
  const int k = std::max(1, x.budget);
  const double high = 1.0 - 1.0 / (k + 1.0);
  std::vector<double> grad(n, 0.0);
  std::vector<char> resolved(n, 0);
  int pending = 0;

  // Two-point estimates for nodes that are rarely absent from S.
  for (int j = 0; j < n; ++j) {
    if (in_base_[j]) {
      resolved[j] = 1;
    } else if (x.values[j] >= high) {
      grad[j] = item_gradient(x, j, derive_seed(derive_seed(seed, "high"),
                                                static_cast<uint64_t>(j)))
                    [objective];
      resolved[j] = 1;
    } else {
      ++pending;
    }
  }

  const int64_t pool = static_cast<int64_t>(
      std::ceil((k + 1.0) * std::log(n / config_.delta)));
  const uint64_t pool_seed = derive_seed(seed, "pool");
  const double cap = gradient_bound();
  int64_t limit = pool;
  int escalations = 0;
  ReachWorkspace ws(n);
  std::vector<char> in_set, removed(n);
  std::vector<int> live;
  for (int64_t t = 0; pending > 0; ++t) {
    if (t == limit) {
      if (escalations == config_.max_escalations) {
        throw OracleFailure(
            "full gradient: " + std::to_string(pending) +
            " nodes present in every one of " + std::to_string(limit) +
            " samples");
      }
      ++escalations;
      limit += pool;
    }
    const uint64_t key = sample_key(pool_seed, t);
    draw_set(x, key, in_set);
    bool useful = false;
    for (int j = 0; j < n && !useful; ++j) useful = !resolved[j] && !in_set[j];
    if (!useful) continue;

    const LiveEdgeSample xi = sample_graph(*graph_, key);
    ws.clear();
    for (const int v : base_) ws.visit(v);
    for (int j = 0; j < n; ++j) {
      if (in_set[j]) ws.visit(j);
    }
    ws.expand(xi);
    std::fill(removed.begin(), removed.end(), 0);
    for (const int v : ws.order()) removed[v] = 1;

    // Live arcs of the residual graph; nodes without live out-arcs there
    // reach only themselves.
    live.clear();
    std::vector<char> has_out(n, 0);
    for (int u = 0; u < n; ++u) {
      if (removed[u]) continue;
      for (const int a : graph_->out_arcs(u)) {
        const int h = graph_->arc(a).head;
        if (!removed[h] && h != u && xi.live(a)) {
          live.push_back(a);
          has_out[u] = 1;
        }
      }
    }
    bool need_cohen = false;
    for (int j = 0; j < n; ++j) {
      if (resolved[j] || in_set[j]) continue;
      if (removed[j]) {
        grad[j] = 0.0;
        resolved[j] = 1;
        --pending;
      } else if (!has_out[j]) {
        grad[j] = w[j];
        resolved[j] = 1;
        --pending;
      } else {
        need_cohen = true;
      }
    }
    if (!need_cohen) continue;
    std::vector<char> active(n);
    for (int v = 0; v < n; ++v) active[v] = !removed[v];
    const std::vector<double> est =
        cohen_estimate(*graph_, live, active, w, cohen_repetitions(),
                       RandomStream(derive_seed(key, 3)));
    for (int j = 0; j < n; ++j) {
      if (resolved[j] || in_set[j]) continue;
      double e = est[j];
      if (config_.clamp_cohen && e > cap) {
        e = cap;
        clamp_count_->value.fetch_add(1, std::memory_order_relaxed);
      }
      grad[j] = e;
      resolved[j] = 1;
      --pending;
    }
  }
  return grad;
}

std::vector<Estimate> InfluenceOracles::set_values(std::span<const int> set,
                                                   int samples,
                                                   uint64_t seed) const {
  if (samples < 1) throw InvalidArgument("samples must be >= 1");
  const int m = num_objectives();
  const int n = ground_size();
  for (const int v : set) {
    if (v < 0 || v >= n) throw InvalidArgument("set member out of range");
  }
  const std::size_t chunks =
      static_cast<std::size_t>((samples + kSamplesPerChunk - 1) /
                               kSamplesPerChunk);
  std::vector<std::vector<double>> moments(chunks,
                                           std::vector<double>(2 * m, 0.0));
  parallel_for(chunks, [&](std::size_t c) {
    ReachWorkspace ws(n);
    std::vector<double> gain(m);
    const int begin = static_cast<int>(c) * kSamplesPerChunk;
    const int end = std::min(samples, begin + kSamplesPerChunk);
    for (int t = begin; t < end; ++t) {
      const LiveEdgeSample xi(*graph_, live_edge_key(seed, t));
      ws.clear();
      for (const int v : base_) ws.visit(v);
      const std::size_t base_end = ws.expand(xi);
      for (const int v : set) ws.visit(v);
      ws.expand(xi, base_end);
      std::fill(gain.begin(), gain.end(), 0.0);
      add_weights(*weights_, ws.order(), base_end, gain);
      for (int i = 0; i < m; ++i) {
        moments[c][2 * i] += gain[i];
        moments[c][2 * i + 1] += gain[i] * gain[i];
      }
    }
  });
  std::vector<Estimate> out(m);
  for (int i = 0; i < m; ++i) {
    double s = 0.0, s2 = 0.0;
    for (const auto& mo : moments) {
      s += mo[2 * i];
      s2 += mo[2 * i + 1];
    }
    out[i] = make_estimate(s, s2, samples);
  }
  return out;
}

std::unique_ptr<SetEvaluator> InfluenceOracles::make_set_evaluator(
    int samples, uint64_t seed) const {
  return std::make_unique<BaseCoverageEvaluator>(*graph_, *weights_, base_,
                                                 samples, seed);
}

std::unique_ptr<MultiObjectiveOracle> InfluenceOracles::condition_on(
    std::span<const int> base) const {
  std::vector<int> merged = base_;
  for (const int v : base) {
    if (v < 0 || v >= ground_size()) {
      throw InvalidArgument("base member out of range");
    }
    merged.push_back(v);
  }
  std::sort(merged.begin(), merged.end());
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
  return std::unique_ptr<MultiObjectiveOracle>(
      new InfluenceOracles(*this, std::move(merged)));
}

Estimate value_oracle(const MultiObjectiveOracle& oracle,
                      const FractionalSeedVector& x, int objective,
                      int num_samples, uint64_t master_seed) {
  if (objective < 0 || objective >= oracle.num_objectives()) {
    throw InvalidArgument("objective index out of range");
  }
  return oracle.values(x, num_samples, master_seed)[objective];
}

}  // namespace fairspread
