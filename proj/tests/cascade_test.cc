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

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <numeric>
#include <vector>

#include "enumeration.h"
#include "fairspread/bench.h"
#include "fairspread/errors.h"
#include "fairspread/parallel.h"

namespace fairspread {
namespace {

AttributedGraph star(int s, double p) {
  std::vector<Arc> arcs;
  for (int leaf = 1; leaf <= s; ++leaf) {
    arcs.push_back({0, leaf});
    arcs.push_back({leaf, 0});
  }
  std::vector<int> all(s + 1);
  std::iota(all.begin(), all.end(), 0);
  return AttributedGraph(s + 1, std::move(arcs), p, {all});
}

TEST(LiveEdges, ExtremeProbabilities) {
  const auto g0 = star(5, 0.0);
  const auto g1 = star(5, 1.0);
  for (uint64_t key = 0; key < 20; ++key) {
    EXPECT_TRUE(LiveEdgeSample(g0, key).live_arcs().empty());
    EXPECT_EQ(static_cast<int>(LiveEdgeSample(g1, key).live_arcs().size()),
              g1.arc_count());
  }
}

TEST(LiveEdges, SingleArcFrequency) {
  const AttributedGraph g(2, {{0, 1}}, 0.5, {{0, 1}});
  int live = 0;
  for (int i = 0; i < 10000; ++i) {
    live += LiveEdgeSample(g, live_edge_key(42, i)).live(0) ? 1 : 0;
  }
  EXPECT_NEAR(live, 5000, 150);
}

TEST(LiveEdges, SameStreamSameSample) {
  const auto g = testing::random_small_graph(8, 30, 2, 0.4, 1);
  const RandomStream rng(derive_seed(7, 3));
  EXPECT_EQ(sample_live_edges(g, rng).live_arcs(),
            sample_live_edges(g, rng).live_arcs());
  const auto arcs = sample_live_edges(g, rng).live_arcs();
  for (const int a : arcs) {
    EXPECT_GE(a, 0);
    EXPECT_LT(a, g.arc_count());
  }
}

TEST(Reachable, Examples) {
  const auto full = star(4, 1.0);
  const LiveEdgeSample all_live(full, 1);
  EXPECT_TRUE(reachable(all_live, {}).empty());
  const std::vector<int> leaf = {3};
  EXPECT_EQ(reachable(all_live, leaf), (std::vector<int>{0, 1, 2, 3, 4}));

  // Only center -> leaf1 is present.
  const AttributedGraph one(3, {{0, 1}}, 1.0, {{0, 1, 2}});
  const std::vector<int> center = {0};
  EXPECT_EQ(reachable(LiveEdgeSample(one, 5), center),
            (std::vector<int>{0, 1}));
}

TEST(EstimateSpread, EmptySeedSetIsZero) {
  const auto g = star(10, 0.5);
  const auto est = estimate_spread(g, {}, 500, 1);
  EXPECT_EQ(est.total, 0.0);
  EXPECT_EQ(est.per_group[0], 0.0);
}

TEST(EstimateSpread, StarCenter) {
  const auto g = star(20, 0.1);
  const std::vector<int> center = {0};
  const auto est = estimate_spread(g, center, 20000, 3);
  EXPECT_NEAR(est.total, 3.0, 3 * est.total_std_error + 1e-12);
  EXPECT_GT(est.total_std_error, 0.0);
}

TEST(EstimateSpread, SingleEdge) {
  const AttributedGraph g(2, {{0, 1}, {1, 0}}, 0.1, {{0}, {1}});
  const std::vector<int> seed = {0};
  const auto est = estimate_spread(g, seed, 20000, 4);
  EXPECT_NEAR(est.total, 1.1, 4 * est.total_std_error);
  EXPECT_DOUBLE_EQ(est.per_group[0], 1.0);
  EXPECT_NEAR(est.per_group[1], 0.1, 4 * est.std_error[1]);
}

TEST(EstimateSpread, InvalidSeedRejected) {
  const auto g = star(3, 0.1);
  const std::vector<int> bad = {9};
  EXPECT_THROW(estimate_spread(g, bad, 10, 0), ValidationError);
}

TEST(EstimateSpread, BoundsAndPartitionConsistency) {
  for (uint32_t seed = 0; seed < 15; ++seed) {
    // Disjoint partition: round-robin groups, no extra overlap.
    auto base = testing::random_small_graph(12, 30, 1, 0.3, seed);
    std::vector<std::vector<int>> parts(3);
    for (int v = 0; v < 12; ++v) parts[v % 3].push_back(v);
    const auto g = base.with_groups(parts);
    const std::vector<int> seeds = {0, 5};
    const auto est = estimate_spread(g, seeds, 777, seed);
    double sum = 0.0;
    for (int i = 0; i < 3; ++i) {
      EXPECT_GE(est.per_group[i], 0.0);
      EXPECT_LE(est.per_group[i], g.group_size(i));
      sum += est.per_group[i];
    }
    EXPECT_NEAR(sum, est.total, 1e-12);
    EXPECT_GE(est.total, 2.0);
    EXPECT_LE(est.total, 12.0);
  }
}

TEST(EstimateSpread, ThreadCountInvariant) {
  AttributedRandomParams params;
  params.seed = 11;
  const auto g = gen_attributed_random(params);
  const std::vector<int> seeds = {1, 7, 40};
  const int saved = max_threads();
  set_max_threads(1);
  const auto a = estimate_spread(g, seeds, 3001, 99);
  set_max_threads(4);
  const auto b = estimate_spread(g, seeds, 3001, 99);
  set_max_threads(saved);
  EXPECT_EQ(std::memcmp(&a.total, &b.total, sizeof(double)), 0);
  EXPECT_EQ(a.per_group, b.per_group);
  EXPECT_EQ(a.std_error, b.std_error);
  EXPECT_EQ(a.total_std_error, b.total_std_error);
}

TEST(ExactSpread, Path) {
  const AttributedGraph g(2, {{0, 1}}, 0.3, {{0, 1}});
  const std::vector<int> seed = {0};
  const auto exact = exact_spread(g, seed);
  EXPECT_NEAR(exact.total, 1.3, 1e-12);
  EXPECT_EQ(exact.total_std_error, 0.0);
}

TEST(ExactSpread, TwoPartConstruction) {
  const double p = 0.1;
  const auto inst = gen_pof_rational(4, p);
  const std::vector<int> a = {inst.x1, inst.x3};
  const std::vector<int> b = {inst.x2, inst.x3};
  EXPECT_NEAR(exact_spread(inst.graph, a).total, 2 + 2 * p + 3 * p * p, 1e-9);
  EXPECT_NEAR(exact_spread(inst.graph, b).total, 2 + p + 4 * p, 1e-9);
}

TEST(ExactSpread, CapEnforced) {
  // 26 arcs, all reachable from node 0.
  std::vector<Arc> arcs;
  for (int v = 1; v <= 26; ++v) arcs.push_back({0, v});
  std::vector<int> all(27);
  std::iota(all.begin(), all.end(), 0);
  const AttributedGraph g(27, arcs, 0.2, {all});
  const std::vector<int> seed = {0};
  EXPECT_THROW(exact_spread(g, seed), EnumerationCapError);
  EXPECT_NEAR(exact_spread(g, seed, 26).total, 1 + 26 * 0.2, 1e-9);
  // Arcs out of unreachable nodes do not count toward the cap.
  const std::vector<int> leaf = {5};
  EXPECT_DOUBLE_EQ(exact_spread(g, leaf).total, 1.0);
}

TEST(ExactSpread, MatchesIndependentEnumeration) {
  for (uint32_t seed = 0; seed < 20; ++seed) {
    const auto g = testing::random_small_graph(7, 14, 3, 0.35, seed);
    testing::ExactModel model(g, [&] {
      std::vector<std::vector<double>> w(g.group_count(),
                                         std::vector<double>(7, 0.0));
      for (int i = 0; i < g.group_count(); ++i) {
        for (const int v : g.group(i)) w[i][v] = 1.0;
      }
      w.push_back(std::vector<double>(7, 1.0));
      return w;
    }());
    for (uint32_t set = 0; set < 128; set += 5) {
      std::vector<int> seeds;
      for (int v = 0; v < 7; ++v) {
        if ((set >> v) & 1) seeds.push_back(v);
      }
      const auto exact = exact_spread(g, seeds);
      for (int i = 0; i < g.group_count(); ++i) {
        EXPECT_NEAR(exact.per_group[i], model.value(i, set), 1e-9);
      }
      EXPECT_NEAR(exact.total, model.value(g.group_count(), set), 1e-9);
    }
  }
}

TEST(SpreadProperties, MonotoneAndSubmodular) {
  for (uint32_t seed = 0; seed < 10; ++seed) {
    const auto g = testing::random_small_graph(6, 12, 2, 0.4, 100 + seed);
    std::vector<double> total(64);
    std::vector<std::vector<double>> group(64);
    for (uint32_t s = 0; s < 64; ++s) {
      std::vector<int> seeds;
      for (int v = 0; v < 6; ++v) {
        if ((s >> v) & 1) seeds.push_back(v);
      }
      const auto e = exact_spread(g, seeds);
      total[s] = e.total;
      group[s] = e.per_group;
    }
    for (uint32_t b = 0; b < 64; ++b) {
      for (uint32_t a = b;; a = (a - 1) & b) {
        EXPECT_LE(total[a], total[b] + 1e-12);
        for (int i = 0; i < g.group_count(); ++i) {
          EXPECT_LE(group[a][i], group[b][i] + 1e-12);
        }
        for (int x = 0; x < 6; ++x) {
          if ((b >> x) & 1) continue;
          const uint32_t bit = 1u << x;
          EXPECT_GE(total[a | bit] - total[a],
                    total[b | bit] - total[b] - 1e-12);
        }
        if (a == 0) break;
      }
    }
  }
}

TEST(SpreadProperties, EstimateWithinFourStdErrors) {
  const auto g = testing::random_small_graph(8, 18, 2, 0.3, 77);
  const std::vector<int> seeds = {0, 3};
  const auto exact = exact_spread(g, seeds);
  int outside = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    const auto est = estimate_spread(g, seeds, 1000, 5000 + t);
    if (std::abs(est.total - exact.total) > 4 * est.total_std_error) ++outside;
  }
  EXPECT_LE(outside, trials / 100);
}

TEST(CoverageEstimator, MarginalMatchesSpreadDifference) {
  const auto g = testing::random_small_graph(8, 16, 2, 0.3, 4);
  CoverageEstimator pool(g, {std::vector<double>(8, 1.0)}, 4000, 12);
  const auto before = pool.value()[0].value;
  const auto gain = pool.marginal(2)[0].value;
  pool.add(2);
  EXPECT_NEAR(pool.value()[0].value - before, gain, 1e-12);
  const std::vector<int> two = {2};
  EXPECT_NEAR(pool.value()[0].value, exact_spread(g, two).total,
              4 * pool.value()[0].std_error + 1e-12);
  EXPECT_EQ(pool.marginal(2)[0].value, 0.0);
}

}  // namespace
}  // namespace fairspread
