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

#include "fairspread/graph.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "enumeration.h"
#include "fairspread/bench.h"
#include "fairspread/errors.h"

namespace fairspread {
namespace {

AttributedGraph from_json(const std::string& text) {
  std::istringstream in(text);
  return load_graph(in, GraphFormat::kJson);
}

TEST(LoadGraph, UndirectedEdgeBecomesTwoArcs) {
  const auto g = from_json(R"({"directed": false, "p": 0.5,
      "nodes": [{"id": "a", "groups": ["g0"]}, {"id": "b", "groups": ["g1"]}],
      "edges": [["a", "b"]]})");
  EXPECT_EQ(g.node_count(), 2);
  EXPECT_EQ(g.arc_count(), 2);
  EXPECT_EQ(g.group_count(), 2);
  EXPECT_DOUBLE_EQ(g.p(), 0.5);
  EXPECT_EQ(g.out_arcs(0).size(), 1u);
  EXPECT_EQ(g.in_arcs(0).size(), 1u);
}

TEST(LoadGraph, DirectedKeepsOrientation) {
  const auto g = from_json(R"({"directed": true, "p": 0.2,
      "nodes": [{"id": "a", "groups": ["g"]}, {"id": "b", "groups": ["g"]}],
      "edges": [["a", "b"]]})");
  ASSERT_EQ(g.arc_count(), 1);
  EXPECT_EQ(g.arc(0), (Arc{0, 1}));
  EXPECT_TRUE(g.in_arcs(0).empty());
}

TEST(LoadGraph, GroupIndicesFollowFirstAppearance) {
  const auto g = from_json(R"({"directed": false, "p": 0.1,
      "nodes": [{"id": "a", "groups": ["red"]},
                {"id": "b", "groups": ["blue", "red"]}],
      "edges": []})");
  ASSERT_EQ(g.group_count(), 2);
  EXPECT_EQ(g.group_names()[0], "red");
  EXPECT_EQ(g.group_names()[1], "blue");
  EXPECT_EQ(g.group_size(0), 2);
  EXPECT_TRUE(g.in_group(1, 0));
  EXPECT_TRUE(g.in_group(1, 1));
  EXPECT_FALSE(g.in_group(0, 1));
  EXPECT_EQ(*g.find_node("b"), 1);
  EXPECT_FALSE(g.find_node("zzz").has_value());
}

TEST(LoadGraph, UncoveredNodeIsValidationError) {
  try {
    from_json(R"({"directed": false, "p": 0.1,
        "nodes": [{"id": "0", "groups": ["g"]}, {"id": "1", "groups": ["g"]},
                  {"id": "2", "groups": ["g"]}, {"id": "3", "groups": []}],
        "edges": []})");
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find('3'), std::string::npos) << e.what();
  }
}

TEST(LoadGraph, MalformedJsonReportsLine) {
  try {
    from_json("{\n\"p\": 0.1,\n\"nodes\": [,]\n}");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos)
        << e.what();
  }
}

TEST(LoadGraph, BadFieldReportsPath) {
  try {
    from_json(R"({"p": 0.1, "nodes": [{"id": "a", "groups": ["g"]},
                                      {"groups": ["g"]}], "edges": []})");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("nodes[1]"), std::string::npos)
        << e.what();
  }
}

TEST(LoadGraph, UnknownEdgeEndpointRejected) {
  EXPECT_THROW(from_json(R"({"p": 0.1, "nodes": [{"id": "a", "groups": ["g"]}],
                             "edges": [["a", "q"]]})"),
               ValidationError);
}

TEST(LoadGraph, ProbabilityOutOfRangeRejected) {
  EXPECT_THROW(from_json(R"({"p": 1.5, "nodes": [{"id": "a", "groups": ["g"]}],
                             "edges": []})"),
               ValidationError);
}

TEST(LoadGraph, EdgeListWithAttributes) {
  std::istringstream edges("# comment\na b\nb c\n");
  std::istringstream attrs("id,groups\na,x\nb,x;y\nc,y\n");
  const auto g = load_graph(edges, GraphFormat::kEdgeList, &attrs, 0.3, false);
  EXPECT_EQ(g.node_count(), 3);
  EXPECT_EQ(g.arc_count(), 4);
  EXPECT_EQ(g.group_count(), 2);
  EXPECT_DOUBLE_EQ(g.p(), 0.3);
  EXPECT_EQ(g.groups_of(*g.find_node("b")).size(), 2u);
}

TEST(LoadGraph, EdgeListUnknownNodeRejected) {
  std::istringstream edges("a z\n");
  std::istringstream attrs("a,x\n");
  EXPECT_THROW(load_graph(edges, GraphFormat::kEdgeList, &attrs, 0.1, true),
               ValidationError);
}

TEST(LoadGraph, WitnessGraphShape) {
  const auto witnesses = nonsubmodularity_witnesses();
  ASSERT_FALSE(witnesses.empty());
  const auto& g = witnesses.front().graph;
  EXPECT_EQ(g.node_count(), 4);
  EXPECT_EQ(g.group_count(), 2);
}

TEST(GraphProperties, SerializeRoundTrip) {
  for (uint32_t seed = 0; seed < 20; ++seed) {
    const auto g = testing::random_small_graph(7, 12, 3, 0.25, seed);
    const auto text = serialize_graph_json(g);
    EXPECT_EQ(from_json(text), g) << "seed " << seed;
    EXPECT_EQ(serialize_graph_json(from_json(text)), text);
  }
}

TEST(GraphProperties, RoundTripGeneratedNetwork) {
  AttributedRandomParams params;
  params.seed = 3;
  const auto g = gen_attributed_random(params);
  EXPECT_EQ(from_json(serialize_graph_json(g)), g);
}

TEST(InducedSubgraph, StarLeavesAreIsolated) {
  const int s = 6;
  std::vector<Arc> arcs;
  for (int leaf = 1; leaf <= s; ++leaf) {
    arcs.push_back({0, leaf});
    arcs.push_back({leaf, 0});
  }
  std::vector<int> all(s + 1);
  std::iota(all.begin(), all.end(), 0);
  const AttributedGraph g(s + 1, arcs, 0.1, {all});
  std::vector<int> leaves(all.begin() + 1, all.end());
  const auto sub = induced_subgraph(g, leaves);
  EXPECT_EQ(sub.graph.node_count(), s);
  EXPECT_EQ(sub.graph.arc_count(), 0);
  EXPECT_EQ(sub.to_parent, leaves);
}

TEST(InducedSubgraph, WholeGraphKeepsArcs) {
  const auto g = testing::random_small_graph(6, 10, 2, 0.3, 11);
  std::vector<int> all = {0, 1, 2, 3, 4, 5};
  const auto sub = induced_subgraph(g, all);
  EXPECT_EQ(sub.graph.with_groups(g.groups(), g.group_names()), g);
}

TEST(InducedSubgraph, PathEndpoints) {
  const AttributedGraph g(3, {{0, 1}, {1, 0}, {1, 2}, {2, 1}}, 0.5, {{0, 1, 2}});
  const std::vector<int> ends = {0, 2};
  const auto sub = induced_subgraph(g, ends);
  EXPECT_EQ(sub.graph.node_count(), 2);
  EXPECT_EQ(sub.graph.arc_count(), 0);
}

TEST(InducedSubgraph, EmptySelectionRejected) {
  const AttributedGraph g(2, {{0, 1}}, 0.5, {{0, 1}});
  EXPECT_THROW(induced_subgraph(g, {}), InvalidArgument);
}

TEST(InducedSubgraph, ArcsMatchBruteForce) {
  std::mt19937 rng(5);
  for (uint32_t seed = 0; seed < 30; ++seed) {
    const auto g = testing::random_small_graph(8, 20, 2, 0.1, seed);
    std::vector<int> nodes;
    for (int v = 0; v < 8; ++v) {
      if (rng() % 2) nodes.push_back(v);
    }
    if (nodes.empty()) nodes.push_back(0);
    const auto sub = induced_subgraph(g, nodes);
    std::multiset<std::pair<int, int>> expected, got;
    for (const Arc& a : g.arcs()) {
      if (std::binary_search(nodes.begin(), nodes.end(), a.tail) &&
          std::binary_search(nodes.begin(), nodes.end(), a.head)) {
        expected.insert({a.tail, a.head});
      }
    }
    for (const Arc& a : sub.graph.arcs()) {
      got.insert({sub.to_parent[a.tail], sub.to_parent[a.head]});
    }
    EXPECT_EQ(got, expected);
    EXPECT_LE(sub.graph.arc_count(), g.arc_count());
  }
}

TEST(FairAllocation, Examples) {
  std::vector<int> big(33), rest(67);
  std::iota(big.begin(), big.end(), 0);
  std::iota(rest.begin(), rest.end(), 33);
  const AttributedGraph g(100, {}, 0.1, {big, rest});
  EXPECT_EQ(fair_allocation(g, 10, 0), 4);
  EXPECT_EQ(fair_allocation(g, 10, 1), 7);

  const auto thm = gen_pof_rational(10, 0.1);
  EXPECT_EQ(fair_allocation(thm.graph, 2, 0), 1);
  EXPECT_EQ(fair_allocation(thm.graph, 2, 1), 1);

  std::vector<int> all(100);
  std::iota(all.begin(), all.end(), 0);
  const AttributedGraph whole(100, {}, 0.1, {all});
  EXPECT_EQ(fair_allocation(whole, 17, 0), 17);
}

TEST(FairAllocation, InvalidInputs) {
  const AttributedGraph g(3, {}, 0.1, {{0, 1, 2}});
  EXPECT_THROW(fair_allocation(g, 0, 0), InvalidArgument);
  EXPECT_THROW(fair_allocation(g, 4, 0), InvalidArgument);
  EXPECT_THROW(fair_allocation(g, 1, 1), InvalidArgument);
}

TEST(FairAllocation, PartitionCoversBudget) {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 5 + static_cast<int>(rng() % 60);
    const int m = 1 + static_cast<int>(rng() % std::min(n, 6));
    std::vector<std::vector<int>> groups(m);
    for (int v = 0; v < n; ++v) {
      groups[v < m ? v : rng() % m].push_back(v);
    }
    const AttributedGraph g(n, {}, 0.1, groups);
    const int k = 1 + static_cast<int>(rng() % n);
    int sum = 0;
    for (int i = 0; i < m; ++i) {
      const int ki = fair_allocation(g, k, i);
      EXPECT_GE(ki, 1);
      sum += ki;
    }
    EXPECT_GE(sum, k);
  }
}

TEST(SeedSet, Validation) {
  EXPECT_THROW(SeedSet({0}, 0), InvalidArgument);
  EXPECT_THROW(SeedSet({0, 1, 2}, 2), InvalidArgument);
  const SeedSet s({3, 1, 3}, 2);
  EXPECT_EQ(s.members(), (std::vector<int>{1, 3}));
  const AttributedGraph g(3, {}, 0.1, {{0, 1, 2}});
  EXPECT_THROW(s.validate_for(g), ValidationError);
}

TEST(Graph, ConstructorRejectsEmptyGroup) {
  EXPECT_THROW(AttributedGraph(2, {}, 0.1, {{0, 1}, {}}), ValidationError);
  EXPECT_THROW(AttributedGraph(2, {{0, 2}}, 0.1, {{0, 1}}), ValidationError);
}

}  // namespace
}  // namespace fairspread
