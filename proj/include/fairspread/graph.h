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

// Attributed social networks: a directed arc list with one uniform
// activation probability and a family of (possibly overlapping) node groups.

#ifndef FAIRSPREAD_GRAPH_H_
#define FAIRSPREAD_GRAPH_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace fairspread {

struct Arc {
  int tail;
  int head;
  friend bool operator==(const Arc&, const Arc&) = default;
};

// Immutable after construction; safe to share across threads.
//
// Invariants (checked by the constructor, which throws ValidationError):
//   * every arc endpoint and group member is in [0, node_count);
//   * every group is nonempty and every node belongs to some group;
//   * 0 <= p <= 1.
// Duplicate members inside one group are collapsed; overlap between groups
// is kept as-is.
class AttributedGraph {
 public:
  AttributedGraph(int node_count, std::vector<Arc> arcs, double p,
                  std::vector<std::vector<int>> groups,
                  std::vector<std::string> node_ids = {},
                  std::vector<std::string> group_names = {});

  int node_count() const { return node_count_; }
  int arc_count() const { return static_cast<int>(arcs_.size()); }
  int group_count() const { return static_cast<int>(groups_.size()); }
  double p() const { return p_; }

  std::span<const Arc> arcs() const { return arcs_; }
  const Arc& arc(int id) const { return arcs_[id]; }

  // Arc ids leaving / entering v.
  std::span<const int> out_arcs(int v) const {
    return {out_arc_ids_.data() + out_offsets_[v],
            out_arc_ids_.data() + out_offsets_[v + 1]};
  }
  std::span<const int> in_arcs(int v) const {
    return {in_arc_ids_.data() + in_offsets_[v],
            in_arc_ids_.data() + in_offsets_[v + 1]};
  }

  // Sorted members of group i.
  std::span<const int> group(int i) const { return groups_[i]; }
  int group_size(int i) const { return static_cast<int>(groups_[i].size()); }
  const std::vector<std::vector<int>>& groups() const { return groups_; }

  // Groups containing v, ascending.
  std::span<const int> groups_of(int v) const {
    return {node_group_ids_.data() + node_group_offsets_[v],
            node_group_ids_.data() + node_group_offsets_[v + 1]};
  }
  bool in_group(int v, int i) const {
    return (membership_[static_cast<std::size_t>(v) * membership_words_ +
                        (i >> 6)] >>
            (i & 63)) &
           1u;
  }

  const std::vector<std::string>& node_ids() const { return node_ids_; }
  const std::vector<std::string>& group_names() const { return group_names_; }
  std::optional<int> find_node(std::string_view id) const;

  // Copies with a different propagation probability / group family.
  AttributedGraph with_p(double p) const;
  AttributedGraph with_groups(std::vector<std::vector<int>> groups,
                              std::vector<std::string> group_names = {}) const;

  friend bool operator==(const AttributedGraph& a, const AttributedGraph& b);

 private:
  int node_count_;
  double p_;
  std::vector<Arc> arcs_;
  std::vector<std::vector<int>> groups_;
  std::vector<std::string> node_ids_;
  std::vector<std::string> group_names_;
  std::unordered_map<std::string, int> id_index_;

  std::vector<int> out_offsets_, out_arc_ids_;
  std::vector<int> in_offsets_, in_arc_ids_;
  std::vector<int> node_group_offsets_, node_group_ids_;
  std::size_t membership_words_ = 1;
  std::vector<uint64_t> membership_;
};

// A seed set under budget k. Members are kept sorted and unique.
class SeedSet {
 public:
  SeedSet(std::vector<int> members, int budget);

  const std::vector<int>& members() const { return members_; }
  int budget() const { return budget_; }
  int size() const { return static_cast<int>(members_.size()); }

  // Throws ValidationError if a member is not a node of g.
  void validate_for(const AttributedGraph& g) const;

 private:
  std::vector<int> members_;
  int budget_;
};

enum class GraphFormat { kJson, kEdgeList };

// JSON document:
//   {"directed": bool, "p": float,
//    "nodes": [{"id": str, "groups": [str, ...]}, ...],
//    "edges": [["idA", "idB"], ...]}
// Group names are indexed in order of first appearance. Undirected edges
// become two arcs.
AttributedGraph load_graph_json(std::istream& in);

// Whitespace-separated edge list ("idA idB" per line, '#' comments) plus a
// CSV attribute file with lines "id,group1;group2". A header line starting
// with "id," is skipped. Node order follows the attribute file.
AttributedGraph load_graph_edgelist(std::istream& edges,
                                    std::istream& attributes, double p,
                                    bool directed);

// Dispatches on `format`; `attributes` is required for kEdgeList.
AttributedGraph load_graph(std::istream& source, GraphFormat format,
                           std::istream* attributes = nullptr, double p = 0.1,
                           bool directed = false);

// Reads a graph file. ".json" files use the JSON format; anything else is
// read as an edge list and needs `attributes_path`.
AttributedGraph read_graph_file(
    const std::filesystem::path& path,
    const std::optional<std::filesystem::path>& attributes_path = {},
    double p = 0.1, bool directed = false);

// Writes the JSON format with "directed": true and every arc listed, so
// load_graph_json(serialize_graph_json(g)) == g.
std::string serialize_graph_json(const AttributedGraph& g);

struct InducedSubgraph {
  // Graph on the selected nodes, relabeled 0..|C|-1 in ascending order of
  // the original index, with a single group covering every node.
  AttributedGraph graph;
  // to_parent[local] = original node index.
  std::vector<int> to_parent;
};

// Keeps exactly the arcs with both endpoints in `nodes`. Throws
// InvalidArgument on an empty or out-of-range node set.
InducedSubgraph induced_subgraph(const AttributedGraph& g,
                                 std::span<const int> nodes);

// Fair seed allocation ceil(k * |C_i| / n). Requires 1 <= k <= n.
int fair_allocation(const AttributedGraph& g, int k, int group);

}  // namespace fairspread

#endif  // FAIRSPREAD_GRAPH_H_
