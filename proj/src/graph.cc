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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <utility>

#include "fairspread/errors.h"
#include "json.hpp"

namespace fairspread {
namespace {

using nlohmann::json;

void build_csr(int n, const std::vector<Arc>& arcs, bool by_tail,
               std::vector<int>& offsets, std::vector<int>& ids) {
  offsets.assign(n + 1, 0);
  for (const Arc& a : arcs) ++offsets[(by_tail ? a.tail : a.head) + 1];
  for (int v = 0; v < n; ++v) offsets[v + 1] += offsets[v];
  ids.assign(arcs.size(), 0);
  std::vector<int> cursor(offsets.begin(), offsets.end() - 1);
  for (int id = 0; id < static_cast<int>(arcs.size()); ++id) {
    const int key = by_tail ? arcs[id].tail : arcs[id].head;
    ids[cursor[key]++] = id;
  }
}

int line_of_offset(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + byte,
                                         '\n'));
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace

AttributedGraph::AttributedGraph(int node_count, std::vector<Arc> arcs,
                                 double p,
                                 std::vector<std::vector<int>> groups,
                                 std::vector<std::string> node_ids,
                                 std::vector<std::string> group_names)
    : node_count_(node_count),
      p_(p),
      arcs_(std::move(arcs)),
      groups_(std::move(groups)),
      node_ids_(std::move(node_ids)),
      group_names_(std::move(group_names)) {
  if (node_count_ <= 0) {
    throw ValidationError("graph must have at least one node");
  }
  if (!(p_ >= 0.0 && p_ <= 1.0)) {
    throw ValidationError("propagation probability " + std::to_string(p_) +
                          " outside [0, 1]");
  }
  if (groups_.empty()) throw ValidationError("graph has no groups");
  if (node_ids_.empty()) {
    node_ids_.reserve(node_count_);
    for (int v = 0; v < node_count_; ++v) node_ids_.push_back(std::to_string(v));
  } else if (static_cast<int>(node_ids_.size()) != node_count_) {
    throw ValidationError("node id list has " +
                          std::to_string(node_ids_.size()) +
                          " entries for " + std::to_string(node_count_) +
                          " nodes");
  }
  if (group_names_.empty()) {
    for (std::size_t i = 0; i < groups_.size(); ++i) {
      group_names_.push_back("g" + std::to_string(i));
    }
  } else if (group_names_.size() != groups_.size()) {
    throw ValidationError("group name list does not match group count");
  }
  for (int v = 0; v < node_count_; ++v) {
    if (!id_index_.emplace(node_ids_[v], v).second) {
      throw ValidationError("duplicate node id '" + node_ids_[v] + "'");
    }
  }
  for (std::size_t a = 0; a < arcs_.size(); ++a) {
    const Arc& arc = arcs_[a];
    if (arc.tail < 0 || arc.tail >= node_count_ || arc.head < 0 ||
        arc.head >= node_count_) {
      throw ValidationError("arc " + std::to_string(a) +
                            " has an endpoint outside [0, " +
                            std::to_string(node_count_) + ")");
    }
  }

  const int m = group_count();
  membership_words_ = static_cast<std::size_t>((m + 63) / 64);
  membership_.assign(membership_words_ * node_count_, 0);
  std::vector<int> cover(node_count_, 0);
  for (int i = 0; i < m; ++i) {
    auto& members = groups_[i];
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    if (members.empty()) {
      throw ValidationError("group '" + group_names_[i] + "' is empty");
    }
    for (const int v : members) {
      if (v < 0 || v >= node_count_) {
        throw ValidationError("group '" + group_names_[i] +
                              "' has member outside the node range");
      }
      membership_[static_cast<std::size_t>(v) * membership_words_ + (i >> 6)] |=
          uint64_t{1} << (i & 63);
      ++cover[v];
    }
  }
  for (int v = 0; v < node_count_; ++v) {
    if (cover[v] == 0) {
      throw ValidationError("node '" + node_ids_[v] +
                            "' belongs to no group");
    }
  }

  node_group_offsets_.assign(node_count_ + 1, 0);
  for (int v = 0; v < node_count_; ++v) {
    node_group_offsets_[v + 1] = node_group_offsets_[v] + cover[v];
  }
  node_group_ids_.resize(node_group_offsets_.back());
  std::vector<int> cursor(node_group_offsets_.begin(),
                          node_group_offsets_.end() - 1);
  for (int i = 0; i < m; ++i) {
    for (const int v : groups_[i]) node_group_ids_[cursor[v]++] = i;
  }

  build_csr(node_count_, arcs_, /*by_tail=*/true, out_offsets_, out_arc_ids_);
  build_csr(node_count_, arcs_, /*by_tail=*/false, in_offsets_, in_arc_ids_);
}

std::optional<int> AttributedGraph::find_node(std::string_view id) const {
  const auto it = id_index_.find(std::string(id));
  if (it == id_index_.end()) return std::nullopt;
  return it->second;
}

AttributedGraph AttributedGraph::with_p(double p) const {
  return AttributedGraph(node_count_, arcs_, p, groups_, node_ids_,
                         group_names_);
}

AttributedGraph AttributedGraph::with_groups(
    std::vector<std::vector<int>> groups,
    std::vector<std::string> group_names) const {
  return AttributedGraph(node_count_, arcs_, p_, std::move(groups), node_ids_,
                         std::move(group_names));
}

bool operator==(const AttributedGraph& a, const AttributedGraph& b) {
  return a.node_count_ == b.node_count_ && a.p_ == b.p_ &&
         a.arcs_ == b.arcs_ && a.groups_ == b.groups_ &&
         a.node_ids_ == b.node_ids_ && a.group_names_ == b.group_names_;
}

SeedSet::SeedSet(std::vector<int> members, int budget)
    : members_(std::move(members)), budget_(budget) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()),
                 members_.end());
  if (budget_ < 1) throw InvalidArgument("seed budget must be positive");
  if (size() > budget_) {
    throw InvalidArgument("seed set of size " + std::to_string(size()) +
                          " exceeds budget " + std::to_string(budget_));
  }
}

void SeedSet::validate_for(const AttributedGraph& g) const {
  for (const int v : members_) {
    if (v < 0 || v >= g.node_count()) {
      throw ValidationError("seed " + std::to_string(v) +
                            " is not a node of the graph");
    }
  }
}

AttributedGraph load_graph_json(std::istream& in) {
  const std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("line " + std::to_string(line_of_offset(text, e.byte)),
                     e.what());
  }
  if (!doc.is_object()) throw ParseError("<root>", "expected a JSON object");

  bool directed = false;
  if (doc.contains("directed")) {
    if (!doc["directed"].is_boolean()) {
      throw ParseError("directed", "expected a boolean");
    }
    directed = doc["directed"].get<bool>();
  }
  if (!doc.contains("p") || !doc["p"].is_number()) {
    throw ParseError("p", "expected a number");
  }
  const double p = doc["p"].get<double>();
  if (!doc.contains("nodes") || !doc["nodes"].is_array()) {
    throw ParseError("nodes", "expected an array");
  }

  std::vector<std::string> ids;
  std::vector<std::string> group_names;
  std::unordered_map<std::string, int> group_index;
  std::vector<std::vector<int>> groups;
  std::unordered_map<std::string, int> node_index;
  // Optional explicit group order; otherwise first appearance decides.
  if (doc.contains("groups")) {
    const json& order = doc["groups"];
    if (!order.is_array()) throw ParseError("groups", "expected an array");
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (!order[i].is_string()) {
        throw ParseError("groups[" + std::to_string(i) + "]",
                         "expected a group name");
      }
      const std::string name = order[i].get<std::string>();
      if (group_index.emplace(name, static_cast<int>(groups.size())).second) {
        group_names.push_back(name);
        groups.emplace_back();
      }
    }
  }
  const json& nodes = doc["nodes"];
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    const std::string where = "nodes[" + std::to_string(v) + "]";
    const json& node = nodes[v];
    if (!node.is_object() || !node.contains("id") || !node["id"].is_string()) {
      throw ParseError(where + ".id", "expected a string id");
    }
    const std::string id = node["id"].get<std::string>();
    if (!node_index.emplace(id, static_cast<int>(v)).second) {
      throw ValidationError("duplicate node id '" + id + "'");
    }
    ids.push_back(id);
    if (!node.contains("groups") || !node["groups"].is_array()) {
      throw ParseError(where + ".groups", "expected an array of strings");
    }
    for (const json& g : node["groups"]) {
      if (!g.is_string()) {
        throw ParseError(where + ".groups", "expected an array of strings");
      }
      const std::string name = g.get<std::string>();
      auto [it, inserted] =
          group_index.emplace(name, static_cast<int>(groups.size()));
      if (inserted) {
        group_names.push_back(name);
        groups.emplace_back();
      }
      groups[it->second].push_back(static_cast<int>(v));
    }
  }

  std::vector<Arc> arcs;
  if (doc.contains("edges")) {
    const json& edges = doc["edges"];
    if (!edges.is_array()) throw ParseError("edges", "expected an array");
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const std::string where = "edges[" + std::to_string(e) + "]";
      const json& edge = edges[e];
      if (!edge.is_array() || edge.size() != 2 || !edge[0].is_string() ||
          !edge[1].is_string()) {
        throw ParseError(where, "expected a pair of node ids");
      }
      const auto a = node_index.find(edge[0].get<std::string>());
      const auto b = node_index.find(edge[1].get<std::string>());
      if (a == node_index.end() || b == node_index.end()) {
        throw ValidationError(where + " references an unknown node");
      }
      arcs.push_back({a->second, b->second});
      if (!directed) arcs.push_back({b->second, a->second});
    }
  }
  const int n = static_cast<int>(ids.size());
  return AttributedGraph(n, std::move(arcs), p, std::move(groups),
                         std::move(ids), std::move(group_names));
}

AttributedGraph load_graph_edgelist(std::istream& edges,
                                    std::istream& attributes, double p,
                                    bool directed) {
  std::vector<std::string> ids;
  std::unordered_map<std::string, int> node_index;
  std::vector<std::string> group_names;
  std::unordered_map<std::string, int> group_index;
  std::vector<std::vector<int>> groups;

  std::string line;
  int line_no = 0;
  while (std::getline(attributes, line)) {
    ++line_no;
    const std::string trimmed = trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    if (line_no == 1 && trimmed.rfind("id,", 0) == 0) continue;
    const auto comma = trimmed.find(',');
    if (comma == std::string::npos) {
      throw ParseError("attributes line " + std::to_string(line_no),
                       "expected 'id,group1;group2'");
    }
    const std::string id = trim(std::string_view(trimmed).substr(0, comma));
    if (id.empty()) {
      throw ParseError("attributes line " + std::to_string(line_no),
                       "empty node id");
    }
    const int v = static_cast<int>(ids.size());
    if (!node_index.emplace(id, v).second) {
      throw ValidationError("duplicate node id '" + id + "'");
    }
    ids.push_back(id);
    std::stringstream list(trimmed.substr(comma + 1));
    std::string name;
    while (std::getline(list, name, ';')) {
      name = trim(name);
      if (name.empty()) continue;
      auto [it, inserted] =
          group_index.emplace(name, static_cast<int>(groups.size()));
      if (inserted) {
        group_names.push_back(name);
        groups.emplace_back();
      }
      groups[it->second].push_back(v);
    }
  }

  std::vector<Arc> arcs;
  line_no = 0;
  while (std::getline(edges, line)) {
    ++line_no;
    const std::string trimmed = trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    std::istringstream fields(trimmed);
    std::string a, b, extra;
    if (!(fields >> a >> b) || (fields >> extra && extra[0] != '#')) {
      throw ParseError("edges line " + std::to_string(line_no),
                       "expected two node ids");
    }
    const auto ia = node_index.find(a);
    const auto ib = node_index.find(b);
    if (ia == node_index.end() || ib == node_index.end()) {
      throw ValidationError("edges line " + std::to_string(line_no) +
                            ": node '" +
                            (ia == node_index.end() ? a : b) +
                            "' has no attribute row and so belongs to no group");
    }
    arcs.push_back({ia->second, ib->second});
    if (!directed) arcs.push_back({ib->second, ia->second});
  }
  const int n = static_cast<int>(ids.size());
  return AttributedGraph(n, std::move(arcs), p, std::move(groups),
                         std::move(ids), std::move(group_names));
}

AttributedGraph load_graph(std::istream& source, GraphFormat format,
                           std::istream* attributes, double p, bool directed) {
  switch (format) {
    case GraphFormat::kJson:
      return load_graph_json(source);
    case GraphFormat::kEdgeList:
      if (attributes == nullptr) {
        throw InvalidArgument("edge-list input needs an attribute stream");
      }
      return load_graph_edgelist(source, *attributes, p, directed);
  }
  throw InvalidArgument("unknown graph format");
}

AttributedGraph read_graph_file(
    const std::filesystem::path& path,
    const std::optional<std::filesystem::path>& attributes_path, double p,
    bool directed) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open graph file " + path.string());
  if (path.extension() == ".json") return load_graph_json(in);
  if (!attributes_path) {
    throw InvalidArgument("edge-list graph " + path.string() +
                          " needs an attribute file");
  }
  std::ifstream attrs(*attributes_path);
  if (!attrs) {
    throw ValidationError("cannot open attribute file " +
                          attributes_path->string());
  }
  return load_graph_edgelist(in, attrs, p, directed);
}

std::string serialize_graph_json(const AttributedGraph& g) {
  json doc;
  doc["directed"] = true;
  doc["p"] = g.p();
  doc["groups"] = g.group_names();
  json nodes = json::array();
  for (int v = 0; v < g.node_count(); ++v) {
    json groups = json::array();
    for (const int i : g.groups_of(v)) groups.push_back(g.group_names()[i]);
    nodes.push_back({{"id", g.node_ids()[v]}, {"groups", std::move(groups)}});
  }
  doc["nodes"] = std::move(nodes);
  json edges = json::array();
  for (const Arc& a : g.arcs()) {
    edges.push_back({g.node_ids()[a.tail], g.node_ids()[a.head]});
  }
  doc["edges"] = std::move(edges);
  return doc.dump(1) + "\n";
}

InducedSubgraph induced_subgraph(const AttributedGraph& g,
                                 std::span<const int> nodes) {
  std::vector<int> keep(nodes.begin(), nodes.end());
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  if (keep.empty()) throw InvalidArgument("induced subgraph of an empty set");
  if (keep.front() < 0 || keep.back() >= g.node_count()) {
    throw InvalidArgument("induced subgraph node outside the graph");
  }
  std::vector<int> local(g.node_count(), -1);
  for (std::size_t i = 0; i < keep.size(); ++i) {
    local[keep[i]] = static_cast<int>(i);
  }
  std::vector<Arc> arcs;
  for (const Arc& a : g.arcs()) {
    if (local[a.tail] >= 0 && local[a.head] >= 0) {
      arcs.push_back({local[a.tail], local[a.head]});
    }
  }
  std::vector<std::string> ids;
  ids.reserve(keep.size());
  for (const int v : keep) ids.push_back(g.node_ids()[v]);
  const int size = static_cast<int>(keep.size());
  std::vector<int> all(size);
  for (int i = 0; i < size; ++i) all[i] = i;
  return InducedSubgraph{
      AttributedGraph(size, std::move(arcs), g.p(), {std::move(all)},
                      std::move(ids), {"induced"}),
      std::move(keep)};
}

int fair_allocation(const AttributedGraph& g, int k, int group) {
  if (group < 0 || group >= g.group_count()) {
    throw InvalidArgument("group index " + std::to_string(group) +
                          " out of range");
  }
  if (k < 1 || k > g.node_count()) {
    throw InvalidArgument("budget k must satisfy 1 <= k <= n");
  }
  const int64_t numerator = static_cast<int64_t>(k) * g.group_size(group);
  return static_cast<int>((numerator + g.node_count() - 1) / g.node_count());
}

}  // namespace fairspread
