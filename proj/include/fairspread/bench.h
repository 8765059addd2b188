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

// Worst-case constructions with closed-form influence values, fixtures on
// which the fairness utilities fail submodularity, a homophilous random
// attributed-graph generator, and the Greedy / DC / Maximin experiment
// harness.

#ifndef FAIRSPREAD_BENCH_H_
#define FAIRSPREAD_BENCH_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fairspread/fairness.h"
#include "fairspread/graph.h"

namespace fairspread {

// Two groups, k = 2. Part L is a K2 {x3, y} plus s - 3 isolated nodes;
// part S is a star with center x2 and s leaves, x1 among them. C1 = the
// leaves, C2 = L plus x2. Requires s >= 3 and p < 1/s for B to be unfair.
struct PofRationalInstance {
  AttributedGraph graph;
  int k = 2;
  int x1 = 0, x2 = 0, x3 = 0;
  double fair_total = 0.0;     // I({x1, x3}) = 2 + 2p + (s-1)p^2
  double optimal_total = 0.0;  // I({x2, x3}) = 2 + p + ps
  std::vector<double> demands;  // (1, 1 + p)
  double pof() const { return optimal_total / fair_total; }
};
PofRationalInstance gen_pof_rational(int s, double p);

// k = 1. K2 {x1, y} and a star with center x2 and s leaves; C1 = {y},
// C2 = everything else.
struct PofMaximinInstance {
  AttributedGraph graph;
  int k = 1;
  int x1 = 0, x2 = 0, y = 0;
  double optimal_total = 0.0;  // 1 + ps, seeding x2
  double fair_total = 0.0;     // 1 + p, seeding x1
  double pof() const { return optimal_total / fair_total; }
};
PofMaximinInstance gen_pof_maximin(int s, double p);

// A disjoint-groups graph and the same graph with one node added to the
// second group. Closed forms are the totals of the named seedings; the
// `holds` flags say whether those seedings are the fair ones at (s, p).
struct OverlapInstance {
  AttributedGraph graph;
  AttributedGraph overlapping;
  int k = 1;
  int x1 = 0, x2 = 0;
  double fair_total = 0.0;              // fair seeding in `graph`
  double overlapping_fair_total = 0.0;  // fair seeding in `overlapping`
  bool holds = false;
};

// K2 {x1, y} and a star with center x2 and s leaves; C1 = leaves + y,
// C2 = {x1, x2}; the overlapping variant adds x1 to C1. Fair totals:
// 1 + ps (seed x2) and 1 + p (seed x1). The flip needs 1/p <= s < 1/p + 1.
OverlapInstance gen_overlap_rational(int s, double p);

// Stars with centers x1 (s leaves) and x2 (t + 1 leaves, z among them),
// t = round(s / (1 - 3p)); C1 = {x1, z}, C2 = the rest; the overlapping
// variant adds x2 to C1. Fair totals 1 + ps (seed x1) and 1 + p(t + 1)
// (seed x2). Throws InvalidArgument unless 0 < p < 1/3.
OverlapInstance gen_overlap_maximin(int s, double p);

enum class UtilityKind { kMaximin, kRational };

struct WitnessFixture {
  std::string name;
  AttributedGraph graph;
  UtilityKind kind;
  int k = 0;
  std::vector<int> a;  // A subset of B
  std::vector<int> b;
  int x = 0;
};

// The 4-node graph {x, a, b, c}, groups {x, a} and {b, c}, one undirected
// edge a-b, p = 0.1; A = {a, b}, B = {a, b, c}. One fixture per utility.
std::vector<WitnessFixture> nonsubmodularity_witnesses();

struct AttributedRandomParams {
  int n = 100;
  // Group sizes; must sum to at least n. Overflow becomes overlap.
  std::vector<int> group_sizes = {80, 20};
  double homophily = 0.8;
  double mean_degree = 6.0;
  double p = 0.1;
  uint64_t seed = 0;
};

// Undirected stochastic block model. Nodes are shuffled and cut into
// contiguous blocks of the requested sizes; groups whose block ran out of
// nodes draw the rest uniformly from other nodes. A pair sharing a group
// is linked with probability c, any other pair with c * (1 - homophily),
// with c chosen so the expected mean degree is `mean_degree`.
AttributedGraph gen_attributed_random(const AttributedRandomParams& params);

struct ExperimentRow {
  std::string instance;
  int run = 0;
  std::string algorithm;
  double total = 0.0;
  double maximin_value = 0.0;
  double mean_violation_pct = 0.0;
  double pof = 0.0;
  double wall_ms = 0.0;
  std::vector<double> group_fractions;
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;
  std::optional<std::filesystem::path> output;
};

// Runs a JSON experiment config (see README). Relative graph paths are
// resolved against `base_dir`. Throws ParseError / ValidationError on bad
// configs and missing files.
ExperimentResult run_experiment(const std::string& config_json,
                                const std::filesystem::path& base_dir = ".");

// CSV with header instance,run,algorithm,total,maximin_value,
// mean_violation_pct,pof,wall_ms,group_fractions; the fractions are joined
// with ';' in one field.
void write_experiment_csv(const std::vector<ExperimentRow>& rows,
                          std::ostream& out, bool include_timing = true);

}  // namespace fairspread

#endif  // FAIRSPREAD_BENCH_H_
