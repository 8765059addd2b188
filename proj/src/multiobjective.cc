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

#include "fairspread/multiobjective.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "fairspread/errors.h"

namespace fairspread {
namespace {

constexpr double kOneMinusInvE = 1.0 - 0.36787944117144233;

void check_targets(const MultiObjectiveOracle& oracle,
                   std::span<const double> targets) {
  if (static_cast<int>(targets.size()) != oracle.num_objectives()) {
    throw InvalidArgument("expected " +
                          std::to_string(oracle.num_objectives()) +
                          " targets, got " + std::to_string(targets.size()));
  }
  for (const double w : targets) {
    if (!(w >= 0.0)) throw InvalidArgument("targets must be >= 0");
  }
}

// Index in [0, weights.size()) drawn proportionally to weights.
int sample_index(std::span<const double> weights, double u) {
  double total = 0.0;
  for (const double w : weights) total += w;
  double acc = 0.0;
  const double target = u * total;
  for (std::size_t q = 0; q < weights.size(); ++q) {
    acc += weights[q];
    if (target < acc) return static_cast<int>(q);
  }
  for (std::size_t q = weights.size(); q-- > 0;) {
    if (weights[q] > 0.0) return static_cast<int>(q);
  }
  return 0;
}

double min_ratio(std::span<const Estimate> values,
                 std::span<const double> targets) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] > 0.0) best = std::min(best, values[i].value / targets[i]);
  }
  return std::isinf(best) ? 0.0 : best;
}

// Adds up to `slots` items to `seeds`, each maximizing min_i f_i / W_i
// (then the sum of the ratios, then the lowest index).
std::vector<int> fill_slots(const MultiObjectiveOracle& oracle,
                            std::span<const double> targets,
                            std::span<const int> seeds, int slots, int samples,
                            uint64_t seed) {
  const int n = oracle.ground_size();
  const int m = oracle.num_objectives();
  std::vector<char> taken(n, 0);
  auto eval = oracle.make_set_evaluator(samples, seed);
  for (const int j : seeds) {
    taken[j] = 1;
    eval->add(j);
  }
  std::vector<int> added;
  while (static_cast<int>(added.size()) < slots) {
    const std::vector<double> current = eval->current();
    int best = -1;
    double best_min = 0.0, best_sum = 0.0;
    for (int j = 0; j < n; ++j) {
      if (taken[j]) continue;
      const std::vector<double> gain = eval->marginal(j);
      double lo = std::numeric_limits<double>::infinity(), sum = 0.0;
      for (int i = 0; i < m; ++i) {
        const double r = targets[i] > 0.0
                             ? (current[i] + gain[i]) / targets[i]
                             : current[i] + gain[i];
        if (targets[i] > 0.0) lo = std::min(lo, r);
        sum += r;
      }
      if (std::isinf(lo)) lo = 0.0;
      if (best < 0 || lo > best_min || (lo == best_min && sum > best_sum)) {
        best = j;
        best_min = lo;
        best_sum = sum;
      }
    }
    if (best < 0) break;
    taken[best] = 1;
    eval->add(best);
    added.push_back(best);
  }
  std::sort(added.begin(), added.end());
  return added;
}

}  // namespace

std::vector<int> threshold_include(const MultiObjectiveOracle& oracle,
                                   std::span<const double> targets, int k,
                                   double threshold_epsilon,
                                   double oracle_epsilon, int samples,
                                   uint64_t seed) {
  check_targets(oracle, targets);
  if (!(threshold_epsilon > 0.0 && threshold_epsilon < 1.0)) {
    throw InvalidArgument("threshold epsilon must lie in (0, 1)");
  }
  if (oracle_epsilon < 0.0) throw InvalidArgument("oracle epsilon < 0");
  const int m = oracle.num_objectives();
  const int n = oracle.ground_size();
  const auto& single = oracle.singleton_values();
  std::vector<double> threshold(m);
  for (int i = 0; i < m; ++i) {
    threshold[i] = (1.0 + oracle_epsilon) *
                   std::pow(threshold_epsilon, 3.0) * targets[i];
  }

  std::vector<std::pair<double, int>> order;
  for (int j = 0; j < n; ++j) {
    bool passes = false;
    double score = 0.0;
    for (int i = 0; i < m; ++i) {
      if (targets[i] <= 0.0) continue;
      const double f = single[i][j].value;
      passes = passes || f >= threshold[i];
      score += std::min(1.0, f / targets[i]);
    }
    if (passes) order.push_back({-score, j});
  }
  std::sort(order.begin(), order.end());

  std::vector<int> chosen;
  if (order.empty()) return chosen;
  auto eval = oracle.make_set_evaluator(samples, seed);
  std::vector<double> current = eval->current();
  for (const auto& [neg_score, j] : order) {
    const std::vector<double> gain = eval->marginal(j);
    bool keep = false;
    for (int i = 0; i < m && !keep; ++i) {
      if (targets[i] <= 0.0) continue;
      const double w = targets[i];
      const double truncated = std::min(w, current[i] + gain[i]) -
                               std::min(w, current[i]);
      keep = truncated >= threshold[i];
    }
    if (!keep) continue;
    eval->add(j);
    current = eval->current();
    chosen.push_back(j);
  }
  if (static_cast<int>(chosen.size()) > k) {
    throw InfeasibleBudgetError(
        "threshold step selected " + std::to_string(chosen.size()) +
        " items for budget " + std::to_string(k));
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

std::vector<double> project_capped_simplex(std::span<const double> v,
                                           std::span<const char> eligible,
                                           double total) {
  const std::size_t n = v.size();
  std::vector<double> out(n, 0.0);
  std::vector<int> positive, zero;
  for (std::size_t j = 0; j < n; ++j) {
    if (!eligible[j]) continue;
    (v[j] > 0.0 ? positive : zero).push_back(static_cast<int>(j));
  }
  if (total > static_cast<double>(positive.size() + zero.size()) + 1e-9) {
    throw InvalidArgument("capped simplex total exceeds eligible count");
  }
  if (total <= 0.0) return out;
  if (static_cast<double>(positive.size()) <= total) {
    // Not enough support: fill the positive coordinates and spread the rest.
    for (const int j : positive) out[j] = 1.0;
    const double rest = total - static_cast<double>(positive.size());
    if (rest > 0.0 && !zero.empty()) {
      for (const int j : zero) out[j] = rest / zero.size();
    }
    return out;
  }
  std::sort(positive.begin(), positive.end(), [&](int a, int b) {
    return v[a] != v[b] ? v[a] > v[b] : a < b;
  });
  // Tail sums accumulated from the smallest entry, so dropping a huge
  // leading entry does not cancel away the rest.
  std::vector<double> tail(positive.size() + 1, 0.0);
  for (std::size_t q = positive.size(); q-- > 0;) {
    tail[q] = tail[q + 1] + v[positive[q]];
  }
  std::size_t capped = 0;
  double scale = total / tail[0];
  while (capped < positive.size() && scale * v[positive[capped]] > 1.0) {
    ++capped;
    scale = (total - static_cast<double>(capped)) / tail[capped];
  }
  for (std::size_t q = 0; q < positive.size(); ++q) {
    const int j = positive[q];
    out[j] = q < capped ? 1.0 : std::min(1.0, scale * v[j]);
  }
  return out;
}

SaddleState ssp_md(const MultiObjectiveOracle& oracle,
                   const FractionalSeedVector& x, std::span<const int> active,
                   std::span<const double> gaps, int rank, int iterations,
                   double eta_scale, uint64_t seed) {
  const int n = oracle.ground_size();
  SaddleState state;
  state.v.assign(n, 0.0);
  if (active.empty() || rank <= 0) return state;
  if (gaps.size() != active.size()) {
    throw InvalidArgument("one gap per active objective required");
  }
  if (iterations < 1) throw InvalidArgument("iterations must be >= 1");
  std::vector<char> eligible(n, 1);
  for (const int v : oracle.base()) eligible[v] = 0;
  const int n_free =
      static_cast<int>(std::count(eligible.begin(), eligible.end(), 1));
  if (rank > n_free) throw InvalidArgument("rank exceeds free items");

  const int q_count = static_cast<int>(active.size());
  std::vector<double> v(n, 0.0);
  for (int j = 0; j < n; ++j) {
    if (eligible[j]) v[j] = static_cast<double>(rank) / n_free;
  }
  std::vector<double> y(q_count, 1.0 / q_count);
  state.y = y;
  if (rank == n_free) {
    state.v = v;
    return state;
  }
  const double c = oracle.gradient_bound();
  if (c <= 0.0) {
    state.v = v;
    return state;
  }
  double d_min = std::numeric_limits<double>::infinity();
  for (const double d : gaps) {
    if (!(d > 0.0)) throw InvalidArgument("gaps must be positive");
    d_min = std::min(d_min, d);
  }
  const double grad_v = c / d_min;
  const double grad_y = rank * c / d_min;
  const double eta_v =
      eta_scale * std::sqrt(std::log(static_cast<double>(n_free)) /
                            iterations) / grad_v;
  const double eta_y =
      eta_scale * std::sqrt(std::log(std::max(2.0, double(q_count))) /
                            iterations) / grad_y;
  state.eta_v = eta_v;
  state.eta_y = eta_y;

  std::vector<double> avg(n, 0.0);
  std::vector<double> scratch(n);
  for (int t = 0; t < iterations; ++t) {
    for (int j = 0; j < n; ++j) avg[j] += v[j];
    const uint64_t key = derive_seed(seed, static_cast<uint64_t>(t));
    const RandomStream rng(key);
    const int qi = sample_index(y, rng.uniform_at(0));
    const std::vector<double> g =
        oracle.full_gradient(x, active[qi], derive_seed(key, "grad"));
    const int j = sample_index(v, rng.uniform_at(1));
    const std::vector<double> h =
        oracle.item_gradient(x, j, derive_seed(key, "item"));

    // Min player: exponentiated gradient descent on the simplex.
    double norm = 0.0;
    double shift = std::numeric_limits<double>::infinity();
    std::vector<double> expo(q_count);
    for (int q = 0; q < q_count; ++q) {
      expo[q] = -eta_y * rank * h[active[q]] / gaps[q];
      shift = std::min(shift, -expo[q]);
    }
    for (int q = 0; q < q_count; ++q) {
      y[q] *= std::exp(expo[q] + shift);
      norm += y[q];
    }
    for (double& yq : y) yq /= norm;

    // Max player: exponentiated ascent, then KL projection.
    const double scale = eta_v / gaps[qi];
    for (int i = 0; i < n; ++i) {
      scratch[i] = eligible[i] ? v[i] * std::exp(scale * g[i]) : 0.0;
    }
    v = project_capped_simplex(scratch, eligible, rank);
  }
  for (double& a : avg) a /= iterations;
  state.v = std::move(avg);
  state.y = std::move(y);
  state.iterations = iterations;
  return state;
}

std::vector<double> ConvexDecomposition::point() const {
  std::vector<double> x(ground_size, 0.0);
  for (std::size_t r = 0; r < bases.size(); ++r) {
    for (const int e : bases[r]) {
      if (e < ground_size) x[e] += weights[r];
    }
  }
  return x;
}

ConvexDecomposition decompose(const FractionalSeedVector& x, int rank,
                              double tol) {
  x.validate();
  if (rank < 0) throw InvalidArgument("rank must be >= 0");
  const int n = static_cast<int>(x.values.size());
  double sum = 0.0;
  for (const double v : x.values) sum += std::clamp(v, 0.0, 1.0);
  if (sum > rank + 1e-9) {
    throw InvalidArgument("point exceeds the rank of the decomposition");
  }
  ConvexDecomposition d;
  d.ground_size = n;
  d.rank = rank;
  if (rank == 0) {
    d.weights = {1.0};
    d.bases = {{}};
    return d;
  }
  const double pad = std::max(0.0, (rank - sum) / rank);
  std::vector<double> y(n + rank);
  for (int j = 0; j < n; ++j) y[j] = std::clamp(x.values[j], 0.0, 1.0);
  for (int j = n; j < n + rank; ++j) y[j] = pad;

  std::vector<int> idx(n + rank);
  double remaining = 1.0;
  while (remaining > tol) {
    std::iota(idx.begin(), idx.end(), 0);
    std::partial_sort(idx.begin(), idx.begin() + rank, idx.end(),
                      [&](int a, int b) {
                        return y[a] != y[b] ? y[a] > y[b] : a < b;
                      });
    double in_min = std::numeric_limits<double>::infinity();
    for (int q = 0; q < rank; ++q) in_min = std::min(in_min, y[idx[q]]);
    double out_max = 0.0;
    for (std::size_t q = rank; q < idx.size(); ++q) {
      out_max = std::max(out_max, y[idx[q]]);
    }
    double w = std::min({in_min, remaining - out_max, remaining});
    if (w <= tol) {
      // Only rounding residue is left; it goes to the current top base.
      w = remaining;
    }
    std::vector<int> base(idx.begin(), idx.begin() + rank);
    std::sort(base.begin(), base.end());
    for (const int e : base) y[e] = std::max(0.0, y[e] - w);
    d.weights.push_back(w);
    d.bases.push_back(std::move(base));
    remaining -= w;
  }
  const double total = std::accumulate(d.weights.begin(), d.weights.end(), 0.0);
  for (double& w : d.weights) w /= total;
  return d;
}

std::vector<int> swap_round_once(const ConvexDecomposition& d,
                                 RandomStream& rng) {
  if (d.bases.empty()) return {};
  std::vector<int> current = d.bases[0];
  double weight = d.weights[0];
  for (std::size_t r = 1; r < d.bases.size(); ++r) {
    std::vector<int> other = d.bases[r];
    const double w = d.weights[r];
    while (true) {
      std::vector<int> only_current, only_other;
      std::set_difference(current.begin(), current.end(), other.begin(),
                          other.end(), std::back_inserter(only_current));
      if (only_current.empty()) break;
      std::set_difference(other.begin(), other.end(), current.begin(),
                          current.end(), std::back_inserter(only_other));
      const int a = only_current.front();
      const int b = only_other.front();
      if (rng.uniform() * (weight + w) < weight) {
        // Keep a: the other base takes it in place of b.
        std::replace(other.begin(), other.end(), b, a);
        std::sort(other.begin(), other.end());
      } else {
        std::replace(current.begin(), current.end(), a, b);
        std::sort(current.begin(), current.end());
      }
    }
    weight += w;
  }
  std::vector<int> out;
  for (const int e : current) {
    if (e < d.ground_size) out.push_back(e);
  }
  return out;
}

std::vector<int> swap_round(const ConvexDecomposition& d, int repetitions,
                            const MultiObjectiveOracle& selector,
                            std::span<const double> targets, int samples,
                            uint64_t seed, std::span<const int> prefix) {
  check_targets(selector, targets);
  if (repetitions < 1) throw InvalidArgument("repetitions must be >= 1");
  std::vector<int> best;
  double best_score = -std::numeric_limits<double>::infinity();
  const uint64_t pool = derive_seed(seed, "select");
  for (int r = 0; r < repetitions; ++r) {
    RandomStream rng(derive_seed(seed, static_cast<uint64_t>(r)));
    std::vector<int> candidate = swap_round_once(d, rng);
    if (repetitions == 1) return candidate;
    std::vector<int> full(prefix.begin(), prefix.end());
    full.insert(full.end(), candidate.begin(), candidate.end());
    const double score =
        min_ratio(selector.set_values(full, samples, pool), targets);
    if (score > best_score) {
      best_score = score;
      best = std::move(candidate);
    }
  }
  return best;
}

FrankWolfeResult multi_fw(const MultiObjectiveOracle& oracle,
                          std::span<const double> targets, int rank,
                          const MultiObjectiveParams& params) {
  check_targets(oracle, targets);
  if (params.fw_iterations < 1) {
    throw InvalidArgument("Frank-Wolfe iterations must be >= 1");
  }
  const int n = oracle.ground_size();
  const int m = oracle.num_objectives();
  const int T = params.fw_iterations;
  FrankWolfeResult result;
  result.x.values.assign(n, 0.0);
  result.x.budget = rank;
  const uint64_t value_seed = derive_seed(params.seed, "fw-values");
  const uint64_t md_seed = derive_seed(params.seed, "fw-md");
  for (int t = 1; t <= T + 1; ++t) {
    const std::vector<Estimate> vals =
        oracle.values(result.x, params.value_samples,
                      derive_seed(value_seed, static_cast<uint64_t>(t)));
    std::vector<double> trace(m);
    for (int i = 0; i < m; ++i) trace[i] = vals[i].value;
    result.value_trace.push_back(std::move(trace));
    if (t == T + 1) break;
    std::vector<int> active;
    std::vector<double> gaps;
    for (int i = 0; i < m; ++i) {
      const double gap = targets[i] - vals[i].value;
      if (gap >= params.epsilon && gap > 0.0) {
        active.push_back(i);
        gaps.push_back(gap);
      }
    }
    result.active_counts.push_back(static_cast<int>(active.size()));
    if (active.empty() || rank == 0) continue;
    const SaddleState s =
        ssp_md(oracle, result.x, active, gaps, rank, params.md_iterations,
               params.eta_scale,
               derive_seed(md_seed, static_cast<uint64_t>(t)));
    for (int j = 0; j < n; ++j) {
      result.x.values[j] = std::min(1.0, result.x.values[j] + s.v[j] / T);
    }
  }
  result.decomposition = decompose(result.x, rank);
  return result;
}

MultiObjectiveResult multiobjective_maximize(
    const MultiObjectiveOracle& oracle, std::span<const double> targets,
    int k, const MultiObjectiveParams& params) {
  check_targets(oracle, targets);
  if (k < 1) throw InvalidArgument("budget k must be >= 1");
  const int n = oracle.ground_size();
  const int m = oracle.num_objectives();
  MultiObjectiveResult result;
  // The threshold step costs a factor 1 - m / (k (1 + eps') eps^3) in the
  // guarantee. When that factor is not positive the step buys nothing and
  // only commits budget greedily, so it is skipped.
  const double threshold_loss =
      m / (k * (1.0 + params.oracle_epsilon) *
           std::pow(params.threshold_epsilon, 3.0));
  const bool use_threshold = threshold_loss < 1.0;
  if (use_threshold) {
    result.threshold_items = threshold_include(
        oracle, targets, k, params.threshold_epsilon, params.oracle_epsilon,
        params.selection_samples, derive_seed(params.seed, "threshold"));
  }
  const std::vector<int>& s1 = result.threshold_items;
  const int k1 = k - static_cast<int>(s1.size());
  const int rank = std::min(k1, n - static_cast<int>(s1.size()));

  if (rank > 0) {
    const std::vector<Estimate> base_values = oracle.set_values(
        s1, params.value_samples, derive_seed(params.seed, "base-values"));
    const double gamma = static_cast<double>(k1) / k;
    std::vector<double> residual(m);
    for (int i = 0; i < m; ++i) {
      residual[i] = gamma * std::max(0.0, targets[i] - base_values[i].value);
    }
    const auto conditional = oracle.condition_on(s1);
    result.fw = multi_fw(*conditional, residual, rank, params);
    result.rounded_items = swap_round(
        result.fw.decomposition, params.rounding_repetitions, oracle,
        targets, params.selection_samples, derive_seed(params.seed, "round"),
        s1);
  }
  result.seeds = s1;
  result.seeds.insert(result.seeds.end(), result.rounded_items.begin(),
                      result.rounded_items.end());
  std::sort(result.seeds.begin(), result.seeds.end());
  result.seeds.erase(std::unique(result.seeds.begin(), result.seeds.end()),
                     result.seeds.end());
  const int free_slots = std::min(k, n) - static_cast<int>(result.seeds.size());
  if (free_slots > 0) {
    result.fill_items =
        fill_slots(oracle, targets, result.seeds, free_slots,
                   params.selection_samples, derive_seed(params.seed, "fill"));
    result.seeds.insert(result.seeds.end(), result.fill_items.begin(),
                        result.fill_items.end());
    std::sort(result.seeds.begin(), result.seeds.end());
  }

  const std::vector<Estimate> achieved = oracle.set_values(
      result.seeds, params.selection_samples,
      derive_seed(params.seed, "report"));
  const double loss = use_threshold ? threshold_loss : 0.0;
  for (int i = 0; i < m; ++i) {
    ObjectiveReport rep;
    rep.target = targets[i];
    rep.achieved = achieved[i].value;
    rep.std_error = achieved[i].std_error;
    rep.ratio = targets[i] > 0.0 ? achieved[i].value / targets[i] : 1.0;
    rep.bound = (1.0 - params.epsilon) * (1.0 - loss) *
                    kOneMinusInvE * targets[i] -
                params.epsilon;
    rep.met = rep.achieved >= rep.bound;
    result.reports.push_back(rep);
  }
  return result;
}

}  // namespace fairspread
