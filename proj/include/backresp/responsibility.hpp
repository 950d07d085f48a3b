#pragma once

#include <bit>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "backresp/coalition.hpp"
#include "backresp/coop_game.hpp"
#include "backresp/error.hpp"
#include "backresp/parallel.hpp"
#include "backresp/power_index.hpp"
#include "backresp/rational.hpp"
#include "backresp/safety_game.hpp"
#include "backresp/transition_system.hpp"

namespace backresp {

/// Per-size sample allocation for the estimator.
struct SamplingPlan {
  std::vector<std::uint64_t> per_size;
  std::uint64_t seed = 0;

  std::uint64_t total() const noexcept {
    std::uint64_t t = 0;
    for (auto c : per_size) t += c;
    return t;
  }
};

struct PlayerResult {
  std::string name;
  std::vector<StateId> states;
  std::optional<Rational> exact;
  std::optional<double> estimate;
  /// Estimator only: trials per coalition size in which this player was
  /// absent from the sampled coalition.
  std::optional<std::vector<std::uint64_t>> samples_per_size;
  /// Estimator only: sizes with positive weight that got no trial.
  std::vector<std::size_t> coverage_gaps;

  double value() const { return exact ? to_double(*exact) : estimate.value_or(0.0); }
};

struct ResponsibilityReport {
  GameVariant variant = GameVariant::Pessimistic;
  IndexKind index = IndexKind::Shapley;
  std::string engine;
  bool grouped = false;
  std::vector<PlayerResult> players;
  std::optional<Rational> exact_sum;
  double sum = 0.0;
  bool safe_path = false;
  std::vector<std::string> warnings;
  /// Engine-specific figures, e.g. the size of the winning-state set.
  std::map<std::string, std::string> diagnostics;
  std::optional<SamplingPlan> plan;

  const PlayerResult* find(std::string_view name) const {
    for (const auto& p : players) {
      if (p.name == name) return &p;
    }
    return nullptr;
  }
};

/// Players whose value exceeds `threshold` (threshold problem); use 0 for
/// the positivity problem.
inline std::vector<std::string> players_above(const ResponsibilityReport& r, const Rational& threshold) {
  std::vector<std::string> out;
  for (const auto& p : r.players) {
    const bool above = p.exact ? (*p.exact > threshold) : (p.value() > to_double(threshold));
    if (above) out.push_back(p.name);
  }
  return out;
}

struct EngineOptions {
  std::size_t player_cap = 25;
  std::size_t threads = 1;
};

// ---------------------------------------------------------------------------
// Exact engine

/// counts[x][i]: number of critical pairs (C, x) with |C| = i.
inline std::vector<std::vector<std::uint64_t>> critical_counts(const WinTable& table, std::size_t threads = 1) {
  const std::size_t n = table.player_count();
  const std::uint64_t total = table.size();
  const std::size_t workers = std::max<std::size_t>(1, threads);
  std::vector<std::vector<std::vector<std::uint64_t>>> partial(
      workers, std::vector<std::vector<std::uint64_t>>(n, std::vector<std::uint64_t>(n, 0)));

  parallel_chunks(static_cast<std::size_t>(total), workers, [&](std::size_t w, std::size_t begin, std::size_t end) {
    auto& counts = partial[w];
    for (std::uint64_t m = begin; m < end; ++m) {
      if (table.winning(m)) continue;
      const auto size = static_cast<std::size_t>(std::popcount(m));
      for (std::size_t x = 0; x < n; ++x) {
        const std::uint64_t bit = std::uint64_t{1} << x;
        if ((m & bit) == 0 && table.winning(m | bit)) ++counts[x][size];
      }
    }
  });

  auto counts = std::move(partial[0]);
  for (std::size_t w = 1; w < workers; ++w) {
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t i = 0; i < n; ++i) counts[x][i] += partial[w][x][i];
    }
  }
  return counts;
}

/// R(v, x) = sum_i counts[x][i] * p_i for every player.
inline std::vector<Rational> exact_values(const CoalitionGame& game, const WeightVector& weights,
                                          const EngineOptions& options = {}) {
  const std::size_t n = game.player_count();
  if (weights.player_count() != n) {
    throw input_error("WeightCountMismatch", "weight vector has " + std::to_string(weights.player_count()) +
                                                 " entries but the game has " + std::to_string(n) + " players");
  }
  const WinTable table = build_win_table(game, {options.player_cap, options.threads});
  const auto counts = critical_counts(table, options.threads);
  std::vector<Rational> values(n, 0);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t i = 0; i < n; ++i) {
      if (counts[x][i] != 0) values[x] += weights[i] * counts[x][i];
    }
  }
  return values;
}

namespace detail {

inline PlayerSet players_for(const Model& model, bool use_groups) {
  return use_groups ? PlayerSet::groups(model.grouping) : PlayerSet::states(model.system);
}

inline ResponsibilityReport report_skeleton(const Model& model, GameVariant variant, const WeightVector& weights,
                                            const PlayerSet& players, bool grouped, std::string engine) {
  ResponsibilityReport r;
  r.variant = variant;
  r.index = weights.kind();
  r.engine = std::move(engine);
  r.grouped = grouped;
  r.safe_path = has_safe_path(model.system);
  for (std::size_t p = 0; p < players.size(); ++p) {
    PlayerResult pr;
    pr.name = players.names[p];
    pr.states = players.members[p];
    r.players.push_back(std::move(pr));
  }
  for (const auto& d : model.diagnostics) {
    if (d.severity == Severity::Warning) r.warnings.push_back(d.message);
  }
  return r;
}

inline void check_weights(const WeightVector& weights, std::size_t players) {
  if (weights.player_count() != players) {
    throw input_error("WeightCountMismatch", "weight vector has " + std::to_string(weights.player_count()) +
                                                 " entries but there are " + std::to_string(players) + " players");
  }
}

}  // namespace detail

/// Exact responsibility of every player from the full win table.
inline ResponsibilityReport exact(const Model& model, GameVariant variant, const WeightVector& weights,
                                  bool use_groups = false, const EngineOptions& options = {}) {
  const auto& ce = model.require_counterexample();
  auto players = detail::players_for(model, use_groups);
  check_player_cap(players.size(), options.player_cap);
  detail::check_weights(weights, players.size());
  auto report = detail::report_skeleton(model, variant, weights, players, use_groups, "exact");
  const CoalitionGame game(model.system, ce, variant, std::move(players));
  const auto values = exact_values(game, weights, options);

  Rational sum = 0;
  for (std::size_t p = 0; p < values.size(); ++p) {
    report.players[p].exact = values[p];
    sum += values[p];
  }
  report.exact_sum = sum;
  report.sum = to_double(sum);
  return report;
}

// ---------------------------------------------------------------------------
// Optimistic engine via winning states

/// K = sum_{i=0}^{n-w} C(n-w, i) * p_i
inline Rational optimistic_constant(const WeightVector& weights, std::size_t w) {
  const std::size_t n = weights.player_count();
  if (w == 0 || w > n) return 0;
  const auto row = binomial_row(static_cast<unsigned>(n - w));
  Rational k = 0;
  for (std::size_t i = 0; i <= n - w; ++i) k += weights[i] * row[i];
  return k;
}

/// Every state that wins the optimistic game alone gets K, all others 0.
/// Needs one attractor solve per run state.
inline ResponsibilityReport optimistic_fast(const Model& model, const WeightVector& weights) {
  const auto& ce = model.require_counterexample();
  const auto& ts = model.system;
  const auto players = PlayerSet::states(ts);
  detail::check_weights(weights, players.size());
  auto report = detail::report_skeleton(model, GameVariant::Optimistic, weights, players, false, "fast");

  const auto w_states = winning_states(ts, ce);
  const std::size_t w = w_states.size();
  report.diagnostics["|W|"] = std::to_string(w);

  Rational k = 0;
  if (w == 0) {
    report.warnings.push_back(
        "DegenerateW: no state can avoid the bad states on its own; all optimistic responsibilities are 0");
  } else {
    k = optimistic_constant(weights, w);
    Rational closed_form = -1;
    if (weights.kind() == IndexKind::Shapley) closed_form = Rational(1, w);
    if (weights.kind() == IndexKind::Banzhaf) {
      BigInt pow2 = 1;
      pow2 <<= static_cast<unsigned>(w - 1);
      closed_form = Rational(BigInt(1), pow2);
    }
    if (closed_form >= 0 && closed_form != k) {
      throw Error(ErrorKind::Internal, "ClosedFormMismatch",
                  "K = " + to_fraction_string(k) + " differs from closed form " + to_fraction_string(closed_form));
    }
    report.diagnostics["K"] = to_fraction_string(k);
  }

  std::vector<char> in_w(ts.num_states(), 0);
  for (StateId s : w_states) in_w[s] = 1;
  Rational sum = 0;
  for (StateId s = 0; s < ts.num_states(); ++s) {
    report.players[s].exact = in_w[s] ? k : Rational(0);
    sum += *report.players[s].exact;
  }
  report.exact_sum = sum;
  report.sum = to_double(sum);
  return report;
}

// ---------------------------------------------------------------------------
// Stochastic engine

/// Budget split proportional to C(n-1,i) * p_i by largest remainder (ties to
/// the smaller size); every size with positive mass gets at least one sample,
/// taken from the currently largest allocation.
inline SamplingPlan plan_samples(const WeightVector& weights, std::uint64_t budget, std::uint64_t seed) {
  const auto masses = weights.size_masses();
  const std::size_t sizes = masses.size();
  Rational total_mass = 0;
  std::size_t positive = 0;
  for (const auto& m : masses) {
    if (m > 0) {
      total_mass += m;
      ++positive;
    }
  }
  if (positive == 0) throw Error(ErrorKind::Plan, "EmptyPlan", "no coalition size carries positive weight");
  if (budget < positive) {
    throw Error(ErrorKind::Plan, "BudgetTooSmall",
                "budget of " + std::to_string(budget) + " samples cannot cover the " + std::to_string(positive) +
                    " coalition sizes with positive weight");
  }

  SamplingPlan plan;
  plan.seed = seed;
  plan.per_size.assign(sizes, 0);
  std::vector<Rational> remainder(sizes, 0);
  std::uint64_t assigned = 0;
  for (std::size_t i = 0; i < sizes; ++i) {
    if (masses[i] <= 0) continue;
    const Rational quota = masses[i] / total_mass * budget;
    const BigInt whole = numerator(quota) / denominator(quota);
    plan.per_size[i] = static_cast<std::uint64_t>(whole);
    remainder[i] = quota - Rational(whole);
    assigned += plan.per_size[i];
  }
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < sizes; ++i) {
    if (masses[i] > 0) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t j = 0; assigned < budget; ++j, ++assigned) ++plan.per_size[order[j % order.size()]];

  for (std::size_t i = 0; i < sizes; ++i) {
    if (masses[i] <= 0 || plan.per_size[i] > 0) continue;
    std::size_t donor = 0;
    for (std::size_t d = 1; d < sizes; ++d) {
      if (plan.per_size[d] > plan.per_size[donor]) donor = d;
    }
    --plan.per_size[donor];
    plan.per_size[i] = 1;
  }
  return plan;
}

namespace detail {

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Independent stream for sample `index` of size class `size`.
inline std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t size, std::uint64_t index) {
  return mix64(mix64(mix64(seed) ^ size) ^ index);
}

/// Uniform `k`-subset of [0, n) (Floyd's algorithm).
template <typename Rng>
Coalition random_subset(std::size_t n, std::size_t k, Rng& rng) {
  Coalition c(n);
  for (std::size_t j = n - k; j < n; ++j) {
    std::uniform_int_distribution<std::size_t> dist(0, j);
    const std::size_t t = dist(rng);
    c.insert(c.contains(t) ? j : t);
  }
  return c;
}

}  // namespace detail

/// Per-size tallies of the estimator: positive marginal contributions and
/// trials for every player.
struct SampleTallies {
  std::vector<std::vector<std::uint64_t>> positive;  // [player][size]
  std::vector<std::vector<std::uint64_t>> trials;    // [player][size]
};

/// Draws plan.per_size[i] uniform size-i coalitions for each i and records,
/// for every player outside the coalition, whether adding it wins. Each
/// sample has its own RNG stream and tallies are integer sums, so the result
/// does not depend on the thread count.
inline SampleTallies sample_tallies(const CoalitionGame& game, const SamplingPlan& plan, std::size_t threads = 1) {
  const std::size_t n = game.player_count();
  SampleTallies tallies;
  tallies.positive.assign(n, std::vector<std::uint64_t>(plan.per_size.size(), 0));
  tallies.trials.assign(n, std::vector<std::uint64_t>(plan.per_size.size(), 0));
  const std::size_t workers = std::max<std::size_t>(1, threads);

  for (std::size_t size = 0; size < plan.per_size.size() && size < n; ++size) {
    const std::uint64_t count = plan.per_size[size];
    if (count == 0) continue;
    std::vector<std::vector<std::uint64_t>> pos(workers, std::vector<std::uint64_t>(n, 0));
    std::vector<std::vector<std::uint64_t>> tri(workers, std::vector<std::uint64_t>(n, 0));
    const std::size_t use_workers = count >= 64 ? workers : 1;
    parallel_chunks(static_cast<std::size_t>(count), use_workers,
                    [&](std::size_t w, std::size_t begin, std::size_t end) {
                      GameScratch scratch;
                      for (std::size_t j = begin; j < end; ++j) {
                        std::mt19937_64 rng(detail::sample_seed(plan.seed, size, j));
                        Coalition c = detail::random_subset(n, size, rng);
                        const bool base = game.value(c, scratch);
                        for (std::size_t x = 0; x < n; ++x) {
                          if (c.contains(x)) continue;
                          ++tri[w][x];
                          if (base) continue;  // monotone: no marginal gain
                          c.insert(x);
                          if (game.value(c, scratch)) ++pos[w][x];
                          c.erase(x);
                        }
                      }
                    });
    for (std::size_t w = 0; w < workers; ++w) {
      for (std::size_t x = 0; x < n; ++x) {
        tallies.positive[x][size] += pos[w][x];
        tallies.trials[x][size] += tri[w][x];
      }
    }
  }
  return tallies;
}

/// Relative shortfall of the estimated Shapley sum below which a coverage
/// warning is issued.
inline constexpr double kCoverageSumThreshold = 0.9;

/// Stratified estimate: sum_i C(n-1,i) * p_i * x_{s,i} / y_{s,i}, skipping
/// sizes without trials (reported as coverage gaps).
inline ResponsibilityReport estimate(const Model& model, GameVariant variant, const WeightVector& weights,
                                     const SamplingPlan& plan, bool use_groups = false, std::size_t threads = 1) {
  const auto& ce = model.require_counterexample();
  auto players = detail::players_for(model, use_groups);
  detail::check_weights(weights, players.size());
  if (plan.per_size.size() != players.size()) {
    throw Error(ErrorKind::Plan, "PlanMismatch", "sampling plan has " + std::to_string(plan.per_size.size()) +
                                                     " sizes but there are " + std::to_string(players.size()) +
                                                     " players");
  }
  auto report = detail::report_skeleton(model, variant, weights, players, use_groups, "sample");
  report.plan = plan;
  const CoalitionGame game(model.system, ce, variant, std::move(players));
  const auto tallies = sample_tallies(game, plan, threads);

  const auto masses = weights.size_masses();
  std::vector<double> mass(masses.size());
  for (std::size_t i = 0; i < masses.size(); ++i) mass[i] = to_double(masses[i]);

  std::size_t players_with_gaps = 0;
  double sum = 0.0;
  for (std::size_t x = 0; x < game.player_count(); ++x) {
    auto& pr = report.players[x];
    double value = 0.0;
    for (std::size_t i = 0; i < mass.size(); ++i) {
      const auto y = tallies.trials[x][i];
      if (y == 0) {
        if (masses[i] != 0) pr.coverage_gaps.push_back(i);
        continue;
      }
      value += mass[i] * static_cast<double>(tallies.positive[x][i]) / static_cast<double>(y);
    }
    pr.estimate = value;
    pr.samples_per_size = tallies.trials[x];
    players_with_gaps += !pr.coverage_gaps.empty();
    sum += value;
  }
  report.sum = sum;
  report.diagnostics["samples"] = std::to_string(plan.total());

  if (players_with_gaps > 0) {
    report.warnings.push_back("insufficient coverage: " + std::to_string(players_with_gaps) +
                              " players have coalition sizes without any trial");
  }
  if (weights.kind() == IndexKind::Shapley && report.safe_path && sum < kCoverageSumThreshold) {
    report.warnings.push_back("insufficient coverage: estimated Shapley values sum to " + std::to_string(sum) +
                              ", well below 1");
  }
  return report;
}

/// Converts a wall-clock budget into a fixed plan: times a burst of 100
/// samples on this model and scales the sample budget accordingly.
inline SamplingPlan plan_for_time(const Model& model, GameVariant variant, const WeightVector& weights,
                                  double seconds, std::uint64_t seed, bool use_groups = false,
                                  std::size_t threads = 1) {
  if (!(seconds > 0)) throw Error(ErrorKind::Plan, "BadTimeBudget", "time budget must be positive");
  const auto& ce = model.require_counterexample();
  const CoalitionGame game(model.system, ce, variant, detail::players_for(model, use_groups));
  const auto masses = weights.size_masses();
  std::uint64_t positive = 0;
  for (const auto& m : masses) positive += m > 0;

  const std::uint64_t burst = std::max<std::uint64_t>(100, positive);
  const auto calibration = plan_samples(weights, burst, seed);
  const auto start = std::chrono::steady_clock::now();
  (void)sample_tallies(game, calibration, threads);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double per_sample = std::max(elapsed / static_cast<double>(burst), 1e-9);
  const auto budget = std::max<std::uint64_t>(positive, static_cast<std::uint64_t>(seconds / per_sample));
  return plan_samples(weights, budget, seed);
}

}  // namespace backresp
