#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "backresp/coalition.hpp"
#include "backresp/error.hpp"
#include "backresp/parallel.hpp"
#include "backresp/safety_game.hpp"
#include "backresp/transition_system.hpp"

namespace backresp {

/// Optimistic: states off the counterexample side with Safe.
/// Pessimistic: only the coalition sides with Safe.
enum class GameVariant { Optimistic, Pessimistic };

inline std::string to_string(GameVariant v) {
  return v == GameVariant::Optimistic ? "optimistic" : "pessimistic";
}

/// Players of the cooperative game: each one controls a set of states.
struct PlayerSet {
  std::vector<std::string> names;
  std::vector<std::vector<StateId>> members;

  std::size_t size() const noexcept { return names.size(); }

  static PlayerSet states(const TransitionSystem& ts) {
    PlayerSet p;
    for (StateId s = 0; s < ts.num_states(); ++s) {
      p.names.push_back(ts.name(s));
      p.members.push_back({s});
    }
    return p;
  }

  static PlayerSet groups(const StateGrouping& g) {
    PlayerSet p;
    for (const auto& grp : g.groups()) {
      p.names.push_back(grp.name);
      p.members.push_back(grp.members);
    }
    return p;
  }
};

/// Per-worker buffers for repeated game evaluation.
struct GameScratch {
  AttractorSolver solver;
  std::vector<char> safe;
};

/// The simple cooperative game v_opt or v_pes of a system and counterexample
/// over a player set. Immutable; evaluation needs a caller-owned scratch.
class CoalitionGame {
 public:
  CoalitionGame(const TransitionSystem& ts, const Counterexample& ce, GameVariant variant, PlayerSet players)
      : ts_(&ts), ce_(&ce), variant_(variant), players_(std::move(players)), base_(ts.num_states(), 0) {
    if (variant_ == GameVariant::Optimistic) {
      for (StateId s = 0; s < ts.num_states(); ++s) base_[s] = ce.on_run(s) ? 0 : 1;
    }
  }

  std::size_t player_count() const noexcept { return players_.size(); }
  const PlayerSet& players() const noexcept { return players_; }
  GameVariant variant() const noexcept { return variant_; }
  const TransitionSystem& system() const noexcept { return *ts_; }
  const Counterexample& counterexample() const noexcept { return *ce_; }

  bool value(const Coalition& c, GameScratch& scratch) const {
    scratch.safe = base_;
    for (auto p : c.members()) grant(p, scratch.safe);
    return solve(scratch);
  }

  /// Coalition given as a bitmask over the first 64 players.
  bool value_mask(std::uint64_t mask, GameScratch& scratch) const {
    scratch.safe = base_;
    for (; mask != 0; mask &= mask - 1) grant(static_cast<std::size_t>(std::countr_zero(mask)), scratch.safe);
    return solve(scratch);
  }

  bool value(const Coalition& c) const {
    GameScratch scratch;
    return value(c, scratch);
  }

 private:
  void grant(std::size_t player, std::vector<char>& safe) const {
    for (StateId s : players_.members[player]) safe[s] = 1;
  }

  bool solve(GameScratch& scratch) const {
    return scratch.solver.safe_wins(EngravedView(*ts_, ce_, scratch.safe));
  }

  const TransitionSystem* ts_;
  const Counterexample* ce_;
  GameVariant variant_;
  PlayerSet players_;
  std::vector<char> base_;
};

/// v(C) for a state-level coalition.
inline bool value(const TransitionSystem& ts, const Counterexample& ce, GameVariant variant,
                  const Coalition& states) {
  return CoalitionGame(ts, ce, variant, PlayerSet::states(ts)).value(states);
}

struct EnumerationOptions {
  std::size_t player_cap = 25;
  std::size_t threads = 1;
};

inline void check_player_cap(std::size_t players, std::size_t cap) {
  const std::size_t hard_limit = 32;
  if (players > std::min(cap, hard_limit)) {
    throw Error(ErrorKind::CapExceeded, "PlayerCapExceeded",
                std::to_string(players) + " players exceed the cap of " + std::to_string(std::min(cap, hard_limit)) +
                    "; group states (--use-groups) or use the sampling engine");
  }
}

/// Winning bit for every coalition mask of a game with at most 32 players.
class WinTable {
 public:
  WinTable(std::size_t players, GameVariant variant)
      : players_(players), variant_(variant), bits_(((std::uint64_t{1} << players) + 63) / 64, 0) {}

  std::size_t player_count() const noexcept { return players_; }
  GameVariant variant() const noexcept { return variant_; }
  std::uint64_t size() const noexcept { return std::uint64_t{1} << players_; }

  bool winning(std::uint64_t mask) const noexcept { return (bits_[mask >> 6] >> (mask & 63)) & 1u; }
  void set(std::uint64_t mask) noexcept { bits_[mask >> 6] |= std::uint64_t{1} << (mask & 63); }

 private:
  std::size_t players_;
  GameVariant variant_;
  std::vector<std::uint64_t> bits_;
};

namespace detail {

/// All masks over `n` bits with exactly `k` set, ascending.
inline std::vector<std::uint32_t> masks_of_size(std::size_t n, std::size_t k) {
  std::vector<std::uint32_t> out;
  if (k > n) return out;
  if (k == 0) return {0};
  const std::uint64_t limit = std::uint64_t{1} << n;
  std::uint64_t m = (std::uint64_t{1} << k) - 1;
  while (m < limit) {
    out.push_back(static_cast<std::uint32_t>(m));
    const std::uint64_t c = m & (~m + 1);
    const std::uint64_t r = m + c;
    m = (((r ^ m) >> 2) / c) | r;
  }
  return out;
}

}  // namespace detail

/// Enumerates masks by increasing size. A mask that strictly contains a
/// winning mask is winning without a game solve; every other mask is solved.
/// Workers only read bits of finished size classes, so the table does not
/// depend on the thread count.
inline WinTable build_win_table(const CoalitionGame& game, const EnumerationOptions& options = {}) {
  const std::size_t n = game.player_count();
  check_player_cap(n, options.player_cap);
  WinTable table(n, game.variant());
  const std::size_t workers = std::max<std::size_t>(1, options.threads);

  for (std::size_t k = 0; k <= n; ++k) {
    const auto masks = detail::masks_of_size(n, k);
    std::vector<char> result(masks.size(), 0);
    parallel_chunks(masks.size(), workers, [&](std::size_t, std::size_t begin, std::size_t end) {
      GameScratch scratch;
      for (std::size_t i = begin; i < end; ++i) {
        const std::uint64_t m = masks[i];
        bool win = false;
        for (std::uint64_t bits = m; bits != 0 && !win; bits &= bits - 1) {
          win = table.winning(m & ~(bits & (~bits + 1)));
        }
        result[i] = win || game.value_mask(m, scratch);
      }
    });
    for (std::size_t i = 0; i < masks.size(); ++i) {
      if (result[i]) table.set(masks[i]);
    }
  }
  return table;
}

/// The ⊆-minimal winning coalitions, ordered by size then mask value.
inline std::vector<Coalition> minimal_winning(const WinTable& table) {
  std::vector<Coalition> out;
  const std::size_t n = table.player_count();
  for (std::size_t k = 0; k <= n; ++k) {
    for (std::uint64_t m : detail::masks_of_size(n, k)) {
      if (!table.winning(m)) continue;
      bool minimal = true;
      for (std::uint64_t bits = m; bits != 0 && minimal; bits &= bits - 1) {
        minimal = !table.winning(m & ~(bits & (~bits + 1)));
      }
      if (minimal) out.push_back(Coalition::from_mask(n, m));
    }
  }
  return out;
}

/// States that win the optimistic game on their own. Only run states are
/// tested: no other state can win alone.
inline std::vector<StateId> winning_states(const TransitionSystem& ts, const Counterexample& ce) {
  const CoalitionGame game(ts, ce, GameVariant::Optimistic, PlayerSet::states(ts));
  GameScratch scratch;
  std::vector<StateId> w;
  for (StateId s : ce.run()) {
    if (game.value(Coalition(ts.num_states(), {s}), scratch)) w.push_back(s);
  }
  std::sort(w.begin(), w.end());
  return w;
}

}  // namespace backresp
