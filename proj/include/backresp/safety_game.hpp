#pragma once

#include <concepts>
#include <span>
#include <vector>

#include "backresp/coalition.hpp"
#include "backresp/transition_system.hpp"

namespace backresp {

enum class Player { Safe, Reach };

/// What the attractor solver needs from an arena: ownership, bad states,
/// arena out-degrees and a way to walk arena predecessors.
template <typename A>
concept SafetyArena = requires(const A& a, StateId s) {
  { a.num_states() } -> std::convertible_to<std::size_t>;
  { a.initial() } -> std::convertible_to<StateId>;
  { a.is_bad(s) } -> std::convertible_to<bool>;
  { a.owner(s) } -> std::convertible_to<Player>;
  { a.out_degree(s) } -> std::convertible_to<std::size_t>;
  a.for_each_predecessor(s, [](StateId) {});
};

/// Materialized safety game arena.
class GameArena {
 public:
  GameArena(std::vector<Player> owner, std::vector<std::vector<StateId>> successors, StateId initial,
            std::vector<char> bad)
      : owner_(std::move(owner)), succ_(std::move(successors)), pred_(succ_.size()), initial_(initial),
        bad_(std::move(bad)) {
    for (StateId s = 0; s < succ_.size(); ++s) {
      for (StateId t : succ_[s]) pred_[t].push_back(s);
    }
  }

  std::size_t num_states() const noexcept { return succ_.size(); }
  StateId initial() const noexcept { return initial_; }
  bool is_bad(StateId s) const noexcept { return bad_[s] != 0; }
  Player owner(StateId s) const noexcept { return owner_[s]; }
  std::span<const StateId> successors(StateId s) const noexcept { return succ_[s]; }
  std::size_t out_degree(StateId s) const noexcept { return succ_[s].size(); }

  template <typename F>
  void for_each_predecessor(StateId t, F&& f) const {
    for (StateId p : pred_[t]) f(p);
  }

 private:
  std::vector<Player> owner_;
  std::vector<std::vector<StateId>> succ_;
  std::vector<std::vector<StateId>> pred_;
  StateId initial_;
  std::vector<char> bad_;
};

/// Engraved game as an overlay on the transition system. `safe` flags the
/// state-level coalition: those states belong to Safe and keep all their
/// transitions; a run state ρ_i (i < k) outside it keeps only ρ_i → ρ_{i+1}.
/// With no counterexample nothing is engraved.
class EngravedView {
 public:
  EngravedView(const TransitionSystem& ts, const Counterexample* ce, std::span<const char> safe)
      : ts_(&ts), ce_(ce), safe_(safe) {}

  std::size_t num_states() const noexcept { return ts_->num_states(); }
  StateId initial() const noexcept { return ts_->initial(); }
  bool is_bad(StateId s) const noexcept { return ts_->is_bad(s); }
  Player owner(StateId s) const noexcept { return safe_[s] ? Player::Safe : Player::Reach; }

  bool engraved(StateId s) const noexcept {
    if (ce_ == nullptr || safe_[s]) return false;
    const auto p = ce_->position(s);
    return p >= 0 && static_cast<std::size_t>(p) + 1 < ce_->length();
  }

  std::size_t out_degree(StateId s) const noexcept { return engraved(s) ? 1 : ts_->out_degree(s); }

  template <typename F>
  void for_each_predecessor(StateId t, F&& f) const {
    for (StateId p : ts_->predecessors(t)) {
      if (!engraved(p) || *ce_->next(p) == t) f(p);
    }
  }

  template <typename F>
  void for_each_successor(StateId s, F&& f) const {
    if (engraved(s)) {
      f(*ce_->next(s));
      return;
    }
    for (StateId t : ts_->successors(s)) f(t);
  }

 private:
  const TransitionSystem* ts_;
  const Counterexample* ce_;
  std::span<const char> safe_;
};

/// Materializes the engraved game for a state-level coalition.
inline GameArena engrave(const TransitionSystem& ts, const Counterexample& ce, const Coalition& states) {
  std::vector<char> safe(ts.num_states(), 0);
  for (auto s : states.members()) safe[s] = 1;
  const EngravedView view(ts, &ce, safe);

  std::vector<Player> owner(ts.num_states());
  std::vector<std::vector<StateId>> succ(ts.num_states());
  std::vector<char> bad(ts.num_states(), 0);
  for (StateId s = 0; s < ts.num_states(); ++s) {
    owner[s] = view.owner(s);
    view.for_each_successor(s, [&](StateId t) { succ[s].push_back(t); });
    bad[s] = ts.is_bad(s);
  }
  return GameArena(std::move(owner), std::move(succ), ts.initial(), std::move(bad));
}

struct Winner {
  Player winner = Player::Safe;
  /// Reach's attractor of the bad states (flag per state).
  std::vector<char> reach_region;

  bool safe_wins() const noexcept { return winner == Player::Safe; }
};

/// Attractor computation with reusable scratch buffers. Linear in states
/// plus transitions; FIFO worklist. One instance per worker thread.
class AttractorSolver {
 public:
  template <SafetyArena A>
  Winner solve(const A& arena) {
    run(arena, /*stop_at_initial=*/false);
    Winner w;
    w.winner = attracted_[arena.initial()] ? Player::Reach : Player::Safe;
    w.reach_region = attracted_;
    return w;
  }

  /// Same verdict as solve(), but stops once the initial state is attracted.
  template <SafetyArena A>
  bool safe_wins(const A& arena) {
    return !run(arena, /*stop_at_initial=*/true);
  }

 private:
  // Returns whether the initial state ended up in the attractor.
  template <SafetyArena A>
  bool run(const A& arena, bool stop_at_initial) {
    const std::size_t n = arena.num_states();
    attracted_.assign(n, 0);
    remaining_.resize(n);
    queue_.clear();
    for (StateId s = 0; s < n; ++s) {
      remaining_[s] = static_cast<std::uint32_t>(arena.out_degree(s));
      if (arena.is_bad(s)) {
        attracted_[s] = 1;
        queue_.push_back(s);
      }
    }
    const StateId init = arena.initial();
    if (attracted_[init]) return true;

    for (std::size_t head = 0; head < queue_.size(); ++head) {
      const StateId t = queue_[head];
      bool hit_initial = false;
      arena.for_each_predecessor(t, [&](StateId p) {
        if (attracted_[p]) return;
        if (arena.owner(p) == Player::Safe && --remaining_[p] != 0) return;
        attracted_[p] = 1;
        queue_.push_back(p);
        if (p == init) hit_initial = true;
      });
      if (hit_initial && stop_at_initial) return true;
    }
    return attracted_[init] != 0;
  }

  std::vector<char> attracted_;
  std::vector<std::uint32_t> remaining_;
  std::vector<StateId> queue_;
};

template <SafetyArena A>
Winner solve(const A& arena) {
  AttractorSolver solver;
  return solver.solve(arena);
}

/// True iff some path from the initial state never visits a bad state.
inline bool has_safe_path(const TransitionSystem& ts) {
  const std::vector<char> all(ts.num_states(), 1);
  AttractorSolver solver;
  return solver.safe_wins(EngravedView(ts, nullptr, all));
}

}  // namespace backresp
