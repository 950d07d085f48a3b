#pragma once

// Brute-force reference implementations. Deliberately naive and independent
// of the library engines: they only share the model types.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <vector>

#include "backresp/error.hpp"
#include "backresp/rational.hpp"
#include "backresp/transition_system.hpp"

namespace backresp::oracle {

/// v(C) for C given as a bitmask over players.
using ValueFn = std::function<bool(std::uint64_t)>;

inline void require_players(std::size_t n, std::size_t limit) {
  if (n > limit) {
    throw input_error("TooManyPlayers", std::to_string(n) + " players exceed the oracle limit of " +
                                            std::to_string(limit));
  }
}

/// (1/n!) * sum over all orderings of the marginal contribution of each
/// player when it joins its predecessors.
inline std::vector<Rational> shapley_by_permutations(const ValueFn& v, std::size_t n) {
  require_players(n, 8);
  std::vector<BigInt> hits(n, 0);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  BigInt count = 0;
  do {
    std::uint64_t before = 0;
    for (std::size_t x : perm) {
      const std::uint64_t after = before | (std::uint64_t{1} << x);
      hits[x] += static_cast<int>(v(after)) - static_cast<int>(v(before));
      before = after;
    }
    count += 1;
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::vector<Rational> out(n);
  for (std::size_t x = 0; x < n; ++x) out[x] = Rational(hits[x], count);
  return out;
}

/// sum_{C subset of X\{x}} p_|C| * (v(C+x) - v(C)), literally.
inline std::vector<Rational> index_by_definition(const ValueFn& v, const std::vector<Rational>& p, std::size_t n) {
  require_players(n, 12);
  std::vector<Rational> out(n, 0);
  for (std::size_t x = 0; x < n; ++x) {
    const std::uint64_t xbit = std::uint64_t{1} << x;
    for (std::uint64_t c = 0; c < (std::uint64_t{1} << n); ++c) {
      if (c & xbit) continue;
      const int diff = static_cast<int>(v(c | xbit)) - static_cast<int>(v(c));
      if (diff != 0) out[x] += p[static_cast<std::size_t>(std::popcount(c))] * diff;
    }
  }
  return out;
}

/// Safe wins the engraved game, computed by a least fixpoint over explicit
/// successor lists. `safe[s]` marks Safe-owned states; `run` is the
/// counterexample (empty for no engraving).
inline bool safe_wins_naive(const TransitionSystem& ts, std::span<const StateId> run, const std::vector<char>& safe) {
  const std::size_t n = ts.num_states();
  std::vector<std::vector<StateId>> succ(n);
  for (StateId s = 0; s < n; ++s) {
    auto sp = ts.successors(s);
    succ[s].assign(sp.begin(), sp.end());
  }
  for (std::size_t i = 0; i + 1 < run.size(); ++i) {
    if (!safe[run[i]]) succ[run[i]] = {run[i + 1]};
  }
  std::vector<char> attr(n, 0);
  for (StateId s = 0; s < n; ++s) attr[s] = ts.is_bad(s);
  for (bool changed = true; changed;) {
    changed = false;
    for (StateId s = 0; s < n; ++s) {
      if (attr[s]) continue;
      const auto in_attr = [&](StateId t) { return attr[t] != 0; };
      const bool pulled = safe[s] ? std::all_of(succ[s].begin(), succ[s].end(), in_attr)
                                  : std::any_of(succ[s].begin(), succ[s].end(), in_attr);
      if (pulled) {
        attr[s] = 1;
        changed = true;
      }
    }
  }
  return !attr[ts.initial()];
}

/// v_opt / v_pes from the definitions; `groups[p]` are the states of player p.
inline ValueFn game_value(const TransitionSystem& ts, std::vector<StateId> run, bool optimistic,
                          std::vector<std::vector<StateId>> groups) {
  return [&ts, run = std::move(run), optimistic, groups = std::move(groups)](std::uint64_t mask) {
    std::vector<char> safe(ts.num_states(), 0);
    if (optimistic) {
      std::fill(safe.begin(), safe.end(), 1);
      for (StateId s : run) safe[s] = 0;
    }
    for (std::size_t p = 0; p < groups.size(); ++p) {
      if (mask >> p & 1) {
        for (StateId s : groups[p]) safe[s] = 1;
      }
    }
    return safe_wins_naive(ts, run, safe);
  };
}

}  // namespace backresp::oracle
