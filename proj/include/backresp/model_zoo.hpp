#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <deque>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "backresp/error.hpp"
#include "backresp/transition_system.hpp"

namespace backresp::zoo {

/// Railway with a first switch s1 choosing between the main switch s2 and
/// `branch_switches` side switches; every switch but s1 routes to the goal
/// or to the crash sink. The counterexample is s1 s2 crash. With a single
/// side switch it is called s3.
struct Train {
  std::size_t branch_switches = 1;
};

/// Fragment of the Dresden station interlocking around the misrouted train:
/// every dotted exit leads to one absorbing wrong-platform sink.
struct Dresden {};

/// N philosophers scheduled round-robin; each may grab its left fork when it
/// is thinking. The bad state is the deadlock where everyone holds a left
/// fork. Grouped by whose turn it is.
struct DiningPhilosophers {
  std::size_t n = 4;
};

/// N generals decide attack/retreat one after another; a leaf is bad unless
/// the decision was unanimous. Grouped by general.
struct Generals {
  std::size_t n = 4;
};

/// Triangular peg solitaire with 15 holes, numbered row by row from 1 at the
/// apex, starting with hole 1 empty. The counterexample plays `moves`
/// (from-hole, to-hole) and must end in a stuck position with two or more
/// pegs.
struct PegSolitaireTriangle5 {
  std::vector<std::pair<int, int>> moves = default_moves();

  static std::vector<std::pair<int, int>> default_moves() {
    return {{4, 1}, {6, 4}, {1, 6}, {12, 5}, {14, 12}, {6, 13}, {12, 14}, {15, 13}, {7, 2}, {2, 9}, {10, 8}, {13, 4}};
  }
};

using ModelFamily = std::variant<Train, Dresden, DiningPhilosophers, Generals, PegSolitaireTriangle5>;

inline Error param_error(const std::string& msg) { return input_error("ParamOutOfRange", msg); }

namespace detail {

/// Incremental RawModel construction keyed by state label.
class Builder {
 public:
  std::uint64_t add(const std::string& name) {
    const auto [it, inserted] = ids_.try_emplace(name, raw_.num_states);
    if (inserted) {
      raw_.names.emplace_back(raw_.num_states, name);
      ++raw_.num_states;
    }
    return it->second;
  }
  std::uint64_t id(const std::string& name) const { return ids_.at(name); }
  void edge(const std::string& from, const std::string& to) { raw_.transitions.emplace_back(add(from), add(to)); }
  void bad(const std::string& name) { raw_.bad.push_back(add(name)); }
  void initial(const std::string& name) { raw_.initial = add(name); }
  void run(const std::vector<std::string>& names) {
    std::vector<std::uint64_t> ids;
    for (const auto& n : names) ids.push_back(id(n));
    raw_.counterexample = std::move(ids);
  }
  void group(const std::string& name, const std::vector<std::string>& members) {
    RawGroup g{name, {}};
    for (const auto& m : members) g.members.push_back(id(m));
    raw_.groups.push_back(std::move(g));
  }
  RawModel finish() {
    std::sort(raw_.bad.begin(), raw_.bad.end());
    return std::move(raw_);
  }

 private:
  RawModel raw_;
  std::unordered_map<std::string, std::uint64_t> ids_;
};

inline RawModel generate(const Train& f) {
  if (f.branch_switches < 1 || f.branch_switches > 20) {
    throw param_error("train: branches must be in 1..20, got " + std::to_string(f.branch_switches));
  }
  Builder b;
  std::vector<std::string> side;
  if (f.branch_switches == 1) {
    side.push_back("s3");
  } else {
    for (std::size_t i = 1; i <= f.branch_switches; ++i) side.push_back("t" + std::to_string(i));
  }
  b.initial("s1");
  b.add("s2");
  for (const auto& t : side) b.add(t);
  b.add("goal");
  b.add("crash");
  b.edge("s1", "s2");
  for (const auto& t : side) b.edge("s1", t);
  b.edge("s2", "goal");
  b.edge("s2", "crash");
  for (const auto& t : side) {
    b.edge(t, "goal");
    b.edge(t, "crash");
  }
  b.edge("goal", "goal");
  b.edge("crash", "crash");
  b.bad("crash");
  b.run({"s1", "s2", "crash"});
  if (f.branch_switches > 1) {
    b.group("s1", {"s1"});
    b.group("s2", {"s2"});
    b.group("t", side);
  }
  return b.finish();
}

inline RawModel generate(const Dresden&) {
  Builder b;
  for (const char* s : {"34", "36", "37", "39", "40", "41", "42", "35", "P12", "P13", "other"}) b.add(s);
  b.initial("34");
  const std::vector<std::pair<std::string, std::vector<std::string>>> succ = {
      {"34", {"39", "36"}},   {"39", {"40", "other"}}, {"40", {"41", "other"}}, {"41", {"35", "other"}},
      {"36", {"41", "37"}},   {"37", {"35", "42"}},    {"42", {"P13", "other"}}, {"35", {"P12", "P13"}},
      {"P12", {"P12"}},       {"P13", {"P13"}},        {"other", {"other"}}};
  for (const auto& [from, tos] : succ) {
    for (const auto& to : tos) b.edge(from, to);
  }
  b.bad("P12");
  b.bad("other");
  b.run({"34", "36", "41", "35", "P12"});
  return b.finish();
}

inline RawModel generate(const DiningPhilosophers& f) {
  if (f.n < 2 || f.n > 8) throw param_error("dining: philosophers must be in 2..8, got " + std::to_string(f.n));
  const std::size_t n = f.n;
  enum : char { Think = 't', Left = 'l', Eat = 'e' };
  // State: turn digit followed by one status letter per philosopher.
  auto fork_held = [&](const std::string& st, std::size_t fork) {
    const char owner = st[1 + fork];
    const char prev = st[1 + (fork + n - 1) % n];
    return owner == Left || owner == Eat || prev == Eat;
  };
  auto successors = [&](const std::string& s) {
    std::vector<std::string> out;
    const std::size_t turn = static_cast<std::size_t>(s[0] - '0');
    std::string base = s;
    base[0] = static_cast<char>('0' + (turn + 1) % n);
    const char status = s[1 + turn];
    auto with = [&](char c) {
      std::string t = base;
      t[1 + turn] = c;
      return t;
    };
    if (status == Think) {
      out.push_back(with(Think));
      if (!fork_held(s, turn)) out.push_back(with(Left));
    } else if (status == Left) {
      out.push_back(fork_held(s, (turn + 1) % n) ? with(Left) : with(Eat));
    } else {
      out.push_back(with(Think));
    }
    return out;
  };
  auto deadlocked = [&](const std::string& s) { return s.find_first_not_of(Left, 1) == std::string::npos; };

  Builder b;
  const std::string init = "0" + std::string(n, Think);
  b.initial(init);
  std::map<std::string, std::string> parent;
  std::deque<std::string> queue{init};
  parent[init] = "";
  std::string target;
  while (!queue.empty()) {
    const std::string s = queue.front();
    queue.pop_front();
    if (deadlocked(s)) {
      if (target.empty()) target = s;
      b.edge(s, s);
      continue;
    }
    for (const auto& t : successors(s)) {
      b.edge(s, t);
      if (parent.emplace(t, s).second) queue.push_back(t);
    }
  }
  for (const auto& [s, _] : parent) {
    if (deadlocked(s)) b.bad(s);
  }
  std::vector<std::string> run;
  for (std::string s = target; !s.empty(); s = parent[s]) run.push_back(s);
  std::reverse(run.begin(), run.end());
  b.run(run);
  for (std::size_t t = 0; t < n; ++t) {
    std::vector<std::string> members;
    for (const auto& [s, _] : parent) {
      if (static_cast<std::size_t>(s[0] - '0') == t) members.push_back(s);
    }
    b.group("turn" + std::to_string(t), members);
  }
  return b.finish();
}

inline RawModel generate(const Generals& f) {
  if (f.n < 2 || f.n > 8) throw param_error("generals: n must be in 2..8, got " + std::to_string(f.n));
  Builder b;
  // Node label: "g" followed by the decisions taken so far (A/R).
  std::vector<std::vector<std::string>> levels{{"g"}};
  b.initial("g");
  for (std::size_t d = 0; d < f.n; ++d) {
    std::vector<std::string> next;
    for (const auto& node : levels.back()) {
      for (char c : {'A', 'R'}) {
        const std::string child = node + c;
        b.edge(node, child);
        next.push_back(child);
      }
    }
    levels.push_back(std::move(next));
  }
  for (const auto& leaf : levels.back()) {
    b.edge(leaf, leaf);
    const auto decisions = leaf.substr(1);
    if (decisions.find_first_not_of(decisions[0]) != std::string::npos) b.bad(leaf);
  }
  std::vector<std::string> run{"g"};
  std::string cur = "gA";
  run.push_back(cur);
  for (std::size_t d = 1; d < f.n; ++d) run.push_back(cur += 'R');
  b.run(run);
  for (std::size_t d = 0; d < f.n; ++d) b.group("general" + std::to_string(d + 1), levels[d]);
  b.group("outcome", levels.back());
  return b.finish();
}

namespace peg {

inline constexpr int kRows = 5;
inline constexpr int kHoles = 15;

inline int hole(int r, int c) { return r * (r + 1) / 2 + c + 1; }
inline bool on_board(int r, int c) { return r >= 0 && r < kRows && c >= 0 && c <= r; }
inline std::uint32_t bit(int h) { return std::uint32_t{1} << (h - 1); }

struct Jump {
  int from, over, to;
};

inline const std::vector<Jump>& jumps() {
  static const std::vector<Jump> all = [] {
    std::vector<Jump> out;
    const std::array<std::pair<int, int>, 6> dirs{{{0, 1}, {0, -1}, {1, 0}, {-1, 0}, {1, 1}, {-1, -1}}};
    for (int r = 0; r < kRows; ++r) {
      for (int c = 0; c <= r; ++c) {
        for (const auto& [dr, dc] : dirs) {
          if (on_board(r + 2 * dr, c + 2 * dc)) {
            out.push_back({hole(r, c), hole(r + dr, c + dc), hole(r + 2 * dr, c + 2 * dc)});
          }
        }
      }
    }
    return out;
  }();
  return all;
}

inline std::vector<std::uint32_t> moves_from(std::uint32_t board) {
  std::vector<std::uint32_t> out;
  for (const auto& j : jumps()) {
    if ((board & bit(j.from)) && (board & bit(j.over)) && !(board & bit(j.to))) {
      out.push_back((board & ~bit(j.from) & ~bit(j.over)) | bit(j.to));
    }
  }
  return out;
}

/// 'x' for a peg, '.' for an empty hole, in hole order.
inline std::string label(std::uint32_t board) {
  std::string s(kHoles, '.');
  for (int h = 1; h <= kHoles; ++h) {
    if (board & bit(h)) s[h - 1] = 'x';
  }
  return s;
}

}  // namespace peg

inline RawModel generate(const PegSolitaireTriangle5& f) {
  using namespace peg;
  const std::uint32_t init = ((std::uint32_t{1} << kHoles) - 1) & ~bit(1);

  std::vector<std::uint32_t> run{init};
  for (const auto& [from, to] : f.moves) {
    std::uint32_t board = run.back();
    bool applied = false;
    for (const auto& j : jumps()) {
      if (j.from == from && j.to == to && (board & bit(j.from)) && (board & bit(j.over)) && !(board & bit(j.to))) {
        run.push_back((board & ~bit(j.from) & ~bit(j.over)) | bit(j.to));
        applied = true;
        break;
      }
    }
    if (!applied) {
      throw param_error("peg: move " + std::to_string(from) + "->" + std::to_string(to) + " is illegal after " +
                        std::to_string(run.size() - 1) + " moves");
    }
  }
  if (!moves_from(run.back()).empty() || std::popcount(run.back()) < 2) {
    throw param_error("peg: the played moves must end in a stuck position with at least two pegs");
  }

  Builder b;
  b.initial(label(init));
  std::vector<std::uint32_t> order{init};
  std::unordered_map<std::uint32_t, char> seen{{init, 1}};
  for (std::size_t head = 0; head < order.size(); ++head) {
    const std::uint32_t s = order[head];
    const auto next = moves_from(s);
    if (next.empty()) {
      b.edge(label(s), label(s));
      if (std::popcount(s) >= 2) b.bad(label(s));
      continue;
    }
    for (std::uint32_t t : next) {
      b.edge(label(s), label(t));
      if (seen.emplace(t, 1).second) order.push_back(t);
    }
  }
  std::vector<std::string> names;
  for (auto s : run) names.push_back(label(s));
  b.run(names);
  return b.finish();
}

}  // namespace detail

/// Generated model content; always passes build_model.
inline RawModel generate(const ModelFamily& family) {
  return std::visit([](const auto& f) { return detail::generate(f); }, family);
}

/// Parses "from-to,from-to,..." into peg moves.
inline std::vector<std::pair<int, int>> parse_peg_moves(const std::string& text) {
  std::vector<std::pair<int, int>> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = std::min(text.find(',', pos), text.size());
    const auto item = text.substr(pos, comma - pos);
    const auto dash = item.find('-');
    try {
      if (dash == std::string::npos) throw std::invalid_argument(item);
      out.emplace_back(std::stoi(item.substr(0, dash)), std::stoi(item.substr(dash + 1)));
    } catch (const std::logic_error&) {
      throw param_error("peg: cannot parse move '" + item + "'; expected from-to");
    }
    pos = comma + 1;
  }
  return out;
}

/// Family from a CLI name and key=value parameters.
inline ModelFamily family_from(const std::string& name, const std::map<std::string, std::string>& params) {
  auto number = [&](const std::string& key, std::size_t fallback) -> std::size_t {
    const auto it = params.find(key);
    if (it == params.end()) return fallback;
    try {
      std::size_t used = 0;
      const long long v = std::stoll(it->second, &used);
      if (used != it->second.size() || v < 0) throw std::invalid_argument(it->second);
      return static_cast<std::size_t>(v);
    } catch (const std::logic_error&) {
      throw param_error(name + ": parameter " + key + " must be a nonnegative integer, got '" + it->second + "'");
    }
  };
  auto only = [&](std::initializer_list<const char*> allowed) {
    for (const auto& [k, _] : params) {
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; })) {
        throw param_error(name + ": unknown parameter '" + k + "'");
      }
    }
  };
  if (name == "train") {
    only({"branches"});
    return Train{number("branches", 1)};
  }
  if (name == "dresden") {
    only({});
    return Dresden{};
  }
  if (name == "dining" || name == "dining_philosophers") {
    only({"n"});
    return DiningPhilosophers{number("n", 4)};
  }
  if (name == "generals") {
    only({"n"});
    return Generals{number("n", 4)};
  }
  if (name == "peg" || name == "peg_solitaire") {
    only({"moves"});
    PegSolitaireTriangle5 f;
    if (const auto it = params.find("moves"); it != params.end()) f.moves = parse_peg_moves(it->second);
    return f;
  }
  throw input_error("UnknownFamily", "unknown model family '" + name +
                                         "'; expected train, dresden, dining, generals or peg");
}

}  // namespace backresp::zoo
