#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "backresp/error.hpp"

namespace backresp {

using StateId = std::uint32_t;

/// Unvalidated model content as produced by a parser or generator. Ids are
/// kept wide so that out-of-range references survive until validation.
struct RawGroup {
  std::string name;
  std::vector<std::uint64_t> members;
};

struct RawModel {
  std::uint64_t num_states = 0;
  std::vector<std::pair<std::uint64_t, std::string>> names;
  std::uint64_t initial = 0;
  std::vector<std::uint64_t> bad;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> transitions;
  std::optional<std::vector<std::uint64_t>> counterexample;
  std::vector<RawGroup> groups;
};

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity;
  std::string code;
  std::string message;
};

struct ValidationOptions {
  /// Give successor-less states a self-loop instead of rejecting them.
  bool complete_sinks = false;
};

/// Finite explicit-state system with sorted, duplicate-free successor lists
/// in compressed row form. Immutable once constructed.
class TransitionSystem {
 public:
  TransitionSystem() = default;

  std::size_t num_states() const noexcept { return names_.size(); }
  std::size_t num_transitions() const noexcept { return succ_.size(); }
  StateId initial() const noexcept { return initial_; }

  bool is_bad(StateId s) const noexcept { return bad_flag_[s] != 0; }
  std::span<const StateId> bad_states() const noexcept { return bad_; }

  std::span<const StateId> successors(StateId s) const noexcept {
    return {succ_.data() + succ_off_[s], succ_.data() + succ_off_[s + 1]};
  }
  std::span<const StateId> predecessors(StateId s) const noexcept {
    return {pred_.data() + pred_off_[s], pred_.data() + pred_off_[s + 1]};
  }
  std::size_t out_degree(StateId s) const noexcept { return succ_off_[s + 1] - succ_off_[s]; }

  bool has_transition(StateId from, StateId to) const noexcept {
    const auto out = successors(from);
    return std::binary_search(out.begin(), out.end(), to);
  }

  const std::string& name(StateId s) const noexcept { return names_[s]; }
  const std::vector<std::string>& names() const noexcept { return names_; }

  /// Looks a state up by its display name.
  std::optional<StateId> find(std::string_view name) const {
    for (StateId s = 0; s < names_.size(); ++s) {
      if (names_[s] == name) return s;
    }
    return std::nullopt;
  }

  /// Builds from already-checked parts; `adjacency` is canonicalized here.
  static TransitionSystem from_parts(std::vector<std::string> names,
                                     std::vector<std::vector<StateId>> adjacency,
                                     StateId initial, std::vector<StateId> bad) {
    TransitionSystem ts;
    const std::size_t n = names.size();
    ts.names_ = std::move(names);
    ts.initial_ = initial;
    ts.bad_flag_.assign(n, 0);
    for (StateId b : bad) ts.bad_flag_[b] = 1;
    for (StateId s = 0; s < n; ++s) {
      if (ts.bad_flag_[s]) ts.bad_.push_back(s);
    }

    ts.succ_off_.assign(n + 1, 0);
    std::vector<std::size_t> in_deg(n, 0);
    for (StateId s = 0; s < n; ++s) {
      auto& out = adjacency[s];
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      ts.succ_off_[s + 1] = ts.succ_off_[s] + out.size();
      for (StateId t : out) ++in_deg[t];
    }
    ts.succ_.reserve(ts.succ_off_[n]);
    for (const auto& out : adjacency) ts.succ_.insert(ts.succ_.end(), out.begin(), out.end());

    ts.pred_off_.assign(n + 1, 0);
    for (StateId s = 0; s < n; ++s) ts.pred_off_[s + 1] = ts.pred_off_[s] + in_deg[s];
    ts.pred_.resize(ts.pred_off_[n]);
    std::vector<std::size_t> fill(ts.pred_off_.begin(), ts.pred_off_.end() - 1);
    for (StateId s = 0; s < n; ++s) {
      for (StateId t : ts.successors(s)) ts.pred_[fill[t]++] = s;
    }
    return ts;
  }

 private:
  std::vector<std::string> names_;
  std::vector<std::size_t> succ_off_;
  std::vector<StateId> succ_;
  std::vector<std::size_t> pred_off_;
  std::vector<StateId> pred_;
  StateId initial_ = 0;
  std::vector<char> bad_flag_;
  std::vector<StateId> bad_;
};

/// A loop-free run from the initial state whose last (and only last) state
/// is bad.
class Counterexample {
 public:
  Counterexample() = default;

  std::span<const StateId> run() const noexcept { return run_; }
  std::size_t length() const noexcept { return run_.size(); }
  StateId operator[](std::size_t i) const noexcept { return run_[i]; }
  StateId last() const noexcept { return run_.back(); }

  bool on_run(StateId s) const noexcept { return position_[s] >= 0; }
  /// Index of `s` in the run, or -1.
  std::int64_t position(StateId s) const noexcept { return position_[s]; }

  /// For ρ_i with i < k, the state ρ_{i+1}; otherwise nullopt.
  std::optional<StateId> next(StateId s) const noexcept {
    const auto p = position_[s];
    if (p < 0 || static_cast<std::size_t>(p) + 1 >= run_.size()) return std::nullopt;
    return run_[p + 1];
  }

 private:
  friend Counterexample validate_counterexample(const TransitionSystem&, std::span<const StateId>);
  std::vector<StateId> run_;
  std::vector<std::int64_t> position_;
};

/// Checks the definitional clauses in a fixed order and throws the first
/// violation: NotFromInitial, RepeatedState, NotATransition, EarlyBadState,
/// LastNotBad.
inline Counterexample validate_counterexample(const TransitionSystem& ts,
                                              std::span<const StateId> run) {
  if (run.empty()) throw input_error("EmptyRun", "counterexample has no states");
  for (std::size_t i = 0; i < run.size(); ++i) {
    if (run[i] >= ts.num_states()) {
      throw input_error("UnknownState", "counterexample position " + std::to_string(i) +
                                            " references state " + std::to_string(run[i]));
    }
  }
  if (run[0] != ts.initial()) {
    throw input_error("NotFromInitial", "counterexample starts at '" + ts.name(run[0]) +
                                            "', initial state is '" + ts.name(ts.initial()) + "'");
  }

  std::vector<std::int64_t> position(ts.num_states(), -1);
  for (std::size_t j = 0; j < run.size(); ++j) {
    if (position[run[j]] >= 0) {
      throw input_error("RepeatedState", "RepeatedState(" + std::to_string(position[run[j]]) + "," +
                                             std::to_string(j) + "): state '" + ts.name(run[j]) +
                                             "' occurs twice");
    }
    position[run[j]] = static_cast<std::int64_t>(j);
  }
  for (std::size_t i = 1; i < run.size(); ++i) {
    if (!ts.has_transition(run[i - 1], run[i])) {
      throw input_error("NotATransition", "NotATransition(" + std::to_string(i) + "): no transition '" +
                                              ts.name(run[i - 1]) + "' -> '" + ts.name(run[i]) + "'");
    }
  }
  for (std::size_t i = 0; i + 1 < run.size(); ++i) {
    if (ts.is_bad(run[i])) {
      throw input_error("EarlyBadState", "EarlyBadState(" + std::to_string(i) + "): '" +
                                             ts.name(run[i]) + "' is bad before the end of the run");
    }
  }
  if (!ts.is_bad(run.back())) {
    throw input_error("LastNotBad", "last counterexample state '" + ts.name(run.back()) + "' is not bad");
  }

  Counterexample ce;
  ce.run_.assign(run.begin(), run.end());
  ce.position_ = std::move(position);
  return ce;
}

/// Partition of the states into named blocks.
class StateGrouping {
 public:
  struct Group {
    std::string name;
    std::vector<StateId> members;
  };

  StateGrouping() = default;

  std::size_t size() const noexcept { return groups_.size(); }
  const Group& operator[](std::size_t g) const noexcept { return groups_[g]; }
  const std::vector<Group>& groups() const noexcept { return groups_; }
  std::size_t group_of(StateId s) const noexcept { return group_of_[s]; }

  /// Every state in its own group, named after the state.
  static StateGrouping singletons(const TransitionSystem& ts) {
    StateGrouping g;
    g.group_of_.resize(ts.num_states());
    for (StateId s = 0; s < ts.num_states(); ++s) {
      g.groups_.push_back({ts.name(s), {s}});
      g.group_of_[s] = s;
    }
    return g;
  }

  /// Declared groups first (in order), then a singleton group for every
  /// state not mentioned, in increasing state order.
  static StateGrouping build(const TransitionSystem& ts, const std::vector<RawGroup>& declared) {
    StateGrouping g;
    const std::size_t unassigned = static_cast<std::size_t>(-1);
    g.group_of_.assign(ts.num_states(), unassigned);
    for (const auto& raw : declared) {
      for (const auto& other : g.groups_) {
        if (other.name == raw.name) {
          throw input_error("DuplicateGroupName", "group '" + raw.name + "' declared twice");
        }
      }
      if (raw.members.empty()) throw input_error("EmptyGroup", "group '" + raw.name + "' has no states");
      Group grp{raw.name, {}};
      for (auto id : raw.members) {
        if (id >= ts.num_states()) {
          throw input_error("UnknownGroupState",
                            "group '" + raw.name + "' references state " + std::to_string(id));
        }
        const auto s = static_cast<StateId>(id);
        if (g.group_of_[s] != unassigned) {
          throw input_error("OverlappingGroups", "state '" + ts.name(s) + "' is in groups '" +
                                                     g.groups_[g.group_of_[s]].name + "' and '" +
                                                     raw.name + "'");
        }
        g.group_of_[s] = g.groups_.size();
        grp.members.push_back(s);
      }
      std::sort(grp.members.begin(), grp.members.end());
      g.groups_.push_back(std::move(grp));
    }
    for (StateId s = 0; s < ts.num_states(); ++s) {
      if (g.group_of_[s] == unassigned) {
        g.group_of_[s] = g.groups_.size();
        g.groups_.push_back({ts.name(s), {s}});
      }
    }
    return g;
  }

 private:
  std::vector<Group> groups_;
  std::vector<std::size_t> group_of_;
};

struct SystemValidation {
  std::optional<TransitionSystem> system;
  std::vector<Diagnostic> diagnostics;

  bool ok() const noexcept { return system.has_value(); }
  bool has_warnings() const noexcept {
    return std::any_of(diagnostics.begin(), diagnostics.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::Warning; });
  }
};

/// Checks every system invariant and reports all violations; on success the
/// system is returned in canonical form.
inline SystemValidation validate_system(const RawModel& raw, const ValidationOptions& options = {}) {
  SystemValidation result;
  auto error = [&](std::string code, std::string msg) {
    result.diagnostics.push_back({Severity::Error, std::move(code), std::move(msg)});
  };
  const std::uint64_t n = raw.num_states;

  if (n == 0) error("NoStates", "system has no states");
  if (n > 0xFFFFFFFEull) error("TooManyStates", "state count exceeds 32-bit ids");

  std::vector<std::string> names(static_cast<std::size_t>(n < 0xFFFFFFFFull ? n : 0));
  for (std::size_t s = 0; s < names.size(); ++s) names[s] = std::to_string(s);
  std::vector<char> named(names.size(), 0);
  for (const auto& [id, label] : raw.names) {
    if (id >= n) {
      error("DanglingName", "name for unknown state " + std::to_string(id));
    } else if (named[id]) {
      error("DuplicateName", "state " + std::to_string(id) + " named twice");
    } else {
      names[id] = label;
      named[id] = 1;
    }
  }

  if (raw.initial >= n) error("BadInitial", "initial state " + std::to_string(raw.initial) + " out of range");

  std::vector<StateId> bad;
  for (auto b : raw.bad) {
    if (b >= n) {
      error("DanglingBadState", "bad state " + std::to_string(b) + " out of range");
    } else {
      bad.push_back(static_cast<StateId>(b));
    }
  }

  std::vector<std::vector<StateId>> adjacency(names.size());
  for (const auto& [from, to] : raw.transitions) {
    if (from >= n || to >= n) {
      error("DanglingTransition",
            "DanglingTransition at entry (" + std::to_string(from) + "," + std::to_string(to) + ")");
      continue;
    }
    adjacency[from].push_back(static_cast<StateId>(to));
  }
  for (StateId s = 0; s < adjacency.size(); ++s) {
    if (!adjacency[s].empty()) continue;
    if (options.complete_sinks) {
      adjacency[s].push_back(s);
      result.diagnostics.push_back(
          {Severity::Warning, "SinkCompleted", "added self-loop to successor-less state '" + names[s] + "'"});
    } else {
      error("NoSuccessor", "state '" + names[s] + "' has no successor (use --complete-sinks)");
    }
  }

  const bool failed = std::any_of(result.diagnostics.begin(), result.diagnostics.end(),
                                  [](const Diagnostic& d) { return d.severity == Severity::Error; });
  if (failed) return result;

  if (bad.empty()) {
    result.diagnostics.push_back(
        {Severity::Warning, "EmptyBadSet", "no bad states; all responsibilities are 0"});
  }
  result.system = TransitionSystem::from_parts(std::move(names), std::move(adjacency),
                                               static_cast<StateId>(raw.initial), std::move(bad));
  return result;
}

/// A validated system together with its optional counterexample and the
/// canonical grouping (all singletons when no groups were declared).
struct Model {
  TransitionSystem system;
  std::optional<Counterexample> counterexample;
  StateGrouping grouping;
  bool declared_groups = false;
  std::vector<Diagnostic> diagnostics;

  const Counterexample& require_counterexample() const {
    if (!counterexample) {
      throw input_error("MissingCounterexample", "model has no counterexample section");
    }
    return *counterexample;
  }
};

/// Runs all validators; throws the first error (system errors are joined).
inline Model build_model(const RawModel& raw, const ValidationOptions& options = {}) {
  auto checked = validate_system(raw, options);
  if (!checked.ok()) {
    std::string msg;
    std::string code;
    for (const auto& d : checked.diagnostics) {
      if (d.severity != Severity::Error) continue;
      if (code.empty()) code = d.code;
      if (!msg.empty()) msg += "; ";
      msg += d.message;
    }
    throw input_error(code, msg);
  }
  Model m;
  m.system = std::move(*checked.system);
  m.diagnostics = std::move(checked.diagnostics);
  if (raw.counterexample) {
    std::vector<StateId> run;
    for (auto id : *raw.counterexample) {
      if (id >= m.system.num_states()) {
        throw input_error("UnknownState", "counterexample references state " + std::to_string(id));
      }
      run.push_back(static_cast<StateId>(id));
    }
    m.counterexample = validate_counterexample(m.system, run);
  }
  m.grouping = StateGrouping::build(m.system, raw.groups);
  m.declared_groups = !raw.groups.empty();
  return m;
}

/// Inverse of build_model, producing canonical raw content.
inline RawModel to_raw(const Model& m) {
  RawModel raw;
  const auto& ts = m.system;
  raw.num_states = ts.num_states();
  for (StateId s = 0; s < ts.num_states(); ++s) {
    if (ts.name(s) != std::to_string(s)) raw.names.emplace_back(s, ts.name(s));
  }
  raw.initial = ts.initial();
  raw.bad.assign(ts.bad_states().begin(), ts.bad_states().end());
  for (StateId s = 0; s < ts.num_states(); ++s) {
    for (StateId t : ts.successors(s)) raw.transitions.emplace_back(s, t);
  }
  if (m.counterexample) {
    raw.counterexample.emplace(m.counterexample->run().begin(), m.counterexample->run().end());
  }
  if (m.declared_groups) {
    for (const auto& g : m.grouping.groups()) {
      if (g.members.size() == 1 && g.name == ts.name(g.members[0])) continue;
      raw.groups.push_back({g.name, {g.members.begin(), g.members.end()}});
    }
  }
  return raw;
}

}  // namespace backresp
