#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "random_systems.hpp"

using namespace backresp;
using namespace backresp::testing;

namespace {

std::string error_code(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

bool has_code(const SystemValidation& v, const std::string& code) {
  for (const auto& d : v.diagnostics) {
    if (d.code == code) return true;
  }
  return false;
}

RawModel loop_model() {
  RawModel raw;
  raw.num_states = 1;
  raw.transitions = {{0, 0}};
  return raw;
}

}  // namespace

TEST(ValidateSystem, TrainIsValid) {
  const auto v = validate_system(zoo::generate(zoo::Train{1}));
  ASSERT_TRUE(v.ok());
  EXPECT_EQ(v.system->num_states(), 5u);
  EXPECT_FALSE(v.has_warnings());
}

TEST(ValidateSystem, EmptyBadSetIsOnlyAWarning) {
  const auto v = validate_system(loop_model());
  ASSERT_TRUE(v.ok());
  ASSERT_EQ(v.diagnostics.size(), 1u);
  EXPECT_EQ(v.diagnostics[0].severity, Severity::Warning);
  EXPECT_EQ(v.diagnostics[0].message, "no bad states; all responsibilities are 0");
}

TEST(ValidateSystem, DanglingTransitionIsLocated) {
  RawModel raw;
  raw.num_states = 5;
  raw.bad = {4};
  for (std::uint64_t s = 0; s < 5; ++s) raw.transitions.emplace_back(s, s);
  raw.transitions.emplace_back(0, 7);
  const auto v = validate_system(raw);
  ASSERT_FALSE(v.ok());
  ASSERT_TRUE(has_code(v, "DanglingTransition"));
  bool located = false;
  for (const auto& d : v.diagnostics) located |= d.message.find("(0,7)") != std::string::npos;
  EXPECT_TRUE(located);
}

TEST(ValidateSystem, ReportsEveryViolation) {
  RawModel raw;
  raw.num_states = 3;
  raw.initial = 9;
  raw.bad = {5};
  raw.transitions = {{0, 1}};
  const auto v = validate_system(raw);
  EXPECT_FALSE(v.ok());
  EXPECT_TRUE(has_code(v, "BadInitial"));
  EXPECT_TRUE(has_code(v, "DanglingBadState"));
  EXPECT_TRUE(has_code(v, "NoSuccessor"));
}

TEST(ValidateSystem, SinkCompletionAddsSelfLoops) {
  RawModel raw;
  raw.num_states = 2;
  raw.bad = {1};
  raw.transitions = {{0, 1}};
  EXPECT_FALSE(validate_system(raw).ok());
  const auto v = validate_system(raw, {true});
  ASSERT_TRUE(v.ok());
  EXPECT_TRUE(v.system->has_transition(1, 1));
  EXPECT_TRUE(has_code(v, "SinkCompleted"));
}

TEST(ValidateSystem, SuccessorsAreSortedAndUnique) {
  RawModel raw;
  raw.num_states = 3;
  raw.transitions = {{0, 2}, {0, 1}, {0, 2}, {1, 1}, {2, 0}};
  raw.bad = {1};
  const auto v = validate_system(raw);
  ASSERT_TRUE(v.ok());
  const auto succ = v.system->successors(0);
  ASSERT_EQ(succ.size(), 2u);
  EXPECT_EQ(succ[0], 1u);
  EXPECT_EQ(succ[1], 2u);
  EXPECT_EQ(v.system->num_transitions(), 4u);
}

TEST(ValidateCounterexample, TrainRunIsValid) {
  const auto m = train_model();
  const std::vector<StateId> run{id_of(m, "s1"), id_of(m, "s2"), id_of(m, "crash")};
  const auto ce = validate_counterexample(m.system, run);
  EXPECT_EQ(ce.length(), 3u);
  EXPECT_EQ(ce.position(id_of(m, "s2")), 1);
  EXPECT_EQ(ce.position(id_of(m, "s3")), -1);
  EXPECT_EQ(ce.next(id_of(m, "s1")), id_of(m, "s2"));
  EXPECT_FALSE(ce.next(id_of(m, "crash")).has_value());
}

TEST(ValidateCounterexample, SafeRunIsNotACounterexample) {
  const auto m = train_model();
  const std::vector<StateId> run{id_of(m, "s1"), id_of(m, "s2"), id_of(m, "goal")};
  EXPECT_EQ(error_code([&] { validate_counterexample(m.system, run); }), "LastNotBad");
}

TEST(ValidateCounterexample, RepeatedStateNamesBothPositions) {
  const auto m = train_model();
  const std::vector<StateId> run{id_of(m, "s1"), id_of(m, "s2"), id_of(m, "s1")};
  try {
    validate_counterexample(m.system, run);
    FAIL() << "expected RepeatedState";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "RepeatedState");
    EXPECT_NE(std::string(e.what()).find("RepeatedState(0,2)"), std::string::npos);
  }
}

TEST(ValidateCounterexample, OtherClauses) {
  const auto m = train_model();
  const auto s1 = id_of(m, "s1"), s2 = id_of(m, "s2"), s3 = id_of(m, "s3"), crash = id_of(m, "crash");
  EXPECT_EQ(error_code([&] { validate_counterexample(m.system, std::vector<StateId>{s2, crash}); }),
            "NotFromInitial");
  EXPECT_EQ(error_code([&] { validate_counterexample(m.system, std::vector<StateId>{s1, crash}); }),
            "NotATransition");
  EXPECT_EQ(error_code([&] { validate_counterexample(m.system, std::vector<StateId>{}); }), "EmptyRun");
  EXPECT_EQ(error_code([&] { validate_counterexample(m.system, std::vector<StateId>{s1, s3, 99}); }),
            "UnknownState");
}

TEST(ValidateCounterexample, EarlyBadState) {
  RawModel raw;
  raw.num_states = 3;
  raw.transitions = {{0, 1}, {1, 2}, {2, 2}};
  raw.bad = {1, 2};
  const auto m = build_model(raw);
  EXPECT_EQ(error_code([&] { validate_counterexample(m.system, std::vector<StateId>{0, 1, 2}); }), "EarlyBadState");
}

// Reimplementation of the four definitional clauses.
static bool clauses_hold(const TransitionSystem& ts, const std::vector<StateId>& run) {
  if (run.empty() || run[0] != ts.initial()) return false;
  for (std::size_t i = 0; i + 1 < run.size(); ++i) {
    if (!ts.has_transition(run[i], run[i + 1]) || ts.is_bad(run[i])) return false;
  }
  if (!ts.is_bad(run.back())) return false;
  std::set<StateId> distinct(run.begin(), run.end());
  return distinct.size() == run.size();
}

TEST(ValidateCounterexample, AcceptsExactlyTheDefinitionalClauses) {
  std::mt19937_64 rng(11);
  std::size_t accepted = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const auto model = build_model(random_model(rng, {3, 6, 2, 0.3}));
    const auto& ts = model.system;
    std::uniform_int_distribution<StateId> state(0, static_cast<StateId>(ts.num_states() - 1));
    std::uniform_int_distribution<std::size_t> len(1, ts.num_states() + 1);
    // Random walks from the initial state hit valid runs often enough.
    std::vector<StateId> run{trial % 5 == 0 ? state(rng) : ts.initial()};
    const std::size_t target = len(rng);
    while (run.size() < target) {
      const auto succ = ts.successors(run.back());
      std::uniform_int_distribution<std::size_t> pick(0, succ.size() - 1);
      run.push_back(trial % 7 == 0 ? state(rng) : succ[pick(rng)]);
    }
    bool valid = true;
    try {
      const auto ce = validate_counterexample(ts, run);
      EXPECT_LE(ce.length(), ts.num_states());
    } catch (const Error&) {
      valid = false;
    }
    EXPECT_EQ(valid, clauses_hold(ts, run));
    accepted += valid;
  }
  EXPECT_GT(accepted, 10u);
}

TEST(StateGrouping, PartialGroupsAreCompletedWithSingletons) {
  const auto m = zoo_model(zoo::Train{5});
  ASSERT_EQ(m.grouping.size(), 5u);
  EXPECT_EQ(m.grouping[2].name, "t");
  EXPECT_EQ(m.grouping[2].members.size(), 5u);
  EXPECT_EQ(m.grouping[3].name, "goal");
  EXPECT_EQ(m.grouping[4].name, "crash");
  // Partition: every state in exactly one block.
  std::vector<int> seen(m.system.num_states(), 0);
  for (std::size_t g = 0; g < m.grouping.size(); ++g) {
    for (StateId s : m.grouping[g].members) {
      ++seen[s];
      EXPECT_EQ(m.grouping.group_of(s), g);
    }
  }
  for (int c : seen) EXPECT_EQ(c, 1);
}

TEST(StateGrouping, RejectsMalformedGroups) {
  auto raw = zoo::generate(zoo::Train{1});
  auto with = [&](std::vector<RawGroup> groups) {
    auto r = raw;
    r.groups = std::move(groups);
    return error_code([&] { build_model(r); });
  };
  EXPECT_EQ(with({{"a", {0}}, {"a", {1}}}), "DuplicateGroupName");
  EXPECT_EQ(with({{"a", {}}}), "EmptyGroup");
  EXPECT_EQ(with({{"a", {17}}}), "UnknownGroupState");
  EXPECT_EQ(with({{"a", {0, 1}}, {"b", {1}}}), "OverlappingGroups");
}

TEST(Model, MissingCounterexampleIsReportedOnUse) {
  auto raw = zoo::generate(zoo::Train{1});
  raw.counterexample.reset();
  const auto m = build_model(raw);
  EXPECT_EQ(error_code([&] { m.require_counterexample(); }), "MissingCounterexample");
}

TEST(Coalition, TracksSizeAndMembers) {
  Coalition c(70, {1, 65});
  EXPECT_EQ(c.size(), 2u);
  EXPECT_TRUE(c.contains(65));
  c.insert(65);
  EXPECT_EQ(c.size(), 2u);
  c.erase(1);
  EXPECT_EQ(c.members(), std::vector<std::size_t>{65});
  EXPECT_TRUE(Coalition(70, {65}).subset_of(Coalition::full(70)));
  EXPECT_EQ(Coalition::from_mask(4, 0b1010).members(), (std::vector<std::size_t>{1, 3}));
}
