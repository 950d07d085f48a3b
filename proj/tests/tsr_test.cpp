#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "random_systems.hpp"

using namespace backresp;
using namespace backresp::testing;

namespace {

const char* kTrainTsr = R"(ts 1
# three-switch railway
states 5
name 0 s1
name 1 s2
name 2 s3
name 3 goal
name 4 crash
initial 0
bad 4
trans 0 1
trans 0 2
trans 1 3
trans 1 4
trans 2 3
trans 2 4
trans 3 3
trans 4 4
counterexample 0 1 4
)";

std::string syntax_error(std::string_view text) {
  try {
    parse_tsr(text);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "SyntaxError");
    return e.what();
  }
  return "";
}

std::string canonical(const RawModel& raw) { return emit_tsr(to_raw(build_model(raw))); }

}  // namespace

TEST(Tsr, ParsesTheTrainSystem) {
  const auto m = build_model(parse_tsr(kTrainTsr));
  EXPECT_EQ(m.system.num_states(), 5u);
  ASSERT_TRUE(m.counterexample.has_value());
  EXPECT_EQ(m.counterexample->length(), 3u);
  EXPECT_EQ(m.system.name(4), "crash");
  EXPECT_EQ(emit_tsr(parse_tsr(kTrainTsr)), emit_tsr(zoo::generate(zoo::Train{1})));
}

TEST(Tsr, CounterexampleIsOptional) {
  std::string text = kTrainTsr;
  text.erase(text.find("counterexample"));
  const auto m = build_model(parse_tsr(text));
  EXPECT_FALSE(m.counterexample.has_value());
  EXPECT_THROW(m.require_counterexample(), Error);
}

TEST(Tsr, NamesKeepInnerSpaces) {
  const auto raw = parse_tsr("ts 1\nstates 1\nname 0 platform  12 \ninitial 0\ntrans 0 0\n");
  ASSERT_EQ(raw.names.size(), 1u);
  EXPECT_EQ(raw.names[0].second, "platform  12");
}

TEST(Tsr, BadLinesAreUnited) {
  const auto raw = parse_tsr("ts 1\nstates 3\ninitial 0\nbad 2 1\nbad 1\ntrans 0 0\n");
  EXPECT_EQ(raw.bad, (std::vector<std::uint64_t>{1, 2}));
}

TEST(Tsr, SyntaxErrorsCarryLineNumbers) {
  EXPECT_NE(syntax_error("states 3\n").find("line 1"), std::string::npos);
  EXPECT_NE(syntax_error("ts 1\ninitial 0\nstates 2\n").find("line 2"), std::string::npos);
  EXPECT_NE(syntax_error("ts 1\nstates 2\ninitial 0\ntrans 0 x\n").find("line 4"), std::string::npos);
  EXPECT_NE(syntax_error("ts 1\nstates 2\ninitial 0\nfrobnicate\n").find("unknown directive"), std::string::npos);
  EXPECT_NE(syntax_error("ts 1\nstates 2\nstates 2\n").find("twice"), std::string::npos);
  EXPECT_NE(syntax_error("ts 1\nstates 2\n").find("missing 'initial'"), std::string::npos);
  EXPECT_NE(syntax_error("ts 2\n").find("version"), std::string::npos);
  EXPECT_NE(syntax_error("ts 1\nstates 2\ninitial 0\ngroup g 0\ngroup g 1\n").find("twice"), std::string::npos);
  EXPECT_NE(syntax_error("ts 1\nstates 2\ninitial 0\ncounterexample 0\ncounterexample 0\n").find("twice"),
            std::string::npos);
}

TEST(Tsr, SemanticErrorsAreLeftToValidation) {
  const auto raw = parse_tsr("ts 1\nstates 2\ninitial 0\ntrans 0 7\n");
  EXPECT_FALSE(validate_system(raw).ok());
}

TEST(Tsr, PartialGroupsBecomeSingletons) {
  std::string text = kTrainTsr;
  text += "group switches 1 2\n";
  const auto m = build_model(parse_tsr(text));
  ASSERT_EQ(m.grouping.size(), 4u);
  EXPECT_EQ(m.grouping[0].name, "switches");
  EXPECT_EQ(m.grouping[1].name, "s1");
}

TEST(Tsr, RoundTripIsAFixpointOnZooModels) {
  for (const zoo::ModelFamily& f : std::vector<zoo::ModelFamily>{
           zoo::Train{1}, zoo::Train{5}, zoo::Dresden{}, zoo::DiningPhilosophers{3}, zoo::Generals{3}}) {
    const auto once = canonical(zoo::generate(f));
    EXPECT_EQ(canonical(parse_tsr(once)), once);
    EXPECT_EQ(emit_tsr(parse_tsr(once)), once);
  }
}

TEST(Tsr, RoundTripIsAFixpointOnRandomModels) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    auto raw = random_model(rng, {2, 10, 3, 0.3});
    if (i % 3 == 0) raw.groups.push_back({"g", {raw.num_states - 1}});
    if (i % 4 == 0) raw.names.emplace_back(0, "start state");
    const auto once = canonical(raw);
    EXPECT_EQ(canonical(parse_tsr(once)), once);
  }
}

TEST(Tsr, EmitRejectsUnwritableNames) {
  auto raw = zoo::generate(zoo::Train{1});
  raw.names[0].second = "a#b";
  EXPECT_THROW(emit_tsr(raw), Error);
  raw = zoo::generate(zoo::Train{5});
  raw.groups[0].name = "two words";
  EXPECT_THROW(emit_tsr(raw), Error);
}

TEST(JsonModel, MirrorsTsr) {
  const auto raw = zoo::generate(zoo::Train{5});
  const auto text = emit_json_model(raw);
  EXPECT_EQ(text.back(), '\n');
  EXPECT_EQ(emit_tsr(parse_json_model(text)), emit_tsr(raw));
  EXPECT_EQ(emit_tsr(parse_model_text(text)), emit_tsr(raw));
  EXPECT_EQ(emit_tsr(parse_model_text(emit_tsr(raw))), emit_tsr(raw));
}

TEST(JsonModel, RejectsMalformedDocuments) {
  EXPECT_THROW(parse_json_model("{"), Error);
  EXPECT_THROW(parse_json_model(R"({"states": "three"})"), Error);
}
