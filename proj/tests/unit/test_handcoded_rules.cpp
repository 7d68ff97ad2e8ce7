#include <sstream>

#include <gtest/gtest.h>

#include "foodprompt/error.hpp"
#include "foodprompt/handcoded_rules.hpp"

using namespace foodprompt;

namespace {

const FoodCode toast("toast"), butter("butter"), jam("jam"), coffee("coffee");

RuleSet parse(const std::string& text) {
  std::istringstream in(text);
  return load_rules(in);
}

Error parse_error(const std::string& text) {
  try {
    parse(text);
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "expected an Error";
  return Error(ErrorCode::ValidationError, "");
}

const char* kToastRules =
    "# id\tantecedent\tconsequent\tprompt\n"
    "R1\ttoast\tbutter\tDid you have butter on your toast?\n"
    "\n"
    "R2\ttoast\tjam\tDid you have jam on your toast?\n";

}  // namespace

TEST(LoadRules, ReadsRecordsInFileOrder) {
  const auto rules = parse(kToastRules);
  ASSERT_EQ(rules.size(), 2u);
  EXPECT_EQ(rules.rules()[0].rule_id, "R1");
  EXPECT_EQ(rules.rules()[0].consequent, butter);
  EXPECT_EQ(rules.rules()[1].prompt_text, "Did you have jam on your toast?");
}

TEST(LoadRules, SelfRuleRejected) {
  const auto e = parse_error("R1\ttoast\ttoast\tMore toast?\n");
  EXPECT_EQ(e.code(), ErrorCode::SelfRule);
  EXPECT_EQ(e.line(), 1u);
}

TEST(LoadRules, DuplicateRuleRejected) {
  const auto e = parse_error("R1\ttoast\tbutter\tButter?\nR9\ttoast\tbutter\tButter again?\n");
  EXPECT_EQ(e.code(), ErrorCode::DuplicateRule);
  EXPECT_EQ(e.line(), 2u);
}

TEST(LoadRules, MalformedLineIsParseError) {
  const auto e = parse_error("# header\nR1\ttoast\tbutter\n");
  EXPECT_EQ(e.code(), ErrorCode::ParseError);
  EXPECT_EQ(e.line(), 2u);
  EXPECT_EQ(parse_error("R1\t \tbutter\tButter?\n").code(), ErrorCode::ParseError);
}

TEST(LoadRules, SaveThenLoadIsIdentity) {
  const auto rules = parse(kToastRules);
  std::ostringstream out;
  save_rules(out, rules);
  EXPECT_EQ(parse(out.str()).rules(), rules.rules());
}

TEST(RuleSet, ConstructorValidates) {
  EXPECT_THROW(RuleSet({{"R1", toast, toast, "?"}}), Error);
  EXPECT_THROW(RuleSet({{"R1", toast, butter, "?"}, {"R2", toast, butter, "?"}}), Error);
}

TEST(PromptsFor, FiresAllMatchingRules) {
  const auto fired = prompts_for(parse(kToastRules), toast, {toast});
  ASSERT_EQ(fired.size(), 2u);
  EXPECT_EQ(fired[0].consequent, butter);
  EXPECT_EQ(fired[1].consequent, jam);
}

TEST(PromptsFor, SuppressesConsequentAlreadyInMeal) {
  const auto fired = prompts_for(parse(kToastRules), toast, {toast, butter});
  ASSERT_EQ(fired.size(), 1u);
  EXPECT_EQ(fired[0].consequent, jam);
}

TEST(PromptsFor, NoMatchingAntecedent) { EXPECT_TRUE(prompts_for(parse(kToastRules), coffee, {coffee}).empty()); }

TEST(PromptsFor, JustReportedMustBeInMeal) { EXPECT_THROW(prompts_for(parse(kToastRules), toast, {coffee}), Error); }

TEST(PromptsFor, PureAndNeverPromptsForMealFoods) {
  const RuleSet rules({{"R1", toast, butter, ""}, {"R2", toast, jam, ""}, {"R3", butter, jam, ""},
                       {"R4", butter, toast, ""}, {"R5", jam, coffee, ""}});
  const std::vector<FoodCode> foods{toast, butter, jam, coffee};
  for (unsigned mask = 1; mask < 16; ++mask) {
    FoodSet meal;
    for (unsigned b = 0; b < 4; ++b) {
      if (mask & (1u << b)) meal.insert(foods[b]);
    }
    for (const auto& just : meal) {
      const auto first = prompts_for(rules, just, meal);
      EXPECT_EQ(first, prompts_for(rules, just, meal));
      for (const auto& r : first) {
        EXPECT_EQ(meal.count(r.consequent), 0u);
        EXPECT_EQ(r.antecedent, just);
      }
    }
  }
}
