#include <functional>

#include <gtest/gtest.h>

#include "foodprompt/error.hpp"
#include "foodprompt/types.hpp"

using namespace foodprompt;

namespace {

RawRecall minimal_recall() {
  RawRecall raw;
  raw.recall_id = "R1";
  raw.respondent_id = "P1";
  raw.meals = {{"breakfast", {"toast"}}};
  raw.duration_minutes = 12.5;
  raw.energy_kcal = 1800.0;
  raw.arm = Arm::Generated;
  raw.device = DeviceClass::Mobile;
  return raw;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::ValidationError;
}

}  // namespace

TEST(FoodCode, TrimsButPreservesCase) {
  const FoodCode code("  Toast\t");
  EXPECT_EQ(code.str(), "Toast");
  EXPECT_NE(FoodCode("toast"), FoodCode("Toast"));
  EXPECT_EQ(FoodCode("toast"), FoodCode(" toast "));
}

TEST(FoodCode, RejectsEmptyAndInnerWhitespace) {
  EXPECT_EQ(code_of([] { FoodCode("   "); }), ErrorCode::EmptyFoodCode);
  EXPECT_EQ(code_of([] { FoodCode(""); }), ErrorCode::EmptyFoodCode);
  EXPECT_EQ(code_of([] { FoodCode("white bread"); }), ErrorCode::InvalidFoodCode);
}

TEST(Meal, FoodSetDeduplicates) {
  const Meal meal("lunch", {FoodCode("toast"), FoodCode("toast"), FoodCode("butter")});
  EXPECT_EQ(meal.entries().size(), 3u);
  EXPECT_EQ(meal.food_set(), (FoodSet{FoodCode("butter"), FoodCode("toast")}));
}

TEST(Meal, FoodSetIgnoresOrderAndRepetition) {
  const Meal a("", {FoodCode("a"), FoodCode("b"), FoodCode("c")});
  const Meal b("", {FoodCode("c"), FoodCode("a"), FoodCode("b"), FoodCode("a")});
  EXPECT_EQ(a.food_set(), b.food_set());
}

TEST(ValidateRecall, MinimalRecallIsValid) {
  const auto recall = validate_recall(minimal_recall());
  ASSERT_EQ(recall.meals.size(), 1u);
  EXPECT_EQ(recall.meals[0].food_set(), FoodSet{FoodCode("toast")});
  EXPECT_EQ(recall.arm, Arm::Generated);
}

TEST(ValidateRecall, NoMealsIsEmptyRecall) {
  auto raw = minimal_recall();
  raw.meals.clear();
  EXPECT_EQ(code_of([&] { validate_recall(raw); }), ErrorCode::EmptyRecall);
}

TEST(ValidateRecall, ListsEveryViolation) {
  auto raw = minimal_recall();
  raw.meals = {{"breakfast", {"toast", "  "}}};
  raw.duration_minutes = -1.0;
  raw.energy_kcal = -5.0;
  try {
    validate_recall(raw);
    FAIL() << "expected validation failure";
  } catch (const Error& e) {
    ASSERT_EQ(e.issues().size(), 3u);
    EXPECT_EQ(e.issues()[0].code, ErrorCode::EmptyFoodCode);
    EXPECT_EQ(e.issues()[1].code, ErrorCode::NegativeDuration);
    EXPECT_EQ(e.issues()[2].code, ErrorCode::NegativeEnergy);
  }
}

TEST(ValidateRecall, DuplicateEntriesKeptInOrderButSetDeduplicated) {
  auto raw = minimal_recall();
  raw.meals = {{"breakfast", {"toast", "toast", "butter"}}};
  const auto recall = validate_recall(raw);
  EXPECT_EQ(recall.meals[0].entries().size(), 3u);
  EXPECT_EQ(recall.meals[0].food_set(), (FoodSet{FoodCode("toast"), FoodCode("butter")}));
}

TEST(ValidateRecall, Idempotent) {
  auto raw = minimal_recall();
  raw.meals = {{"breakfast", {" toast", "butter "}}, {"dinner", {"rice"}}};
  raw.energy_kcal.reset();
  const auto once = validate_recall(raw);
  const auto twice = validate_recall(once);
  EXPECT_EQ(once, twice);
}

TEST(Corpus, RejectsMealWithoutFoods) {
  EXPECT_EQ(code_of([] { Corpus({Meal("", {})}, "x"); }), ErrorCode::EmptyMeal);
}

TEST(Corpus, FromRecallsSkipsEmptyMeals) {
  RecallDay r;
  r.meals = {Meal("a", {FoodCode("toast")}), Meal("b", {}), Meal("c", {FoodCode("tea")})};
  const auto corpus = Corpus::from_recalls({r}, "log");
  EXPECT_EQ(corpus.size(), 2u);
}

TEST(Timestamp, FormatsAndParsesUtc) {
  const auto ts = parse_timestamp("2019-07-14T09:30:05Z");
  ASSERT_TRUE(ts.has_value());
  EXPECT_EQ(ts->time_since_epoch().count(), 1563096605);
  EXPECT_EQ(format_timestamp(*ts), "2019-07-14T09:30:05Z");
  EXPECT_FALSE(parse_timestamp("2019-07-14 09:30:05").has_value());
  EXPECT_FALSE(parse_timestamp("2019-13-14T09:30:05Z").has_value());
}

TEST(Enums, RoundTripText) {
  for (const auto arm : {Arm::Handcoded, Arm::Generated}) EXPECT_EQ(parse_arm(to_string(arm)), arm);
  for (const auto d : {DeviceClass::Desktop, DeviceClass::Mobile, DeviceClass::Tablet, DeviceClass::Unknown}) {
    EXPECT_EQ(parse_device_class(to_string(d)), d);
  }
  EXPECT_FALSE(parse_arm("both").has_value());
}
