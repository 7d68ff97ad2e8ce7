#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "foodprompt/error.hpp"
#include "foodprompt/recommender.hpp"
#include "oracle.hpp"

using namespace foodprompt;
using foodprompt::testing::oracle_recommend;
using foodprompt::testing::random_meals;
using foodprompt::testing::to_corpus;
using foodprompt::testing::to_food_set;

namespace {

const FoodCode toast("toast"), butter("butter"), jam("jam"), coffee("coffee"), milk("milk");

CoOccurrenceModel toy_model() {
  return build_model(to_corpus({{"toast", "butter"}, {"toast", "butter", "jam"}, {"toast"}, {"coffee", "milk"}}));
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

TEST(ConditionalProbability, ToyCorpus) {
  const auto model = toy_model();
  EXPECT_DOUBLE_EQ(conditional_probability(model, butter, toast), 2.0 / 3.0);
  EXPECT_EQ(conditional_probability(model, toast, coffee), 0.0);
  EXPECT_EQ(code_of([&] { conditional_probability(model, toast, toast); }), ErrorCode::SelfPair);
  EXPECT_EQ(code_of([&] { conditional_probability(model, toast, FoodCode("tea")); }), ErrorCode::UnknownGivenFood);
}

TEST(Score, SingleReportedFood) {
  const auto s = score(toy_model(), {toast}, butter);
  EXPECT_DOUBLE_EQ(s.aggregate_c, 2.0 / 3.0);
  EXPECT_EQ(s.weight_w, 3);
  EXPECT_DOUBLE_EQ(s.score_r, 2.0);
}

TEST(Score, TwoReportedFoods) {
  const auto s = score(toy_model(), {toast, jam}, butter);
  EXPECT_DOUBLE_EQ(s.aggregate_c, 5.0 / 3.0);
  EXPECT_EQ(s.weight_w, 4);
  EXPECT_NEAR(s.score_r, 20.0 / 3.0, 1e-12);
}

TEST(Score, NoSupportingPairIsZero) {
  const auto s = score(toy_model(), {coffee}, toast);
  EXPECT_EQ(s.aggregate_c, 0.0);
  EXPECT_EQ(s.weight_w, 0);
  EXPECT_EQ(s.score_r, 0.0);
}

TEST(Score, ReportedFoodWithoutPairAddsNoWeight) {
  // coffee never pairs with butter: it contributes to neither C nor W.
  const auto s = score(toy_model(), {toast, coffee}, butter);
  EXPECT_EQ(s.weight_w, 3);
  EXPECT_DOUBLE_EQ(s.score_r, 2.0);
}

TEST(Score, Errors) {
  const auto model = toy_model();
  EXPECT_EQ(code_of([&] { score(model, {toast}, toast); }), ErrorCode::CandidateIsReported);
  EXPECT_EQ(code_of([&] { score(model, {}, toast); }), ErrorCode::EmptyReportedSet);
}

TEST(Recommend, ToastRanksButterThenJam) {
  const auto recs = recommend(toy_model(), {toast});
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].food, butter);
  EXPECT_DOUBLE_EQ(recs[0].score_r, 2.0);
  EXPECT_DOUBLE_EQ(recs[0].aggregate_c, 2.0 / 3.0);
  EXPECT_EQ(recs[0].weight_w, 3);
  EXPECT_EQ(recs[0].supporting_foods, (std::vector<std::pair<FoodCode, std::int64_t>>{{toast, 2}}));
  EXPECT_EQ(recs[1].food, jam);
  EXPECT_DOUBLE_EQ(recs[1].score_r, 1.0);
}

TEST(Recommend, CoffeeGivesMilk) {
  const auto recs = recommend(toy_model(), {coffee});
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].food, milk);
  EXPECT_DOUBLE_EQ(recs[0].score_r, 1.0);
}

TEST(Recommend, EverythingReportedGivesNothing) {
  EXPECT_TRUE(recommend(toy_model(), {toast, butter, jam, coffee, milk}).empty());
}

TEST(Recommend, UnknownFoodGivesNothing) { EXPECT_TRUE(recommend(toy_model(), {FoodCode("tea")}).empty()); }

TEST(Recommend, LimitTruncatesAfterRanking) {
  const auto recs = recommend(toy_model(), {toast}, {1, 1});
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].food, butter);
}

TEST(Recommend, TiesBrokenByCodeAscending) {
  const auto model = build_model(to_corpus({{"x", "b"}, {"x", "a"}, {"x", "c"}}));
  const auto recs = recommend(model, {FoodCode("x")});
  ASSERT_EQ(recs.size(), 3u);
  EXPECT_EQ(recs[0].food.str(), "a");
  EXPECT_EQ(recs[1].food.str(), "b");
  EXPECT_EQ(recs[2].food.str(), "c");
}

TEST(Recommend, Errors) {
  const auto model = toy_model();
  EXPECT_EQ(code_of([&] { recommend(model, {}); }), ErrorCode::EmptyReportedSet);
  EXPECT_EQ(code_of([&] { recommend(model, {toast}, {0, 1}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { recommend(model, {toast}, {15, 0}); }), ErrorCode::InvalidArgument);
}

TEST(Recommend, MinPairCountFiltersRarePairs) {
  const auto recs = recommend(toy_model(), {toast}, {15, 2});
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].food, butter);
}

TEST(RecommendProperty, MatchesBruteForceOracle) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const auto meals = random_meals(rng, 50, 20);
    const auto model = build_model(to_corpus(meals));
    const auto& query_meal = meals[rng() % meals.size()];
    std::set<std::string> reported(query_meal.begin(), query_meal.end());
    const std::int64_t min_pair = trial % 5 == 0 ? 2 : 1;
    const auto limit = 1 + rng() % 20;
    const auto expected = oracle_recommend(meals, reported, limit, min_pair);
    const auto actual = recommend(model, to_food_set(reported), {limit, min_pair});
    ASSERT_EQ(actual.size(), expected.size());
    for (std::size_t i = 0; i < actual.size(); ++i) {
      EXPECT_EQ(actual[i].food.str(), expected[i].food);
      EXPECT_EQ(actual[i].weight_w, expected[i].w);
      EXPECT_NEAR(actual[i].score_r, expected[i].r, 1e-12 * std::max(1.0, expected[i].r));
      ASSERT_EQ(actual[i].supporting_foods.size(), expected[i].support.size());
      for (std::size_t j = 0; j < expected[i].support.size(); ++j) {
        EXPECT_EQ(actual[i].supporting_foods[j].first.str(), expected[i].support[j].first);
        EXPECT_EQ(actual[i].supporting_foods[j].second, expected[i].support[j].second);
      }
    }
  }
}

TEST(RecommendProperty, ScoreInvariantsAndNoLeakage) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const auto meals = random_meals(rng, 40, 15);
    const auto model = build_model(to_corpus(meals));
    const auto& q = meals[rng() % meals.size()];
    const auto reported = to_food_set(std::set<std::string>(q.begin(), q.end()));
    for (const auto& rec : recommend(model, reported, {100, 1})) {
      EXPECT_EQ(reported.count(rec.food), 0u);
      EXPECT_GT(rec.score_r, 0.0);
      EXPECT_FALSE(rec.supporting_foods.empty());
      EXPECT_EQ(rec.score_r, rec.aggregate_c * static_cast<double>(rec.weight_w));
      const auto s = score(model, reported, rec.food);
      EXPECT_EQ(s.score_r, rec.score_r);
      EXPECT_EQ(s.aggregate_c, rec.aggregate_c);
      EXPECT_EQ(s.weight_w, rec.weight_w);
    }
  }
}

TEST(RecommendProperty, InvariantUnderReportedOrder) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const auto meals = random_meals(rng, 30, 12);
    const auto model = build_model(to_corpus(meals));
    auto q = meals[rng() % meals.size()];
    std::vector<FoodCode> forward;
    for (const auto& f : q) forward.emplace_back(f);
    auto shuffled = forward;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    shuffled.push_back(shuffled.front());
    const auto a = recommend(model, make_food_set(forward));
    const auto b = recommend(model, make_food_set(shuffled));
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a[i].food, b[i].food);
      EXPECT_EQ(a[i].score_r, b[i].score_r);
    }
  }
}

TEST(RecommendProperty, AddingPairNeverLowersItsScore) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    auto meals = random_meals(rng, 30, 8);
    const std::string a = "f0" + std::to_string(rng() % 8);
    std::string b = "f0" + std::to_string(rng() % 8);
    if (a == b) b = a == "f00" ? "f01" : "f00";
    const auto before = score(build_model(to_corpus(meals)), {FoodCode(a)}, FoodCode(b)).score_r;
    meals.push_back({a, b});
    const auto after = score(build_model(to_corpus(meals)), {FoodCode(a)}, FoodCode(b)).score_r;
    EXPECT_GE(after, before);
  }
}

TEST(RecommendWithoutMeal, MatchesPhysicallyRemovedMeal) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const auto corpus = to_corpus(random_meals(rng, 40, 12));
    const auto model = build_model(corpus);
    const auto& held = corpus.meals()[rng() % corpus.size()].food_set();
    if (held.size() < 2) continue;
    FoodSet reported(held);
    reported.erase(reported.begin());
    auto removed = model;
    removed.remove_meal(held);
    const auto expected = recommend(removed, reported);
    const auto actual = recommend_without_meal(model, reported, held);
    ASSERT_EQ(actual.size(), expected.size());
    for (std::size_t i = 0; i < actual.size(); ++i) {
      EXPECT_EQ(actual[i].food, expected[i].food);
      EXPECT_EQ(actual[i].score_r, expected[i].score_r);
      EXPECT_EQ(actual[i].weight_w, expected[i].weight_w);
    }
  }
}
