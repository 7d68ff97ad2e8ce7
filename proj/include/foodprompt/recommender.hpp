#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "foodprompt/cooccurrence_model.hpp"
#include "foodprompt/types.hpp"

namespace foodprompt {

/// Default length of the end-of-meal prompt list.
inline constexpr std::size_t kDefaultPromptLimit = 15;

struct Score {
  double aggregate_c = 0.0;  // sum of P(candidate | reported food)
  std::int64_t weight_w = 0;  // sum of meal counts of reported foods paired with the candidate
  double score_r = 0.0;       // aggregate_c * weight_w
};

struct Recommendation {
  FoodCode food;
  double score_r;
  double aggregate_c;
  std::int64_t weight_w;
  /// (reported food, pair count) for every reported food that paired with `food`.
  std::vector<std::pair<FoodCode, std::int64_t>> supporting_foods;
};

struct RecommendOptions {
  std::size_t limit = kDefaultPromptLimit;
  /// Pairs seen fewer times than this are treated as absent.
  std::int64_t min_pair_count = 1;
};

/// pairCount{candidate, given} / foodCount(given). Throws UnknownGivenFood when
/// `given` is not in the model and SelfPair when candidate == given.
double conditional_probability(const CoOccurrenceModel& model, const FoodCode& candidate, const FoodCode& given);

/// Throws EmptyReportedSet and CandidateIsReported.
Score score(const CoOccurrenceModel& model, const FoodSet& reported, const FoodCode& candidate,
            std::int64_t min_pair_count = 1);

/// Ranked omitted-food candidates for a meal: R descending, ties by code
/// ascending, at most `options.limit` entries, all with R > 0.
/// Throws EmptyReportedSet and InvalidArgument (limit 0 or min_pair_count < 1).
std::vector<Recommendation> recommend(const CoOccurrenceModel& model, const FoodSet& reported,
                                      const RecommendOptions& options = {});

/// As recommend(), but scored as if `held_out_meal` had never been counted:
/// each food of that meal loses one meal and each of its pairs loses one
/// co-occurrence. The model is not modified, so concurrent callers may share it.
/// `held_out_meal` must have been counted in `model`.
std::vector<Recommendation> recommend_without_meal(const CoOccurrenceModel& model, const FoodSet& reported,
                                                   const FoodSet& held_out_meal,
                                                   const RecommendOptions& options = {});

}  // namespace foodprompt
