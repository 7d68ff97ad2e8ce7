#include "foodprompt/recommender.hpp"

#include <algorithm>
#include <map>

#include "foodprompt/error.hpp"

namespace foodprompt {

namespace {

void check_options(const FoodSet& reported, const RecommendOptions& options) {
  if (reported.empty()) throw Error(ErrorCode::EmptyReportedSet, "no reported foods");
  if (options.limit == 0) throw Error(ErrorCode::InvalidArgument, "limit must be at least 1");
  if (options.min_pair_count < 1) throw Error(ErrorCode::InvalidArgument, "min pair count must be at least 1");
}

struct Accumulator {
  double aggregate_c = 0.0;
  std::int64_t weight_w = 0;
  std::vector<std::pair<FoodCode, std::int64_t>> support;
};

// Reported foods are visited in FoodSet order, so for any one candidate the
// terms of C and W are summed in the same order as score() sums them.
std::vector<Recommendation> rank(const CoOccurrenceModel& model, const FoodSet& reported,
                                 const FoodSet* held_out, const RecommendOptions& options) {
  check_options(reported, options);
  const auto in_held_out = [&](const FoodCode& f) { return held_out != nullptr && held_out->count(f) != 0; };

  std::map<FoodCode, Accumulator> candidates;
  for (const auto& given : reported) {
    const bool given_held = in_held_out(given);
    const auto given_count = model.food_count(given) - (given_held ? 1 : 0);
    if (given_count <= 0) continue;
    const auto* partners = model.neighbours(given);
    if (partners == nullptr) continue;
    for (const auto& [candidate, stored] : *partners) {
      if (reported.count(candidate) != 0) continue;
      const auto pair = stored - (given_held && in_held_out(candidate) ? 1 : 0);
      if (pair <= 0 || pair < options.min_pair_count) continue;
      auto& acc = candidates[candidate];
      acc.aggregate_c += static_cast<double>(pair) / static_cast<double>(given_count);
      acc.weight_w += given_count;
      acc.support.emplace_back(given, pair);
    }
  }

  std::vector<Recommendation> out;
  out.reserve(candidates.size());
  for (auto& [food, acc] : candidates) {
    out.push_back(Recommendation{food, acc.aggregate_c * static_cast<double>(acc.weight_w), acc.aggregate_c,
                                 acc.weight_w, std::move(acc.support)});
  }
  const auto by_rank = [](const Recommendation& a, const Recommendation& b) {
    if (a.score_r != b.score_r) return a.score_r > b.score_r;
    return a.food < b.food;
  };
  if (out.size() > options.limit) {
    std::partial_sort(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(options.limit), out.end(), by_rank);
    out.erase(out.begin() + static_cast<std::ptrdiff_t>(options.limit), out.end());
  } else {
    std::sort(out.begin(), out.end(), by_rank);
  }
  return out;
}

}  // namespace

double conditional_probability(const CoOccurrenceModel& model, const FoodCode& candidate, const FoodCode& given) {
  if (candidate == given) throw Error(ErrorCode::SelfPair, "conditional probability of a food given itself");
  const auto given_count = model.food_count(given);
  if (given_count <= 0) throw Error(ErrorCode::UnknownGivenFood, "food " + given.str() + " is not in the model");
  return static_cast<double>(model.pair_count(candidate, given)) / static_cast<double>(given_count);
}

Score score(const CoOccurrenceModel& model, const FoodSet& reported, const FoodCode& candidate,
            std::int64_t min_pair_count) {
  if (reported.empty()) throw Error(ErrorCode::EmptyReportedSet, "no reported foods");
  if (reported.count(candidate) != 0) {
    throw Error(ErrorCode::CandidateIsReported, "candidate " + candidate.str() + " is already reported");
  }
  Score s;
  for (const auto& given : reported) {
    const auto given_count = model.food_count(given);
    if (given_count <= 0) continue;
    const auto pair = model.pair_count(candidate, given);
    if (pair <= 0 || pair < min_pair_count) continue;
    s.aggregate_c += static_cast<double>(pair) / static_cast<double>(given_count);
    s.weight_w += given_count;
  }
  s.score_r = s.aggregate_c * static_cast<double>(s.weight_w);
  return s;
}

std::vector<Recommendation> recommend(const CoOccurrenceModel& model, const FoodSet& reported,
                                      const RecommendOptions& options) {
  return rank(model, reported, nullptr, options);
}

std::vector<Recommendation> recommend_without_meal(const CoOccurrenceModel& model, const FoodSet& reported,
                                                   const FoodSet& held_out_meal, const RecommendOptions& options) {
  return rank(model, reported, &held_out_meal, options);
}

}  // namespace foodprompt
