#include "foodprompt/leave_one_out.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "foodprompt/error.hpp"
#include "foodprompt/recommender.hpp"

namespace foodprompt {

namespace {

std::vector<std::size_t> normalized_ks(const std::vector<std::size_t>& ks) {
  if (ks.empty()) throw Error(ErrorCode::InvalidArgument, "at least one k is required");
  std::vector<std::size_t> out(ks);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.front() == 0) throw Error(ErrorCode::InvalidArgument, "k must be positive");
  return out;
}

struct MealTally {
  std::vector<std::int64_t> hits;  // parallel to ks
  std::int64_t cases = 0;
};

// One held-out case: a hit for every k at or beyond the food's rank.
void tally(const std::vector<Recommendation>& ranked, const FoodCode& food, const std::vector<std::size_t>& ks,
           MealTally& out) {
  ++out.cases;
  const auto it = std::find_if(ranked.begin(), ranked.end(), [&](const Recommendation& r) { return r.food == food; });
  if (it == ranked.end()) return;
  const auto rank = static_cast<std::size_t>(it - ranked.begin()) + 1;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (rank <= ks[i]) ++out.hits[i];
  }
}

bool is_target(const LeaveOneOutOptions& options, const FoodCode& food) {
  return !options.held_out_targets || options.held_out_targets->count(food) != 0;
}

template <typename Query>
void evaluate_meal(const FoodSet& meal, const LeaveOneOutOptions& options, const std::vector<std::size_t>& ks,
                   Query&& query, MealTally& out) {
  out.hits.assign(ks.size(), 0);
  if (meal.size() < 2) return;
  for (const auto& held_out : meal) {
    if (!is_target(options, held_out)) continue;
    FoodSet reported(meal);
    reported.erase(held_out);
    tally(query(reported), held_out, ks, out);
  }
}

EvaluationReport summarize(const Corpus& corpus, const LeaveOneOutOptions& options, const std::vector<std::size_t>& ks,
                           const std::vector<MealTally>& tallies) {
  EvaluationReport report;
  report.ks = ks;
  report.min_pair_count = options.min_pair_count;
  report.mode = options.mode;
  report.corpus_label = corpus.source_label();
  std::vector<std::int64_t> hits(ks.size(), 0);
  for (const auto& t : tallies) {
    if (t.cases == 0) continue;
    ++report.meals_evaluated;
    report.cases += t.cases;
    for (std::size_t i = 0; i < ks.size(); ++i) hits[i] += t.hits[i];
  }
  if (report.cases == 0) throw Error(ErrorCode::NoEligibleMeals, "no meal with two or more foods to hold out from");
  for (std::size_t i = 0; i < ks.size(); ++i) {
    report.hits[ks[i]] = hits[i];
    report.recall_at_k[ks[i]] = static_cast<double>(hits[i]) / static_cast<double>(report.cases);
  }
  return report;
}

RecommendOptions query_options(const LeaveOneOutOptions& options, const std::vector<std::size_t>& ks) {
  RecommendOptions q;
  q.limit = ks.back();
  q.min_pair_count = options.min_pair_count;
  return q;
}

}  // namespace

EvaluationReport simulate_leave_one_out(const Corpus& corpus, const LeaveOneOutOptions& options) {
  const auto ks = normalized_ks(options.ks);
  const auto model = build_model_parallel(corpus, options.threads);
  const auto query = query_options(options, ks);
  const auto& meals = corpus.meals();
  const auto n = static_cast<std::int64_t>(meals.size());
  std::vector<MealTally> tallies(meals.size());

  int threads = 1;
#ifdef _OPENMP
  threads = options.threads > 0 ? options.threads : omp_get_max_threads();
#endif
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto& meal = meals[static_cast<std::size_t>(i)].food_set();
    auto& out = tallies[static_cast<std::size_t>(i)];
    if (options.mode == HoldOutMode::LeaveMealOut) {
      evaluate_meal(meal, options, ks,
                    [&](const FoodSet& reported) { return recommend_without_meal(model, reported, meal, query); }, out);
    } else {
      evaluate_meal(meal, options, ks, [&](const FoodSet& reported) { return recommend(model, reported, query); },
                    out);
    }
  }
  return summarize(corpus, options, ks, tallies);
}

EvaluationReport simulate_leave_one_out_serial(const Corpus& corpus, const LeaveOneOutOptions& options) {
  const auto ks = normalized_ks(options.ks);
  auto model = build_model(corpus);
  const auto query = query_options(options, ks);
  std::vector<MealTally> tallies(corpus.size());

  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& meal = corpus.meals()[i].food_set();
    const bool hold_out = options.mode == HoldOutMode::LeaveMealOut && meal.size() >= 2;
    if (hold_out) model.remove_meal(meal);
    evaluate_meal(meal, options, ks, [&](const FoodSet& reported) { return recommend(model, reported, query); },
                  tallies[i]);
    if (hold_out) model.add_meal(meal);
  }
  return summarize(corpus, options, ks, tallies);
}

}  // namespace foodprompt
