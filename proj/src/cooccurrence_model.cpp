#include "foodprompt/cooccurrence_model.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "foodprompt/error.hpp"

namespace foodprompt {

CoOccurrenceModel CoOccurrenceModel::from_counts(std::string corpus_label, std::int64_t total_meals,
                                                 const std::map<FoodCode, std::int64_t>& food_counts,
                                                 const std::vector<PairCount>& pair_counts) {
  CoOccurrenceModel model(std::move(corpus_label));
  if (total_meals < 0) throw Error(ErrorCode::CorruptCounts, "negative meal total");
  model.total_meals_ = total_meals;
  for (const auto& [food, count] : food_counts) {
    if (count <= 0) throw Error(ErrorCode::CorruptCounts, "non-positive count for food " + food.str());
    model.food_counts_.emplace(food, count);
  }
  for (const auto& pair : pair_counts) {
    if (pair.count <= 0) {
      throw Error(ErrorCode::CorruptCounts, "non-positive count for pair " + pair.first.str() + "," + pair.second.str());
    }
    if (pair.first == pair.second) throw Error(ErrorCode::CorruptCounts, "self pair " + pair.first.str());
    if (model.neighbours_.count(pair.first) && model.neighbours_.at(pair.first).count(pair.second)) {
      throw Error(ErrorCode::CorruptCounts, "duplicate pair " + pair.first.str() + "," + pair.second.str());
    }
    model.add_pair(pair.first, pair.second, pair.count);
  }
  model.check_invariants();
  return model;
}

void CoOccurrenceModel::check_invariants() const {
  for (const auto& [food, count] : food_counts_) {
    if (count <= 0) throw Error(ErrorCode::CorruptCounts, "non-positive count for food " + food.str());
    if (count > total_meals_) {
      throw Error(ErrorCode::CorruptCounts, "food " + food.str() + " counted in more meals than the total");
    }
  }
  for (const auto& [a, partners] : neighbours_) {
    const auto fa = food_count(a);
    if (fa == 0) throw Error(ErrorCode::CorruptCounts, "paired food " + a.str() + " has no food count");
    for (const auto& [b, count] : partners) {
      if (count > std::min(fa, food_count(b))) {
        throw Error(ErrorCode::CorruptCounts,
                    "pair " + a.str() + "," + b.str() + " exceeds the count of one of its foods");
      }
    }
  }
}

void CoOccurrenceModel::add_pair(const FoodCode& a, const FoodCode& b, std::int64_t delta) {
  const auto bump = [&](const FoodCode& from, const FoodCode& to) {
    auto& partners = neighbours_[from];
    auto [it, inserted] = partners.try_emplace(to, 0);
    it->second += delta;
    if (it->second == 0) {
      partners.erase(it);
      if (partners.empty()) neighbours_.erase(from);
    }
    return inserted;
  };
  const bool inserted = bump(a, b);
  bump(b, a);
  if (inserted) {
    ++pair_total_;
  } else if (neighbours_.count(a) == 0 || neighbours_.at(a).count(b) == 0) {
    --pair_total_;
  }
}

void CoOccurrenceModel::add_meal(const FoodSet& foods) {
  if (foods.empty()) throw Error(ErrorCode::EmptyMeal, "cannot count a meal without foods");
  ++total_meals_;
  for (auto it = foods.begin(); it != foods.end(); ++it) {
    ++food_counts_[*it];
    for (auto jt = std::next(it); jt != foods.end(); ++jt) add_pair(*it, *jt, 1);
  }
}

void CoOccurrenceModel::remove_meal(const FoodSet& foods) {
  if (foods.empty()) throw Error(ErrorCode::EmptyMeal, "cannot remove a meal without foods");
  if (total_meals_ == 0) throw Error(ErrorCode::CorruptCounts, "no meals left to remove");
  for (auto it = foods.begin(); it != foods.end(); ++it) {
    if (food_count(*it) == 0) throw Error(ErrorCode::CorruptCounts, "meal food " + it->str() + " was never counted");
    for (auto jt = std::next(it); jt != foods.end(); ++jt) {
      if (pair_count(*it, *jt) == 0) {
        throw Error(ErrorCode::CorruptCounts, "meal pair " + it->str() + "," + jt->str() + " was never counted");
      }
    }
  }
  --total_meals_;
  for (auto it = foods.begin(); it != foods.end(); ++it) {
    auto fc = food_counts_.find(*it);
    if (--fc->second == 0) food_counts_.erase(fc);
    for (auto jt = std::next(it); jt != foods.end(); ++jt) add_pair(*it, *jt, -1);
  }
}

void CoOccurrenceModel::merge(const CoOccurrenceModel& other) {
  total_meals_ += other.total_meals_;
  for (const auto& [food, count] : other.food_counts_) food_counts_[food] += count;
  for (const auto& [a, partners] : other.neighbours_) {
    for (const auto& [b, count] : partners) {
      if (a < b) add_pair(a, b, count);
    }
  }
  if (corpus_label_.empty()) corpus_label_ = other.corpus_label_;
}

CoOccurrenceModel CoOccurrenceModel::pruned(std::int64_t min_pair_count) const {
  CoOccurrenceModel out(corpus_label_);
  out.total_meals_ = total_meals_;
  out.food_counts_ = food_counts_;
  out.built_at_ = built_at_;
  for (const auto& [a, partners] : neighbours_) {
    for (const auto& [b, count] : partners) {
      if (a < b && count >= min_pair_count) out.add_pair(a, b, count);
    }
  }
  return out;
}

std::int64_t CoOccurrenceModel::food_count(const FoodCode& food) const {
  const auto it = food_counts_.find(food);
  return it == food_counts_.end() ? 0 : it->second;
}

std::int64_t CoOccurrenceModel::pair_count(const FoodCode& a, const FoodCode& b) const {
  if (a == b) throw Error(ErrorCode::SelfPair, "pair of " + a.str() + " with itself");
  const auto* partners = neighbours(a);
  if (partners == nullptr) return 0;
  const auto it = partners->find(b);
  return it == partners->end() ? 0 : it->second;
}

const NeighbourCounts* CoOccurrenceModel::neighbours(const FoodCode& food) const {
  const auto it = neighbours_.find(food);
  return it == neighbours_.end() ? nullptr : &it->second;
}

std::vector<PairCount> CoOccurrenceModel::pairs() const {
  std::vector<PairCount> out;
  out.reserve(pair_total_);
  for (const auto& [a, partners] : neighbours_) {
    for (auto it = partners.upper_bound(a); it != partners.end(); ++it) out.push_back({a, it->first, it->second});
  }
  return out;
}

CoOccurrenceModel build_model(const Corpus& corpus) {
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "corpus has no meals");
  CoOccurrenceModel model(corpus.source_label());
  for (const auto& meal : corpus.meals()) model.add_meal(meal.food_set());
  return model;
}

CoOccurrenceModel build_model_parallel(const Corpus& corpus, int threads) {
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "corpus has no meals");
  const auto& meals = corpus.meals();
  const auto n = static_cast<std::int64_t>(meals.size());

  int shard_count = 1;
#ifdef _OPENMP
  shard_count = threads > 0 ? threads : omp_get_max_threads();
#else
  (void)threads;
#endif
  shard_count = static_cast<int>(std::clamp<std::int64_t>(shard_count, 1, n));
  std::vector<CoOccurrenceModel> shards(static_cast<std::size_t>(shard_count));

#pragma omp parallel for num_threads(shard_count) schedule(static, 1)
  for (int s = 0; s < shard_count; ++s) {
    const auto begin = n * s / shard_count;
    const auto end = n * (s + 1) / shard_count;
    auto& shard = shards[static_cast<std::size_t>(s)];
    for (auto i = begin; i < end; ++i) shard.add_meal(meals[static_cast<std::size_t>(i)].food_set());
  }

  CoOccurrenceModel model(corpus.source_label());
  for (const auto& shard : shards) model.merge(shard);
  return model;
}

CoOccurrenceModel merge_models(const CoOccurrenceModel& a, const CoOccurrenceModel& b) {
  CoOccurrenceModel out = a;
  out.merge(b);
  return out;
}

}  // namespace foodprompt
