#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "foodprompt/types.hpp"

namespace foodprompt {

/// Unordered food pair, stored with the lexicographically smaller code first.
struct PairCount {
  FoodCode first;
  FoodCode second;
  std::int64_t count;

  friend bool operator==(const PairCount&, const PairCount&) = default;
};

using NeighbourCounts = std::map<FoodCode, std::int64_t>;

/// Meal-level co-occurrence counts over a corpus: how many meals contain each
/// food, and how many contain each unordered pair of distinct foods.
///
/// Pair counts are held as a symmetric adjacency map so that a query can walk
/// every partner of a reported food directly; pairs() yields the canonical
/// (smaller code first) view. Entries whose count reaches zero are erased, so
/// every stored count is positive.
class CoOccurrenceModel {
 public:
  CoOccurrenceModel() = default;
  explicit CoOccurrenceModel(std::string corpus_label) : corpus_label_(std::move(corpus_label)) {}

  /// Builds a model from explicit counts, checking every invariant.
  /// Throws CorruptCounts on violation.
  static CoOccurrenceModel from_counts(std::string corpus_label, std::int64_t total_meals,
                                       const std::map<FoodCode, std::int64_t>& food_counts,
                                       const std::vector<PairCount>& pair_counts);

  void add_meal(const FoodSet& foods);
  /// Inverse of add_meal. Throws CorruptCounts if the meal was never counted.
  void remove_meal(const FoodSet& foods);
  void merge(const CoOccurrenceModel& other);

  /// Copy without pairs observed fewer than `min_pair_count` times. Food and
  /// meal totals are unchanged.
  CoOccurrenceModel pruned(std::int64_t min_pair_count) const;

  std::int64_t total_meals() const noexcept { return total_meals_; }
  std::int64_t food_count(const FoodCode& food) const;
  /// Throws SelfPair when a == b.
  std::int64_t pair_count(const FoodCode& a, const FoodCode& b) const;
  /// Partners of `food` with positive pair counts, or nullptr.
  const NeighbourCounts* neighbours(const FoodCode& food) const;

  const std::map<FoodCode, std::int64_t>& food_counts() const noexcept { return food_counts_; }
  std::vector<PairCount> pairs() const;
  std::size_t pair_total() const noexcept { return pair_total_; }
  std::size_t food_total() const noexcept { return food_counts_.size(); }

  const std::string& corpus_label() const noexcept { return corpus_label_; }
  void set_corpus_label(std::string label) { corpus_label_ = std::move(label); }

  /// In-memory only; not part of equality and not persisted.
  std::optional<Timestamp> built_at() const noexcept { return built_at_; }
  void set_built_at(Timestamp ts) { built_at_ = ts; }

  /// Throws CorruptCounts describing the first violated invariant.
  void check_invariants() const;

  friend bool operator==(const CoOccurrenceModel& a, const CoOccurrenceModel& b) {
    return a.total_meals_ == b.total_meals_ && a.corpus_label_ == b.corpus_label_ &&
           a.food_counts_ == b.food_counts_ && a.neighbours_ == b.neighbours_;
  }

 private:
  void add_pair(const FoodCode& a, const FoodCode& b, std::int64_t delta);

  std::int64_t total_meals_ = 0;
  std::map<FoodCode, std::int64_t> food_counts_;
  std::map<FoodCode, NeighbourCounts> neighbours_;
  std::size_t pair_total_ = 0;
  std::string corpus_label_;
  std::optional<Timestamp> built_at_;
};

/// Serial reference build. Throws EmptyCorpus.
CoOccurrenceModel build_model(const Corpus& corpus);

/// OpenMP build: each thread counts a contiguous shard of meals into its own
/// model and the shards are merged in shard order. `threads` <= 0 uses the
/// OpenMP default. Equal to build_model for every corpus.
CoOccurrenceModel build_model_parallel(const Corpus& corpus, int threads = 0);

/// Element-wise sum. The result keeps a's label unless a is empty.
CoOccurrenceModel merge_models(const CoOccurrenceModel& a, const CoOccurrenceModel& b);

}  // namespace foodprompt
