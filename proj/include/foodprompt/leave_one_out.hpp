#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "foodprompt/cooccurrence_model.hpp"
#include "foodprompt/types.hpp"

namespace foodprompt {

enum class HoldOutMode {
  /// The evaluated meal is removed from the counts before it is scored.
  LeaveMealOut,
  /// Score against the full model; the meal supports its own prediction.
  TrainOnAll,
};

struct LeaveOneOutOptions {
  std::vector<std::size_t> ks{1, 5, 15};
  std::int64_t min_pair_count = 1;
  HoldOutMode mode = HoldOutMode::LeaveMealOut;
  /// When set, only these foods are held out; other foods still act as context.
  std::optional<FoodSet> held_out_targets;
  /// OpenMP thread count for the parallel kernel; <= 0 uses the default.
  int threads = 0;
};

/// Omission simulation result. recall_at_k[k] = hits[k] / cases.
struct EvaluationReport {
  std::vector<std::size_t> ks;
  std::map<std::size_t, std::int64_t> hits;
  std::map<std::size_t, double> recall_at_k;
  std::int64_t cases = 0;
  std::int64_t meals_evaluated = 0;
  std::int64_t min_pair_count = 1;
  HoldOutMode mode = HoldOutMode::LeaveMealOut;
  std::string corpus_label;

  friend bool operator==(const EvaluationReport&, const EvaluationReport&) = default;
};

/// For every meal with at least two foods and every food f in it, rank
/// recommendations for the rest of the meal and record whether f is in the
/// top k. Parallel over meals; the shared model is never mutated.
/// Throws NoEligibleMeals and InvalidArgument (empty or zero ks).
EvaluationReport simulate_leave_one_out(const Corpus& corpus, const LeaveOneOutOptions& options = {});

/// Serial reference: physically removes each meal from a private model copy,
/// queries, and adds it back.
EvaluationReport simulate_leave_one_out_serial(const Corpus& corpus, const LeaveOneOutOptions& options = {});

}  // namespace foodprompt
