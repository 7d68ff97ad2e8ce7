#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "foodprompt/types.hpp"

namespace foodprompt {

/// Audit record of one prompt screen: the foods offered and those the
/// respondent accepted.
struct PromptEvent {
  std::string recall_id;
  std::size_t meal_index = 0;
  Arm prompt_type = Arm::Handcoded;
  std::vector<FoodCode> shown;
  std::vector<FoodCode> accepted;

  friend bool operator==(const PromptEvent&, const PromptEvent&) = default;
};

/// Throws InvalidPromptEvent unless shown is non-empty and accepted ⊆ shown.
void validate_prompt_event(const PromptEvent& event);

/// Σ|accepted| / Σ|shown|. Throws NoPromptsShown.
double precision(const std::vector<PromptEvent>& events);

struct AcceptanceStats {
  std::size_t recalls = 0;            // recalls with at least one prompt shown
  std::size_t accepting_recalls = 0;  // ... of which accepted at least one food
  double fraction_with_acceptance = 0.0;
  /// Mean accepted foods over accepting recalls only; absent when none accepted.
  std::optional<double> mean_accepted_among_accepting;
};

/// Groups events by recall id. Recalls that were never shown a prompt do not
/// appear in the event log and so are outside the denominator.
/// Throws InvalidArgument when there are no events.
AcceptanceStats acceptance_stats(const std::vector<PromptEvent>& events);

struct CoverageStats {
  std::size_t unique_shown = 0;
  std::size_t unique_accepted = 0;
  std::size_t unique_reported = 0;
};

CoverageStats coverage_stats(const std::vector<PromptEvent>& events, const FoodSet& reported_foods);

struct SummaryStats {
  double mean = 0.0;
  std::size_t included = 0;
  std::size_t excluded = 0;  // outside the threshold
  std::size_t missing = 0;   // no value supplied (energy only)
};

inline constexpr double kMinDailyKcal = 250.0;
inline constexpr double kMaxRecallMinutes = 60.0;

/// Mean energy over recalls with energy >= min_kcal. Throws NoEligibleRecalls.
SummaryStats energy_stats(const std::vector<RecallDay>& recalls, double min_kcal = kMinDailyKcal);

/// Mean duration over recalls with duration <= max_minutes. Throws NoEligibleRecalls.
SummaryStats duration_stats(const std::vector<RecallDay>& recalls, double max_minutes = kMaxRecallMinutes);

/// Everything reported per study arm. Optional fields are absent when their
/// denominator is empty.
struct ArmMetrics {
  Arm arm = Arm::Handcoded;
  std::size_t recalls = 0;
  std::size_t prompt_events = 0;
  std::size_t foods_shown = 0;
  std::size_t foods_accepted = 0;
  std::optional<double> precision;
  std::size_t recalls_with_prompts = 0;
  std::size_t recalls_with_acceptance = 0;
  std::optional<double> fraction_with_acceptance;
  std::optional<double> mean_accepted_among_accepting;
  CoverageStats coverage;
  std::optional<double> energy_mean;
  std::size_t energy_included = 0;
  std::size_t energy_excluded = 0;
  std::size_t energy_missing = 0;
  std::optional<double> duration_mean;
  std::size_t duration_included = 0;
  std::size_t duration_excluded = 0;

  friend bool operator==(const ArmMetrics&, const ArmMetrics&) = default;
};

/// Per-arm metrics over a recall log and a prompt-event log; index 0 is the
/// hand-coded arm, 1 the generated arm. Events are attributed by their
/// prompt type, recalls by their arm tag.
std::array<ArmMetrics, 2> compute_arm_metrics(const std::vector<RecallDay>& recalls,
                                              const std::vector<PromptEvent>& events);

}  // namespace foodprompt
