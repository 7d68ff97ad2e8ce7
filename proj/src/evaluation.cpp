#include "foodprompt/evaluation.hpp"

#include <algorithm>
#include <map>

#include "foodprompt/error.hpp"

namespace foodprompt {

void validate_prompt_event(const PromptEvent& event) {
  if (event.shown.empty()) throw Error(ErrorCode::InvalidPromptEvent, "prompt event shows no foods");
  const FoodSet shown(event.shown.begin(), event.shown.end());
  for (const auto& food : event.accepted) {
    if (shown.count(food) == 0) {
      throw Error(ErrorCode::InvalidPromptEvent, "accepted food " + food.str() + " was not shown");
    }
  }
}

double precision(const std::vector<PromptEvent>& events) {
  std::size_t shown = 0;
  std::size_t accepted = 0;
  for (const auto& e : events) {
    shown += e.shown.size();
    accepted += e.accepted.size();
  }
  if (shown == 0) throw Error(ErrorCode::NoPromptsShown, "no prompts were shown");
  return static_cast<double>(accepted) / static_cast<double>(shown);
}

AcceptanceStats acceptance_stats(const std::vector<PromptEvent>& events) {
  if (events.empty()) throw Error(ErrorCode::InvalidArgument, "no recalls to summarize");
  std::map<std::string, std::size_t> accepted_per_recall;
  for (const auto& e : events) accepted_per_recall[e.recall_id] += e.accepted.size();

  AcceptanceStats stats;
  stats.recalls = accepted_per_recall.size();
  std::size_t accepted_total = 0;
  for (const auto& [id, accepted] : accepted_per_recall) {
    if (accepted > 0) {
      ++stats.accepting_recalls;
      accepted_total += accepted;
    }
  }
  stats.fraction_with_acceptance = static_cast<double>(stats.accepting_recalls) / static_cast<double>(stats.recalls);
  if (stats.accepting_recalls > 0) {
    stats.mean_accepted_among_accepting =
        static_cast<double>(accepted_total) / static_cast<double>(stats.accepting_recalls);
  }
  return stats;
}

CoverageStats coverage_stats(const std::vector<PromptEvent>& events, const FoodSet& reported_foods) {
  FoodSet shown;
  FoodSet accepted;
  for (const auto& e : events) {
    shown.insert(e.shown.begin(), e.shown.end());
    accepted.insert(e.accepted.begin(), e.accepted.end());
  }
  return {shown.size(), accepted.size(), reported_foods.size()};
}

SummaryStats energy_stats(const std::vector<RecallDay>& recalls, double min_kcal) {
  SummaryStats stats;
  double sum = 0.0;
  for (const auto& r : recalls) {
    if (!r.energy_kcal) {
      ++stats.missing;
    } else if (*r.energy_kcal < min_kcal) {
      ++stats.excluded;
    } else {
      sum += *r.energy_kcal;
      ++stats.included;
    }
  }
  if (stats.included == 0) throw Error(ErrorCode::NoEligibleRecalls, "no recall meets the energy threshold");
  stats.mean = sum / static_cast<double>(stats.included);
  return stats;
}

SummaryStats duration_stats(const std::vector<RecallDay>& recalls, double max_minutes) {
  SummaryStats stats;
  double sum = 0.0;
  for (const auto& r : recalls) {
    if (r.duration_minutes > max_minutes) {
      ++stats.excluded;
    } else {
      sum += r.duration_minutes;
      ++stats.included;
    }
  }
  if (stats.included == 0) throw Error(ErrorCode::NoEligibleRecalls, "no recall meets the duration threshold");
  stats.mean = sum / static_cast<double>(stats.included);
  return stats;
}

namespace {

ArmMetrics metrics_for(Arm arm, const std::vector<RecallDay>& all_recalls, const std::vector<PromptEvent>& all_events) {
  ArmMetrics m;
  m.arm = arm;

  std::vector<RecallDay> recalls;
  std::copy_if(all_recalls.begin(), all_recalls.end(), std::back_inserter(recalls),
               [arm](const RecallDay& r) { return r.arm == arm; });
  std::vector<PromptEvent> events;
  std::copy_if(all_events.begin(), all_events.end(), std::back_inserter(events),
               [arm](const PromptEvent& e) { return e.prompt_type == arm; });

  m.recalls = recalls.size();
  m.prompt_events = events.size();
  for (const auto& e : events) {
    m.foods_shown += e.shown.size();
    m.foods_accepted += e.accepted.size();
  }
  if (m.foods_shown > 0) m.precision = precision(events);
  if (!events.empty()) {
    const auto acc = acceptance_stats(events);
    m.recalls_with_prompts = acc.recalls;
    m.recalls_with_acceptance = acc.accepting_recalls;
    m.fraction_with_acceptance = acc.fraction_with_acceptance;
    m.mean_accepted_among_accepting = acc.mean_accepted_among_accepting;
  }

  FoodSet reported;
  for (const auto& r : recalls) {
    for (const auto& meal : r.meals) reported.insert(meal.food_set().begin(), meal.food_set().end());
  }
  m.coverage = coverage_stats(events, reported);

  // The stats functions throw when nothing qualifies; the counters are still
  // wanted, so recount them here rather than catching.
  for (const auto& r : recalls) {
    if (!r.energy_kcal) {
      ++m.energy_missing;
    } else if (*r.energy_kcal < kMinDailyKcal) {
      ++m.energy_excluded;
    } else {
      ++m.energy_included;
    }
    if (r.duration_minutes > kMaxRecallMinutes) {
      ++m.duration_excluded;
    } else {
      ++m.duration_included;
    }
  }
  if (m.energy_included > 0) m.energy_mean = energy_stats(recalls).mean;
  if (m.duration_included > 0) m.duration_mean = duration_stats(recalls).mean;
  return m;
}

}  // namespace

std::array<ArmMetrics, 2> compute_arm_metrics(const std::vector<RecallDay>& recalls,
                                              const std::vector<PromptEvent>& events) {
  return {metrics_for(Arm::Handcoded, recalls, events), metrics_for(Arm::Generated, recalls, events)};
}

}  // namespace foodprompt
