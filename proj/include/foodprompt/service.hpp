#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "foodprompt/cooccurrence_model.hpp"
#include "foodprompt/evaluation.hpp"
#include "foodprompt/food_list.hpp"
#include "foodprompt/handcoded_rules.hpp"
#include "foodprompt/recommender.hpp"
#include "foodprompt/types.hpp"

namespace foodprompt {

/// Hand-coded prompts raised by accepting earlier hand-coded prompts stop
/// after this many rounds per chain.
inline constexpr int kMaxPromptChainDepth = 5;

/// How new sessions are assigned to a study arm.
class ArmPolicy {
 public:
  enum class Kind { Fixed, Alternate, Random };

  static ArmPolicy fixed(Arm arm) { return ArmPolicy(Kind::Fixed, arm); }
  static ArmPolicy alternate() { return ArmPolicy(Kind::Alternate, Arm::Handcoded); }
  static ArmPolicy random() { return ArmPolicy(Kind::Random, Arm::Handcoded); }
  /// "alternate", "random", "fixed:handcoded" or "fixed:generated".
  /// Throws InvalidArgument.
  static ArmPolicy parse(const std::string& text);

  Kind kind() const noexcept { return kind_; }
  Arm fixed_arm() const noexcept { return fixed_; }
  std::string describe() const;

 private:
  ArmPolicy(Kind kind, Arm fixed) : kind_(kind), fixed_(fixed) {}
  Kind kind_;
  Arm fixed_;
};

/// Append-only recall and prompt-event logs under one directory
/// (recalls.jsonl, prompt_events.jsonl). Appends are serialized and flushed
/// before returning.
class LogStore {
 public:
  explicit LogStore(std::string directory);

  void append(const RecallDay& recall, const std::vector<PromptEvent>& events);
  std::vector<RecallDay> recalls() const;
  std::vector<PromptEvent> prompt_events() const;

  std::string recall_log_path() const;
  std::string event_log_path() const;

 private:
  std::string directory_;
  mutable std::mutex mutex_;
};

struct ServiceConfig {
  std::shared_ptr<const CoOccurrenceModel> model;
  std::shared_ptr<const RuleSet> rules;
  std::shared_ptr<const FoodList> foods;
  ArmPolicy policy = ArmPolicy::alternate();
  std::uint64_t seed = 20190101;
  std::string log_directory = "logs";
  std::chrono::seconds session_ttl = std::chrono::hours(24);
  std::size_t prompt_limit = kDefaultPromptLimit;
  std::function<Timestamp()> clock;
};

struct SessionInfo {
  std::string session_id;
  Arm arm;
};

struct ImmediatePrompt {
  std::string rule_id;
  FoodCode food;
  std::string prompt_text;
};

/// Prompts raised by one service call. `event_id` is absent when nothing was shown.
struct ImmediatePrompts {
  std::optional<std::size_t> event_id;
  std::vector<ImmediatePrompt> prompts;
};

struct GeneratedPrompts {
  std::optional<std::size_t> event_id;
  std::vector<Recommendation> prompts;
};

struct AcceptResult {
  std::size_t meal_index;
  std::vector<FoodCode> meal_foods;
  ImmediatePrompts follow_up;  // hand-coded chain prompts raised by the accepted foods
};

struct SubmitRequest {
  double duration_minutes = 0.0;
  std::optional<double> energy_kcal;
  std::string respondent_id;
  DeviceClass device = DeviceClass::Unknown;
};

/// Transport-independent survey sessions. Every public member is safe to call
/// concurrently; calls on one session are serialized.
class SurveyService {
 public:
  explicit SurveyService(ServiceConfig config);
  ~SurveyService();

  SurveyService(const SurveyService&) = delete;
  SurveyService& operator=(const SurveyService&) = delete;

  /// Throws ArmUnavailable when the assigned arm lacks its model or rules.
  SessionInfo create_session();
  std::size_t add_meal(const std::string& session_id, const std::string& name);
  /// Hand-coded arm: rules fired by `food` (logged as one prompt event).
  /// Generated arm: always empty.
  ImmediatePrompts add_food(const std::string& session_id, std::size_t meal_index, const FoodCode& food);
  /// Generated arm: up to prompt_limit recommendations for the meal, logged as
  /// one prompt event. Hand-coded arm: empty. Each meal finishes once.
  GeneratedPrompts finish_meal(const std::string& session_id, std::size_t meal_index);
  AcceptResult accept_prompts(const std::string& session_id, std::size_t event_id,
                              const std::vector<FoodCode>& accepted);
  /// Persists the recall and its prompt events, then closes the session.
  RecallDay submit_recall(const std::string& session_id, const SubmitRequest& request);

  std::array<ArmMetrics, 2> metrics() const;
  std::vector<FoodEntry> search_foods(const std::string& query) const;
  std::optional<std::string> display_name(const FoodCode& food) const;

  /// Atomically replaces the model used by subsequent finish_meal calls.
  void swap_model(std::shared_ptr<const CoOccurrenceModel> model);
  bool has_model() const;
  bool has_rules() const;
  std::size_t active_sessions() const;
  const LogStore& logs() const noexcept { return logs_; }

 private:
  struct Session;

  static ImmediatePrompts raise_handcoded(Session& session, const RuleSet& rules, std::size_t meal_index,
                                          const std::vector<FoodCode>& triggers, int depth);
  std::shared_ptr<Session> find_session(const std::string& session_id);
  std::shared_ptr<const CoOccurrenceModel> model_snapshot() const;
  Timestamp now() const;
  void expire_idle(Timestamp now);

  ServiceConfig config_;
  LogStore logs_;
  mutable std::mutex model_mutex_;
  std::shared_ptr<const CoOccurrenceModel> model_;
  mutable std::mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t sessions_created_ = 0;
  std::mt19937_64 rng_;
};

}  // namespace foodprompt
