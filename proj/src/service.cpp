#include "foodprompt/service.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "foodprompt/error.hpp"
#include "foodprompt/persistence.hpp"

namespace foodprompt {

// ---- ArmPolicy ----

ArmPolicy ArmPolicy::parse(const std::string& text) {
  if (text == "alternate") return alternate();
  if (text == "random") return random();
  if (text.rfind("fixed:", 0) == 0) {
    if (const auto arm = parse_arm(text.substr(6))) return fixed(*arm);
  }
  throw Error(ErrorCode::InvalidArgument,
              "arm policy must be alternate, random, fixed:handcoded or fixed:generated, got '" + text + "'");
}

std::string ArmPolicy::describe() const {
  switch (kind_) {
    case Kind::Fixed: return "fixed:" + std::string(to_string(fixed_));
    case Kind::Alternate: return "alternate";
    case Kind::Random: return "random";
  }
  return "";
}

// ---- LogStore ----

LogStore::LogStore(std::string directory) : directory_(std::move(directory)) {
  std::error_code ec;
  std::filesystem::create_directories(directory_, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create log directory " + directory_ + ": " + ec.message());
}

std::string LogStore::recall_log_path() const { return (std::filesystem::path(directory_) / "recalls.jsonl").string(); }

std::string LogStore::event_log_path() const {
  return (std::filesystem::path(directory_) / "prompt_events.jsonl").string();
}

void LogStore::append(const RecallDay& recall, const std::vector<PromptEvent>& events) {
  std::lock_guard lock(mutex_);
  {
    std::ofstream out(event_log_path(), std::ios::app | std::ios::binary);
    for (const auto& e : events) write_prompt_event(out, e);
    if (!out.flush()) throw Error(ErrorCode::IoError, "failed appending to " + event_log_path());
  }
  std::ofstream out(recall_log_path(), std::ios::app | std::ios::binary);
  write_recall(out, recall);
  if (!out.flush()) throw Error(ErrorCode::IoError, "failed appending to " + recall_log_path());
}

std::vector<RecallDay> LogStore::recalls() const {
  std::lock_guard lock(mutex_);
  if (!std::filesystem::exists(recall_log_path())) return {};
  return load_recall_log_file(recall_log_path());
}

std::vector<PromptEvent> LogStore::prompt_events() const {
  std::lock_guard lock(mutex_);
  if (!std::filesystem::exists(event_log_path())) return {};
  return load_prompt_events_file(event_log_path());
}

// ---- sessions ----

namespace {

struct MealDraft {
  std::string name;
  std::vector<FoodCode> entries;
  FoodSet foods;
  bool finished = false;
  std::set<std::pair<FoodCode, FoodCode>> fired_rules;

  void append(const FoodCode& food) {
    entries.push_back(food);
    foods.insert(food);
  }
};

struct EventState {
  PromptEvent event;
  bool answered = false;
  int chain_depth = 0;  // 0 for generated prompts
};

}  // namespace

struct SurveyService::Session {
  std::mutex mutex;
  std::string id;
  Arm arm = Arm::Handcoded;
  Timestamp started_at{};
  Timestamp last_active{};
  bool closed = false;
  std::vector<MealDraft> meals;
  std::vector<EventState> events;

  MealDraft& meal(std::size_t index) {
    if (index >= meals.size()) {
      throw Error(ErrorCode::UnknownMeal, "session " + id + " has no meal " + std::to_string(index));
    }
    return meals[index];
  }

  void ensure_open() const {
    if (closed) throw Error(ErrorCode::SessionClosed, "session " + id + " is closed");
  }
};

ImmediatePrompts SurveyService::raise_handcoded(Session& s, const RuleSet& rules, std::size_t meal_index,
                                 const std::vector<FoodCode>& triggers, int depth) {
  ImmediatePrompts out;
  if (s.arm != Arm::Handcoded || depth > kMaxPromptChainDepth) return out;
  auto& meal = s.meal(meal_index);
  FoodSet offered;
  for (const auto& trigger : triggers) {
    for (const auto& rule : prompts_for(rules, trigger, meal.foods)) {
      if (!meal.fired_rules.emplace(rule.antecedent, rule.consequent).second) continue;
      if (!offered.insert(rule.consequent).second) continue;
      out.prompts.push_back({rule.rule_id, rule.consequent, rule.prompt_text});
    }
  }
  if (out.prompts.empty()) return out;

  PromptEvent event;
  event.recall_id = s.id;
  event.meal_index = meal_index;
  event.prompt_type = Arm::Handcoded;
  for (const auto& p : out.prompts) event.shown.push_back(p.food);
  out.event_id = s.events.size();
  s.events.push_back({std::move(event), false, depth});
  return out;
}

SurveyService::SurveyService(ServiceConfig config)
    : config_(std::move(config)), logs_(config_.log_directory), model_(config_.model), rng_(config_.seed) {
  if (!config_.clock) {
    config_.clock = [] { return std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now()); };
  }
  if (config_.prompt_limit == 0) throw Error(ErrorCode::InvalidArgument, "prompt limit must be at least 1");
}

SurveyService::~SurveyService() = default;

Timestamp SurveyService::now() const { return config_.clock(); }

std::shared_ptr<const CoOccurrenceModel> SurveyService::model_snapshot() const {
  std::lock_guard lock(model_mutex_);
  return model_;
}

void SurveyService::swap_model(std::shared_ptr<const CoOccurrenceModel> model) {
  std::lock_guard lock(model_mutex_);
  model_ = std::move(model);
}

bool SurveyService::has_model() const { return model_snapshot() != nullptr; }

bool SurveyService::has_rules() const { return config_.rules != nullptr; }

std::size_t SurveyService::active_sessions() const {
  std::lock_guard lock(sessions_mutex_);
  return sessions_.size();
}

void SurveyService::expire_idle(Timestamp at) {
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    std::lock_guard session_lock(it->second->mutex);
    if (at - it->second->last_active > config_.session_ttl) {
      it = sessions_.erase(it);
    } else {
      ++it;
    }
  }
}

SessionInfo SurveyService::create_session() {
  const auto at = now();
  std::lock_guard lock(sessions_mutex_);
  expire_idle(at);

  Arm arm = config_.policy.fixed_arm();
  switch (config_.policy.kind()) {
    case ArmPolicy::Kind::Fixed: break;
    case ArmPolicy::Kind::Alternate: arm = sessions_created_ % 2 == 0 ? Arm::Handcoded : Arm::Generated; break;
    case ArmPolicy::Kind::Random: arm = std::bernoulli_distribution(0.5)(rng_) ? Arm::Generated : Arm::Handcoded; break;
  }
  ++sessions_created_;

  if (arm == Arm::Generated && !has_model()) {
    throw Error(ErrorCode::ArmUnavailable, "generated arm assigned but no model is loaded");
  }
  if (arm == Arm::Handcoded && !has_rules()) {
    throw Error(ErrorCode::ArmUnavailable, "hand-coded arm assigned but no rule set is loaded");
  }

  auto session = std::make_shared<Session>();
  char suffix[17];
  std::snprintf(suffix, sizeof suffix, "%016llx", static_cast<unsigned long long>(rng_()));
  session->id = "S" + std::to_string(sessions_created_) + "-" + suffix;
  session->arm = arm;
  session->started_at = at;
  session->last_active = at;
  sessions_.emplace(session->id, session);
  return {session->id, arm};
}

std::shared_ptr<SurveyService::Session> SurveyService::find_session(const std::string& session_id) {
  const auto at = now();
  std::lock_guard lock(sessions_mutex_);
  expire_idle(at);
  const auto it = sessions_.find(session_id);
  if (it == sessions_.end()) throw Error(ErrorCode::UnknownSession, "no session " + session_id);
  return it->second;
}

std::size_t SurveyService::add_meal(const std::string& session_id, const std::string& name) {
  auto session = find_session(session_id);
  std::lock_guard lock(session->mutex);
  session->ensure_open();
  session->last_active = now();
  session->meals.push_back(MealDraft{name, {}, {}, false, {}});
  return session->meals.size() - 1;
}

ImmediatePrompts SurveyService::add_food(const std::string& session_id, std::size_t meal_index, const FoodCode& food) {
  auto session = find_session(session_id);
  std::lock_guard lock(session->mutex);
  session->ensure_open();
  session->last_active = now();
  auto& meal = session->meal(meal_index);
  if (meal.finished) throw Error(ErrorCode::MealFinished, "meal " + std::to_string(meal_index) + " is finished");
  meal.append(food);
  if (session->arm != Arm::Handcoded) return {};
  return raise_handcoded(*session, *config_.rules, meal_index, {food}, 1);
}

GeneratedPrompts SurveyService::finish_meal(const std::string& session_id, std::size_t meal_index) {
  auto session = find_session(session_id);
  std::lock_guard lock(session->mutex);
  session->ensure_open();
  session->last_active = now();
  auto& meal = session->meal(meal_index);
  if (meal.finished) throw Error(ErrorCode::MealFinished, "meal " + std::to_string(meal_index) + " is finished");
  if (meal.foods.empty()) throw Error(ErrorCode::EmptyMeal, "meal " + std::to_string(meal_index) + " has no foods");
  meal.finished = true;
  if (session->arm != Arm::Generated) return {};

  const auto model = model_snapshot();
  if (!model) throw Error(ErrorCode::ArmUnavailable, "no model is loaded");
  GeneratedPrompts out;
  out.prompts = recommend(*model, meal.foods, RecommendOptions{config_.prompt_limit, 1});
  if (out.prompts.empty()) return out;

  PromptEvent event;
  event.recall_id = session->id;
  event.meal_index = meal_index;
  event.prompt_type = Arm::Generated;
  for (const auto& r : out.prompts) event.shown.push_back(r.food);
  out.event_id = session->events.size();
  session->events.push_back({std::move(event), false, 0});
  return out;
}

AcceptResult SurveyService::accept_prompts(const std::string& session_id, std::size_t event_id,
                                           const std::vector<FoodCode>& accepted) {
  auto session = find_session(session_id);
  std::lock_guard lock(session->mutex);
  session->ensure_open();
  session->last_active = now();
  if (event_id >= session->events.size()) {
    throw Error(ErrorCode::UnknownEvent, "session " + session_id + " has no prompt event " + std::to_string(event_id));
  }
  auto& state = session->events[event_id];
  if (state.answered) throw Error(ErrorCode::EventAnswered, "prompt event " + std::to_string(event_id) + " already answered");

  const FoodSet shown(state.event.shown.begin(), state.event.shown.end());
  std::vector<FoodCode> unique_accepted;
  FoodSet seen;
  for (const auto& food : accepted) {
    if (shown.count(food) == 0) throw Error(ErrorCode::NotShown, "food " + food.str() + " was not prompted");
    if (seen.insert(food).second) unique_accepted.push_back(food);
  }

  state.answered = true;
  state.event.accepted = unique_accepted;
  const auto meal_index = state.event.meal_index;
  const auto depth = state.chain_depth;
  const auto prompt_type = state.event.prompt_type;
  auto& meal = session->meal(meal_index);
  for (const auto& food : unique_accepted) meal.append(food);

  AcceptResult result{meal_index, {}, {}};
  if (prompt_type == Arm::Handcoded && !unique_accepted.empty()) {
    result.follow_up = raise_handcoded(*session, *config_.rules, meal_index, unique_accepted, depth + 1);
  }
  result.meal_foods = session->meal(meal_index).entries;
  return result;
}

RecallDay SurveyService::submit_recall(const std::string& session_id, const SubmitRequest& request) {
  auto session = find_session(session_id);
  std::lock_guard lock(session->mutex);
  session->ensure_open();
  session->last_active = now();

  RawRecall raw;
  raw.recall_id = session->id;
  raw.respondent_id = request.respondent_id.empty() ? session->id : request.respondent_id;
  raw.submitted_at = now();
  raw.duration_minutes = request.duration_minutes;
  raw.device = request.device;
  raw.energy_kcal = request.energy_kcal;
  raw.arm = session->arm;
  // Empty meals are dropped, so prompt events are renumbered to the kept meals.
  std::vector<std::size_t> kept_index(session->meals.size(), 0);
  for (std::size_t i = 0; i < session->meals.size(); ++i) {
    const auto& meal = session->meals[i];
    if (meal.entries.empty()) continue;
    kept_index[i] = raw.meals.size();
    RawMeal rm{meal.name, {}};
    for (const auto& food : meal.entries) rm.foods.push_back(food.str());
    raw.meals.push_back(std::move(rm));
  }
  const auto recall = validate_recall(raw);

  std::vector<PromptEvent> events;
  events.reserve(session->events.size());
  for (const auto& e : session->events) {
    events.push_back(e.event);
    events.back().meal_index = kept_index[e.event.meal_index];
  }
  logs_.append(recall, events);
  session->closed = true;
  return recall;
}

std::array<ArmMetrics, 2> SurveyService::metrics() const {
  return compute_arm_metrics(logs_.recalls(), logs_.prompt_events());
}

std::vector<FoodEntry> SurveyService::search_foods(const std::string& query) const {
  if (!config_.foods) return {};
  return config_.foods->search(query);
}

std::optional<std::string> SurveyService::display_name(const FoodCode& food) const {
  if (!config_.foods) return std::nullopt;
  return config_.foods->display_name(food);
}

}  // namespace foodprompt
