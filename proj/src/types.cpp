#include "foodprompt/types.hpp"

#include <cctype>
#include <cmath>
#include <ctime>
#include <cstdio>
#include <utility>

#include "foodprompt/error.hpp"

namespace foodprompt {

namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

}  // namespace

FoodCode::FoodCode(std::string_view raw) {
  const auto trimmed = trim(raw);
  if (trimmed.empty()) throw Error(ErrorCode::EmptyFoodCode, "food code is empty");
  for (const char c : trimmed) {
    const auto uc = static_cast<unsigned char>(c);
    if (std::isspace(uc) || std::iscntrl(uc)) {
      throw Error(ErrorCode::InvalidFoodCode, "food code '" + std::string(trimmed) + "' contains whitespace");
    }
  }
  code_ = std::string(trimmed);
}

FoodSet make_food_set(const std::vector<FoodCode>& foods) { return FoodSet(foods.begin(), foods.end()); }

Meal::Meal(std::string name, std::vector<FoodCode> entries)
    : name_(std::move(name)), entries_(std::move(entries)), food_set_(make_food_set(entries_)) {}

std::string_view to_string(Arm arm) noexcept {
  return arm == Arm::Handcoded ? "handcoded" : "generated";
}

std::string_view to_string(DeviceClass device) noexcept {
  switch (device) {
    case DeviceClass::Desktop: return "desktop";
    case DeviceClass::Mobile: return "mobile";
    case DeviceClass::Tablet: return "tablet";
    case DeviceClass::Unknown: return "unknown";
  }
  return "unknown";
}

std::optional<Arm> parse_arm(std::string_view text) noexcept {
  if (text == "handcoded") return Arm::Handcoded;
  if (text == "generated") return Arm::Generated;
  return std::nullopt;
}

std::optional<DeviceClass> parse_device_class(std::string_view text) noexcept {
  if (text == "desktop") return DeviceClass::Desktop;
  if (text == "mobile") return DeviceClass::Mobile;
  if (text == "tablet") return DeviceClass::Tablet;
  if (text == "unknown") return DeviceClass::Unknown;
  return std::nullopt;
}

std::string format_timestamp(Timestamp ts) {
  const std::time_t t = ts.time_since_epoch().count();
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                tm.tm_hour, tm.tm_min, tm.tm_sec);
  return buf;
}

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  if (text.size() != 20 || text[4] != '-' || text[7] != '-' || text[10] != 'T' || text[13] != ':' ||
      text[16] != ':' || text[19] != 'Z') {
    return std::nullopt;
  }
  const auto field = [&](std::size_t pos, std::size_t len) -> int {
    int v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
      if (!std::isdigit(static_cast<unsigned char>(text[i]))) return -1;
      v = v * 10 + (text[i] - '0');
    }
    return v;
  };
  std::tm tm{};
  tm.tm_year = field(0, 4) - 1900;
  tm.tm_mon = field(5, 2) - 1;
  tm.tm_mday = field(8, 2);
  tm.tm_hour = field(11, 2);
  tm.tm_min = field(14, 2);
  tm.tm_sec = field(17, 2);
  if (tm.tm_year < -1900 || tm.tm_mon < 0 || tm.tm_mon > 11 || tm.tm_mday < 1 || tm.tm_mday > 31 ||
      tm.tm_hour < 0 || tm.tm_hour > 23 || tm.tm_min < 0 || tm.tm_min > 59 || tm.tm_sec < 0 || tm.tm_sec > 60) {
    return std::nullopt;
  }
  return Timestamp{std::chrono::seconds{timegm(&tm)}};
}

RecallDay validate_recall(const RawRecall& raw) {
  std::vector<Issue> issues;
  RecallDay out;
  out.recall_id = raw.recall_id;
  out.respondent_id = raw.respondent_id;
  out.submitted_at = raw.submitted_at;
  out.duration_minutes = raw.duration_minutes;
  out.device = raw.device;
  out.energy_kcal = raw.energy_kcal;
  out.arm = raw.arm;

  if (raw.meals.empty()) issues.push_back({ErrorCode::EmptyRecall, "recall has no meals"});
  for (std::size_t m = 0; m < raw.meals.size(); ++m) {
    const auto& raw_meal = raw.meals[m];
    std::vector<FoodCode> entries;
    entries.reserve(raw_meal.foods.size());
    for (const auto& food : raw_meal.foods) {
      try {
        entries.emplace_back(food);
      } catch (const Error& e) {
        issues.push_back({e.code(), "meal " + std::to_string(m) + ": " + e.issues().front().message});
      }
    }
    if (raw_meal.foods.empty()) issues.push_back({ErrorCode::EmptyMeal, "meal " + std::to_string(m) + " has no foods"});
    out.meals.emplace_back(raw_meal.name, std::move(entries));
  }
  if (!(raw.duration_minutes >= 0.0) || !std::isfinite(raw.duration_minutes)) {
    issues.push_back({ErrorCode::NegativeDuration, "duration must be a non-negative number of minutes"});
  }
  if (raw.energy_kcal && (!(*raw.energy_kcal >= 0.0) || !std::isfinite(*raw.energy_kcal))) {
    issues.push_back({ErrorCode::NegativeEnergy, "energy must be a non-negative number of kcal"});
  }
  if (!issues.empty()) throw Error(std::move(issues));
  return out;
}

RawRecall to_raw(const RecallDay& recall) {
  RawRecall raw;
  raw.recall_id = recall.recall_id;
  raw.respondent_id = recall.respondent_id;
  raw.submitted_at = recall.submitted_at;
  raw.duration_minutes = recall.duration_minutes;
  raw.device = recall.device;
  raw.energy_kcal = recall.energy_kcal;
  raw.arm = recall.arm;
  for (const auto& meal : recall.meals) {
    RawMeal rm{meal.name(), {}};
    for (const auto& food : meal.entries()) rm.foods.push_back(food.str());
    raw.meals.push_back(std::move(rm));
  }
  return raw;
}

RecallDay validate_recall(const RecallDay& recall) { return validate_recall(to_raw(recall)); }

Corpus::Corpus(std::vector<Meal> meals, std::string source_label)
    : meals_(std::move(meals)), source_label_(std::move(source_label)) {
  for (std::size_t i = 0; i < meals_.size(); ++i) {
    if (meals_[i].food_set().empty()) {
      throw Error(ErrorCode::EmptyMeal, "corpus meal " + std::to_string(i) + " has no foods");
    }
  }
}

Corpus Corpus::from_recalls(const std::vector<RecallDay>& recalls, std::string source_label) {
  std::vector<Meal> meals;
  for (const auto& recall : recalls) {
    for (const auto& meal : recall.meals) {
      if (!meal.empty()) meals.push_back(meal);
    }
  }
  return Corpus(std::move(meals), std::move(source_label));
}

}  // namespace foodprompt
