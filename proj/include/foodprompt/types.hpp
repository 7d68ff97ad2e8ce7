#pragma once

#include <chrono>
#include <compare>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace foodprompt {

/// Opaque food identifier. Stored trimmed; compared byte-exact. Codes may not
/// contain whitespace or control characters so every line-oriented file format
/// can carry them unquoted.
class FoodCode {
 public:
  explicit FoodCode(std::string_view raw);

  const std::string& str() const noexcept { return code_; }

  friend bool operator==(const FoodCode&, const FoodCode&) = default;
  friend auto operator<=>(const FoodCode&, const FoodCode&) = default;

 private:
  std::string code_;
};

using FoodSet = std::set<FoodCode>;

FoodSet make_food_set(const std::vector<FoodCode>& foods);

/// A group of foods reported in one eating occasion. Entries keep the reported
/// order (duplicates included); every modeling operation reads food_set().
class Meal {
 public:
  Meal() = default;
  Meal(std::string name, std::vector<FoodCode> entries);

  const std::string& name() const noexcept { return name_; }
  const std::vector<FoodCode>& entries() const noexcept { return entries_; }
  const FoodSet& food_set() const noexcept { return food_set_; }
  bool empty() const noexcept { return entries_.empty(); }

  friend bool operator==(const Meal& a, const Meal& b) {
    return a.name_ == b.name_ && a.entries_ == b.entries_;
  }

 private:
  std::string name_;
  std::vector<FoodCode> entries_;
  FoodSet food_set_;
};

enum class Arm { Handcoded, Generated };
enum class DeviceClass { Desktop, Mobile, Tablet, Unknown };

std::string_view to_string(Arm arm) noexcept;
std::string_view to_string(DeviceClass device) noexcept;
std::optional<Arm> parse_arm(std::string_view text) noexcept;
std::optional<DeviceClass> parse_device_class(std::string_view text) noexcept;

using Timestamp = std::chrono::sys_seconds;

/// UTC, second resolution: "2024-03-01T12:00:00Z".
std::string format_timestamp(Timestamp ts);
std::optional<Timestamp> parse_timestamp(std::string_view text);

/// One day's recall submission.
struct RecallDay {
  std::string recall_id;
  std::string respondent_id;
  std::vector<Meal> meals;
  Timestamp submitted_at{};
  double duration_minutes = 0.0;
  DeviceClass device = DeviceClass::Unknown;
  std::optional<double> energy_kcal;
  Arm arm = Arm::Handcoded;

  friend bool operator==(const RecallDay&, const RecallDay&) = default;
};

/// Unvalidated recall as read from an external format.
struct RawMeal {
  std::string name;
  std::vector<std::string> foods;
};

struct RawRecall {
  std::string recall_id;
  std::string respondent_id;
  std::vector<RawMeal> meals;
  Timestamp submitted_at{};
  double duration_minutes = 0.0;
  DeviceClass device = DeviceClass::Unknown;
  std::optional<double> energy_kcal;
  Arm arm = Arm::Handcoded;
};

/// Normalizes a raw record. Throws Error listing every violated invariant
/// (EmptyRecall, EmptyMeal, EmptyFoodCode, InvalidFoodCode, NegativeDuration,
/// NegativeEnergy).
RecallDay validate_recall(const RawRecall& raw);
RecallDay validate_recall(const RecallDay& recall);

RawRecall to_raw(const RecallDay& recall);

/// Training meals flattened across recalls. Meals without foods are rejected.
class Corpus {
 public:
  Corpus() = default;
  Corpus(std::vector<Meal> meals, std::string source_label);

  static Corpus from_recalls(const std::vector<RecallDay>& recalls, std::string source_label);

  const std::vector<Meal>& meals() const noexcept { return meals_; }
  const std::string& source_label() const noexcept { return source_label_; }
  std::size_t size() const noexcept { return meals_.size(); }
  bool empty() const noexcept { return meals_.empty(); }

 private:
  std::vector<Meal> meals_;
  std::string source_label_;
};

}  // namespace foodprompt
