#pragma once

#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "foodprompt/types.hpp"

namespace foodprompt {

struct FoodEntry {
  FoodCode code;
  std::string display_name;
};

inline constexpr std::size_t kMaxSearchResults = 50;

/// Display names for food codes, read from a tab-separated file
/// (code, display name; '#' comments). Only the UI and CLI use it.
class FoodList {
 public:
  FoodList() = default;
  explicit FoodList(std::vector<FoodEntry> entries);

  /// Case-insensitive substring match over code and display name, in file order.
  std::vector<FoodEntry> search(const std::string& query, std::size_t limit = kMaxSearchResults) const;
  std::optional<std::string> display_name(const FoodCode& code) const;
  const std::vector<FoodEntry>& entries() const noexcept { return entries_; }

 private:
  std::vector<FoodEntry> entries_;
  std::map<FoodCode, std::size_t> index_;
};

/// Throws ParseError(line) on malformed lines or repeated codes.
FoodList load_food_list(std::istream& in);
FoodList load_food_list_file(const std::string& path);

}  // namespace foodprompt
