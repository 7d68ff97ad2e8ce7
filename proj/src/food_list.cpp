#include "foodprompt/food_list.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>

#include "foodprompt/error.hpp"

namespace foodprompt {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

FoodList::FoodList(std::vector<FoodEntry> entries) : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!index_.emplace(entries_[i].code, i).second) {
      throw Error(ErrorCode::ParseError, "food " + entries_[i].code.str() + " listed twice");
    }
  }
}

std::vector<FoodEntry> FoodList::search(const std::string& query, std::size_t limit) const {
  const auto needle = lower(query);
  std::vector<FoodEntry> out;
  for (const auto& entry : entries_) {
    if (out.size() >= limit) break;
    if (lower(entry.code.str()).find(needle) != std::string::npos ||
        lower(entry.display_name).find(needle) != std::string::npos) {
      out.push_back(entry);
    }
  }
  return out;
}

std::optional<std::string> FoodList::display_name(const FoodCode& code) const {
  const auto it = index_.find(code);
  if (it == index_.end()) return std::nullopt;
  return entries_[it->second].display_name;
}

FoodList load_food_list(std::istream& in) {
  std::vector<FoodEntry> entries;
  std::set<FoodCode> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    try {
      if (tab == std::string::npos) {
        entries.push_back({FoodCode(line), line});
      } else {
        entries.push_back({FoodCode(line.substr(0, tab)), line.substr(tab + 1)});
      }
    } catch (const Error& e) {
      throw Error(ErrorCode::ParseError, e.what(), line_no);
    }
    if (!seen.insert(entries.back().code).second) {
      throw Error(ErrorCode::ParseError, "food " + entries.back().code.str() + " listed twice", line_no);
    }
  }
  return FoodList(std::move(entries));
}

FoodList load_food_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open food list " + path);
  return load_food_list(in);
}

}  // namespace foodprompt
