#include "foodprompt/handcoded_rules.hpp"

#include <fstream>
#include <set>
#include <utility>

#include "foodprompt/error.hpp"

namespace foodprompt {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

void check_rule(const AssociatedFoodRule& rule, std::set<std::pair<FoodCode, FoodCode>>& seen,
                std::optional<std::size_t> line) {
  if (rule.antecedent == rule.consequent) {
    throw Error(ErrorCode::SelfRule, "rule " + rule.rule_id + " links " + rule.antecedent.str() + " to itself", line);
  }
  if (!seen.emplace(rule.antecedent, rule.consequent).second) {
    throw Error(ErrorCode::DuplicateRule,
                "rule " + rule.rule_id + " repeats " + rule.antecedent.str() + " -> " + rule.consequent.str(), line);
  }
}

}  // namespace

RuleSet::RuleSet(std::vector<AssociatedFoodRule> rules) : rules_(std::move(rules)) {
  std::set<std::pair<FoodCode, FoodCode>> seen;
  for (const auto& rule : rules_) check_rule(rule, seen, std::nullopt);
}

RuleSet load_rules(std::istream& in) {
  std::vector<AssociatedFoodRule> rules;
  std::set<std::pair<FoodCode, FoodCode>> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 4) {
      throw Error(ErrorCode::ParseError, "expected 4 tab-separated fields, got " + std::to_string(fields.size()),
                  line_no);
    }
    if (fields[0].empty()) throw Error(ErrorCode::ParseError, "empty rule id", line_no);
    try {
      AssociatedFoodRule rule{fields[0], FoodCode(fields[1]), FoodCode(fields[2]), fields[3]};
      check_rule(rule, seen, line_no);
      rules.push_back(std::move(rule));
    } catch (const Error& e) {
      if (e.line()) throw;
      throw Error(ErrorCode::ParseError, e.what(), line_no);
    }
  }
  return RuleSet(std::move(rules));
}

RuleSet load_rules_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open rule file " + path);
  return load_rules(in);
}

void save_rules(std::ostream& out, const RuleSet& rules) {
  for (const auto& rule : rules.rules()) {
    out << rule.rule_id << '\t' << rule.antecedent.str() << '\t' << rule.consequent.str() << '\t' << rule.prompt_text
        << '\n';
  }
}

std::vector<AssociatedFoodRule> prompts_for(const RuleSet& rules, const FoodCode& just_reported,
                                            const FoodSet& meal_so_far) {
  if (meal_so_far.count(just_reported) == 0) {
    throw Error(ErrorCode::InvalidArgument, "food " + just_reported.str() + " is not in the meal");
  }
  std::vector<AssociatedFoodRule> out;
  for (const auto& rule : rules.rules()) {
    if (rule.antecedent == just_reported && meal_so_far.count(rule.consequent) == 0) out.push_back(rule);
  }
  return out;
}

}  // namespace foodprompt
