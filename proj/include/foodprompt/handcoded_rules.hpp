#pragma once

#include <istream>
#include <string>
#include <vector>

#include "foodprompt/types.hpp"

namespace foodprompt {

/// A nutritionist-authored link: reporting `antecedent` prompts for `consequent`.
struct AssociatedFoodRule {
  std::string rule_id;
  FoodCode antecedent;
  FoodCode consequent;
  std::string prompt_text;

  friend bool operator==(const AssociatedFoodRule&, const AssociatedFoodRule&) = default;
};

/// Validated, ordered rule set. Immutable once built.
class RuleSet {
 public:
  RuleSet() = default;
  /// Throws SelfRule and DuplicateRule.
  explicit RuleSet(std::vector<AssociatedFoodRule> rules);

  const std::vector<AssociatedFoodRule>& rules() const noexcept { return rules_; }
  std::size_t size() const noexcept { return rules_.size(); }
  bool empty() const noexcept { return rules_.empty(); }

 private:
  std::vector<AssociatedFoodRule> rules_;
};

/// Reads the tab-separated rule file: rule id, antecedent, consequent, prompt
/// text. Blank lines and lines starting with '#' are skipped.
/// Throws ParseError, SelfRule, DuplicateRule (all with line numbers).
RuleSet load_rules(std::istream& in);
RuleSet load_rules_file(const std::string& path);
void save_rules(std::ostream& out, const RuleSet& rules);

/// Rules triggered by `just_reported`, in file order, skipping consequents
/// already in the meal. Throws InvalidArgument if `just_reported` is not in
/// `meal_so_far`.
std::vector<AssociatedFoodRule> prompts_for(const RuleSet& rules, const FoodCode& just_reported,
                                            const FoodSet& meal_so_far);

}  // namespace foodprompt
