#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace foodprompt {

enum class ErrorCode {
  // recall data
  EmptyFoodCode,
  InvalidFoodCode,
  EmptyRecall,
  EmptyMeal,
  NegativeDuration,
  NegativeEnergy,
  EmptyCorpus,
  // model queries
  UnknownGivenFood,
  SelfPair,
  CandidateIsReported,
  EmptyReportedSet,
  InvalidArgument,
  // rules
  DuplicateRule,
  SelfRule,
  // evaluation
  NoEligibleMeals,
  NoPromptsShown,
  NoEligibleRecalls,
  EmptySample,
  InvalidPromptEvent,
  // files
  ParseError,
  ValidationError,
  VersionMismatch,
  CorruptCounts,
  IoError,
  // service
  ArmUnavailable,
  UnknownSession,
  SessionClosed,
  UnknownMeal,
  MealFinished,
  NotShown,
  UnknownEvent,
  EventAnswered,
};

std::string_view to_string(ErrorCode code) noexcept;

/// One violated invariant. A validation failure may carry several.
struct Issue {
  ErrorCode code;
  std::string message;
};

/// Every failure in the library is reported through this exception. `code()`
/// is the first violation; `issues()` lists all of them when validation
/// collected more than one. File parsers attach the 1-based line number.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::optional<std::size_t> line = std::nullopt);
  explicit Error(std::vector<Issue> issues, std::optional<std::size_t> line = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> line() const noexcept { return line_; }
  const std::vector<Issue>& issues() const noexcept { return issues_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> line_;
  std::vector<Issue> issues_;
};

}  // namespace foodprompt
