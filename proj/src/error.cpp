#include "foodprompt/error.hpp"

#include <utility>

namespace foodprompt {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyFoodCode: return "EmptyFoodCode";
    case ErrorCode::InvalidFoodCode: return "InvalidFoodCode";
    case ErrorCode::EmptyRecall: return "EmptyRecall";
    case ErrorCode::EmptyMeal: return "EmptyMeal";
    case ErrorCode::NegativeDuration: return "NegativeDuration";
    case ErrorCode::NegativeEnergy: return "NegativeEnergy";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::UnknownGivenFood: return "UnknownGivenFood";
    case ErrorCode::SelfPair: return "SelfPair";
    case ErrorCode::CandidateIsReported: return "CandidateIsReported";
    case ErrorCode::EmptyReportedSet: return "EmptyReportedSet";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DuplicateRule: return "DuplicateRule";
    case ErrorCode::SelfRule: return "SelfRule";
    case ErrorCode::NoEligibleMeals: return "NoEligibleMeals";
    case ErrorCode::NoPromptsShown: return "NoPromptsShown";
    case ErrorCode::NoEligibleRecalls: return "NoEligibleRecalls";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::InvalidPromptEvent: return "InvalidPromptEvent";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::CorruptCounts: return "CorruptCounts";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ArmUnavailable: return "ArmUnavailable";
    case ErrorCode::UnknownSession: return "UnknownSession";
    case ErrorCode::SessionClosed: return "SessionClosed";
    case ErrorCode::UnknownMeal: return "UnknownMeal";
    case ErrorCode::MealFinished: return "MealFinished";
    case ErrorCode::NotShown: return "NotShown";
    case ErrorCode::UnknownEvent: return "UnknownEvent";
    case ErrorCode::EventAnswered: return "EventAnswered";
  }
  return "Unknown";
}

namespace {

std::string format_message(ErrorCode code, const std::string& message, std::optional<std::size_t> line) {
  std::string out(to_string(code));
  if (line) out += " (line " + std::to_string(*line) + ")";
  if (!message.empty()) out += ": " + message;
  return out;
}

std::string join_issues(const std::vector<Issue>& issues) {
  std::string out;
  for (const auto& issue : issues) {
    if (!out.empty()) out += "; ";
    out += std::string(to_string(issue.code)) + ": " + issue.message;
  }
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, std::optional<std::size_t> line)
    : std::runtime_error(format_message(code, message, line)),
      code_(code),
      line_(line),
      issues_{Issue{code, message}} {}

Error::Error(std::vector<Issue> issues, std::optional<std::size_t> line)
    : std::runtime_error(issues.empty() ? std::string("ValidationError")
                                        : format_message(issues.front().code, join_issues(issues), line)),
      code_(issues.empty() ? ErrorCode::ValidationError : issues.front().code),
      line_(line),
      issues_(std::move(issues)) {}

}  // namespace foodprompt
