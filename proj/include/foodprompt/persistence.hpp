#pragma once

#include <array>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "foodprompt/cooccurrence_model.hpp"
#include "foodprompt/evaluation.hpp"
#include "foodprompt/leave_one_out.hpp"
#include "foodprompt/types.hpp"

namespace foodprompt {

inline constexpr int kModelFormatVersion = 1;
inline constexpr int kReportFormatVersion = 1;

// Co-occurrence model: line-oriented text, foods and pairs in sorted order.
// Throws VersionMismatch, ParseError(line), CorruptCounts on load.
void save_model(std::ostream& out, const CoOccurrenceModel& model);
std::string serialize_model(const CoOccurrenceModel& model);
CoOccurrenceModel load_model(std::istream& in);
CoOccurrenceModel parse_model(const std::string& text);
void save_model_file(const std::string& path, const CoOccurrenceModel& model);
CoOccurrenceModel load_model_file(const std::string& path);

// Meal corpus: one meal per line, whitespace-separated food codes.
// Throws ParseError(line) and EmptyCorpus.
Corpus parse_corpus(std::istream& in, std::string source_label);
Corpus load_corpus_file(const std::string& path);
void save_corpus(std::ostream& out, const Corpus& corpus);

// Recall log: one JSON object per line. Throws ParseError(line) and
// ValidationError(line) (the issues list carries the violated invariants).
nlohmann::json recall_to_json(const RecallDay& recall);
RecallDay recall_from_json(const nlohmann::json& j);
void write_recall(std::ostream& out, const RecallDay& recall);
std::vector<RecallDay> parse_recall_log(std::istream& in);
std::vector<RecallDay> load_recall_log_file(const std::string& path);

// Prompt-event log: one JSON object per line.
nlohmann::json prompt_event_to_json(const PromptEvent& event);
PromptEvent prompt_event_from_json(const nlohmann::json& j);
void write_prompt_event(std::ostream& out, const PromptEvent& event);
std::vector<PromptEvent> parse_prompt_events(std::istream& in);
std::vector<PromptEvent> load_prompt_events_file(const std::string& path);

// Evaluation report: a single JSON document.
nlohmann::json report_to_json(const EvaluationReport& report);
EvaluationReport report_from_json(const nlohmann::json& j);
void save_report_file(const std::string& path, const EvaluationReport& report);

nlohmann::json arm_metrics_to_json(const std::array<ArmMetrics, 2>& metrics);

/// Canonical text for a JSON document: sorted keys, compact, trailing newline.
std::string dump_canonical(const nlohmann::json& j);

}  // namespace foodprompt
