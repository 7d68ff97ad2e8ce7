#include "foodprompt/persistence.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "foodprompt/error.hpp"

namespace foodprompt {

using nlohmann::json;

namespace {

constexpr std::string_view kModelMagic = "foodprompt-model";

std::string escape_label(const std::string& label) {
  std::string out;
  for (const char c : label) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

std::string unescape_label(std::string_view text, std::size_t line) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '\\') {
      out += text[i];
      continue;
    }
    if (++i == text.size()) throw Error(ErrorCode::ParseError, "dangling escape in label", line);
    switch (text[i]) {
      case '\\': out += '\\'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      case 't': out += '\t'; break;
      default: throw Error(ErrorCode::ParseError, "unknown escape in label", line);
    }
  }
  return out;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const auto start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::int64_t parse_count(std::string_view text, std::size_t line) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::ParseError, "expected an integer, got '" + std::string(text) + "'", line);
  }
  return v;
}

FoodCode parse_food(std::string_view text, std::size_t line) {
  try {
    return FoodCode(text);
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, e.what(), line);
  }
}

// Reads lines, stripping '\r', counting from 1.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}
  bool next(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++number_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }
  std::size_t number() const { return number_; }

 private:
  std::istream& in_;
  std::size_t number_ = 0;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  return in;
}

std::vector<std::string> food_strings(const std::vector<FoodCode>& foods) {
  std::vector<std::string> out;
  out.reserve(foods.size());
  for (const auto& f : foods) out.push_back(f.str());
  return out;
}

std::vector<FoodCode> foods_from_json(const json& j) {
  std::vector<FoodCode> out;
  for (const auto& item : j) out.emplace_back(item.get<std::string>());
  return out;
}

bool is_blank(const std::string& line) { return line.find_first_not_of(" \t") == std::string::npos; }

template <typename T, typename FromJson>
std::vector<T> parse_json_lines(std::istream& in, FromJson&& from_json) {
  std::vector<T> out;
  LineReader reader(in);
  std::string line;
  while (reader.next(line)) {
    if (is_blank(line)) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError, e.what(), reader.number());
    }
    try {
      out.push_back(from_json(j));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError, e.what(), reader.number());
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ParseError) throw Error(ErrorCode::ParseError, e.what(), reader.number());
      auto issues = e.issues();
      issues.insert(issues.begin(), Issue{ErrorCode::ValidationError, "invalid record"});
      throw Error(std::move(issues), reader.number());
    }
  }
  return out;
}

}  // namespace

// ---- model ----

void save_model(std::ostream& out, const CoOccurrenceModel& model) {
  out << kModelMagic << ' ' << kModelFormatVersion << '\n';
  out << "label " << escape_label(model.corpus_label()) << '\n';
  out << "meals " << model.total_meals() << '\n';
  out << "foods " << model.food_total() << '\n';
  for (const auto& [food, count] : model.food_counts()) out << "food " << food.str() << ' ' << count << '\n';
  const auto pairs = model.pairs();
  out << "pairs " << pairs.size() << '\n';
  for (const auto& p : pairs) out << "pair " << p.first.str() << ' ' << p.second.str() << ' ' << p.count << '\n';
  out << "end\n";
}

std::string serialize_model(const CoOccurrenceModel& model) {
  std::ostringstream out;
  save_model(out, model);
  return out.str();
}

CoOccurrenceModel load_model(std::istream& in) {
  LineReader reader(in);
  std::string line;
  const auto expect_line = [&](std::string_view what) {
    if (!reader.next(line)) {
      throw Error(ErrorCode::ParseError, "unexpected end of file, expected " + std::string(what), reader.number() + 1);
    }
  };
  const auto keyed_count = [&](std::string_view key) {
    expect_line(key);
    const auto fields = split_ws(line);
    if (fields.size() != 2 || fields[0] != key) {
      throw Error(ErrorCode::ParseError, "expected '" + std::string(key) + " <count>'", reader.number());
    }
    return parse_count(fields[1], reader.number());
  };

  expect_line("header");
  const auto header = split_ws(line);
  if (header.size() != 2 || header[0] != kModelMagic) {
    throw Error(ErrorCode::ParseError, "not a model file", reader.number());
  }
  const auto version = parse_count(header[1], reader.number());
  if (version != kModelFormatVersion) {
    throw Error(ErrorCode::VersionMismatch,
                "format version " + std::to_string(version) + ", expected " + std::to_string(kModelFormatVersion),
                reader.number());
  }

  expect_line("label");
  if (line.rfind("label ", 0) != 0 && line != "label") {
    throw Error(ErrorCode::ParseError, "expected 'label <text>'", reader.number());
  }
  const auto label = unescape_label(line.size() > 6 ? std::string_view(line).substr(6) : std::string_view{},
                                    reader.number());

  const auto meals = keyed_count("meals");
  const auto food_lines = keyed_count("foods");
  std::map<FoodCode, std::int64_t> foods;
  for (std::int64_t i = 0; i < food_lines; ++i) {
    expect_line("food record");
    const auto f = split_ws(line);
    if (f.size() != 3 || f[0] != "food") throw Error(ErrorCode::ParseError, "expected 'food <code> <count>'", reader.number());
    if (!foods.emplace(parse_food(f[1], reader.number()), parse_count(f[2], reader.number())).second) {
      throw Error(ErrorCode::CorruptCounts, "food " + std::string(f[1]) + " listed twice", reader.number());
    }
  }
  const auto pair_lines = keyed_count("pairs");
  std::vector<PairCount> pairs;
  for (std::int64_t i = 0; i < pair_lines; ++i) {
    expect_line("pair record");
    const auto f = split_ws(line);
    if (f.size() != 4 || f[0] != "pair") {
      throw Error(ErrorCode::ParseError, "expected 'pair <code> <code> <count>'", reader.number());
    }
    PairCount p{parse_food(f[1], reader.number()), parse_food(f[2], reader.number()),
                parse_count(f[3], reader.number())};
    if (!(p.first < p.second)) {
      throw Error(ErrorCode::CorruptCounts, "pair codes must be distinct and in ascending order", reader.number());
    }
    pairs.push_back(std::move(p));
  }
  expect_line("end");
  if (line != "end") throw Error(ErrorCode::ParseError, "expected 'end'", reader.number());
  while (reader.next(line)) {
    if (!is_blank(line)) throw Error(ErrorCode::ParseError, "trailing content after 'end'", reader.number());
  }
  return CoOccurrenceModel::from_counts(label, meals, foods, pairs);
}

CoOccurrenceModel parse_model(const std::string& text) {
  std::istringstream in(text);
  return load_model(in);
}

void save_model_file(const std::string& path, const CoOccurrenceModel& model) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  save_model(out, model);
  if (!out.flush()) throw Error(ErrorCode::IoError, "failed writing " + path);
}

CoOccurrenceModel load_model_file(const std::string& path) {
  auto in = open_input(path);
  return load_model(in);
}

// ---- corpus ----

Corpus parse_corpus(std::istream& in, std::string source_label) {
  std::vector<Meal> meals;
  LineReader reader(in);
  std::string line;
  while (reader.next(line)) {
    const auto hash = line.find('#');
    const auto body = std::string_view(line).substr(0, hash);
    const auto fields = split_ws(body);
    if (fields.empty()) continue;
    std::vector<FoodCode> foods;
    foods.reserve(fields.size());
    for (const auto field : fields) foods.push_back(parse_food(field, reader.number()));
    meals.emplace_back("", std::move(foods));
  }
  if (meals.empty()) throw Error(ErrorCode::EmptyCorpus, "corpus has no meals");
  return Corpus(std::move(meals), std::move(source_label));
}

Corpus load_corpus_file(const std::string& path) {
  auto in = open_input(path);
  return parse_corpus(in, std::filesystem::path(path).filename().string());
}

void save_corpus(std::ostream& out, const Corpus& corpus) {
  for (const auto& meal : corpus.meals()) {
    bool first = true;
    for (const auto& food : meal.entries()) {
      out << (first ? "" : " ") << food.str();
      first = false;
    }
    out << '\n';
  }
}

// ---- recall log ----

json recall_to_json(const RecallDay& recall) {
  json meals = json::array();
  for (const auto& meal : recall.meals) meals.push_back({{"name", meal.name()}, {"foods", food_strings(meal.entries())}});
  json j = {{"recall_id", recall.recall_id},
            {"respondent_id", recall.respondent_id},
            {"submitted_at", format_timestamp(recall.submitted_at)},
            {"duration_minutes", recall.duration_minutes},
            {"device", std::string(to_string(recall.device))},
            {"arm", std::string(to_string(recall.arm))},
            {"meals", std::move(meals)}};
  if (recall.energy_kcal) j["energy_kcal"] = *recall.energy_kcal;
  return j;
}

RecallDay recall_from_json(const json& j) {
  RawRecall raw;
  raw.recall_id = j.at("recall_id").get<std::string>();
  raw.respondent_id = j.at("respondent_id").get<std::string>();
  const auto ts = parse_timestamp(j.at("submitted_at").get<std::string>());
  if (!ts) throw Error(ErrorCode::ParseError, "bad submitted_at timestamp");
  raw.submitted_at = *ts;
  raw.duration_minutes = j.at("duration_minutes").get<double>();
  const auto device = parse_device_class(j.at("device").get<std::string>());
  if (!device) throw Error(ErrorCode::ParseError, "unknown device class");
  raw.device = *device;
  const auto arm = parse_arm(j.at("arm").get<std::string>());
  if (!arm) throw Error(ErrorCode::ParseError, "unknown arm");
  raw.arm = *arm;
  if (j.contains("energy_kcal") && !j.at("energy_kcal").is_null()) raw.energy_kcal = j.at("energy_kcal").get<double>();
  for (const auto& m : j.at("meals")) {
    raw.meals.push_back({m.at("name").get<std::string>(), m.at("foods").get<std::vector<std::string>>()});
  }
  return validate_recall(raw);
}

void write_recall(std::ostream& out, const RecallDay& recall) { out << dump_canonical(recall_to_json(recall)); }

std::vector<RecallDay> parse_recall_log(std::istream& in) {
  return parse_json_lines<RecallDay>(in, [](const json& j) { return recall_from_json(j); });
}

std::vector<RecallDay> load_recall_log_file(const std::string& path) {
  auto in = open_input(path);
  return parse_recall_log(in);
}

// ---- prompt events ----

json prompt_event_to_json(const PromptEvent& event) {
  return {{"recall_id", event.recall_id},
          {"meal_index", event.meal_index},
          {"prompt_type", std::string(to_string(event.prompt_type))},
          {"shown", food_strings(event.shown)},
          {"accepted", food_strings(event.accepted)}};
}

PromptEvent prompt_event_from_json(const json& j) {
  PromptEvent e;
  e.recall_id = j.at("recall_id").get<std::string>();
  e.meal_index = j.at("meal_index").get<std::size_t>();
  const auto type = parse_arm(j.at("prompt_type").get<std::string>());
  if (!type) throw Error(ErrorCode::ParseError, "unknown prompt type");
  e.prompt_type = *type;
  e.shown = foods_from_json(j.at("shown"));
  e.accepted = foods_from_json(j.at("accepted"));
  validate_prompt_event(e);
  return e;
}

void write_prompt_event(std::ostream& out, const PromptEvent& event) {
  out << dump_canonical(prompt_event_to_json(event));
}

std::vector<PromptEvent> parse_prompt_events(std::istream& in) {
  return parse_json_lines<PromptEvent>(in, [](const json& j) { return prompt_event_from_json(j); });
}

std::vector<PromptEvent> load_prompt_events_file(const std::string& path) {
  auto in = open_input(path);
  return parse_prompt_events(in);
}

// ---- evaluation report ----

json report_to_json(const EvaluationReport& report) {
  json results = json::array();
  for (const auto k : report.ks) {
    results.push_back({{"k", k}, {"hits", report.hits.at(k)}, {"recall", report.recall_at_k.at(k)}});
  }
  return {{"format", "foodprompt-evaluation"},
          {"version", kReportFormatVersion},
          {"corpus_label", report.corpus_label},
          {"mode", report.mode == HoldOutMode::LeaveMealOut ? "leave-meal-out" : "train-on-all"},
          {"min_pair_count", report.min_pair_count},
          {"cases", report.cases},
          {"meals_evaluated", report.meals_evaluated},
          {"results", std::move(results)}};
}

EvaluationReport report_from_json(const json& j) {
  try {
    if (j.at("format").get<std::string>() != "foodprompt-evaluation") {
      throw Error(ErrorCode::ParseError, "not an evaluation report");
    }
    const auto version = j.at("version").get<int>();
    if (version != kReportFormatVersion) {
      throw Error(ErrorCode::VersionMismatch, "report version " + std::to_string(version));
    }
    EvaluationReport r;
    r.corpus_label = j.at("corpus_label").get<std::string>();
    const auto mode = j.at("mode").get<std::string>();
    if (mode == "leave-meal-out") {
      r.mode = HoldOutMode::LeaveMealOut;
    } else if (mode == "train-on-all") {
      r.mode = HoldOutMode::TrainOnAll;
    } else {
      throw Error(ErrorCode::ParseError, "unknown mode " + mode);
    }
    r.min_pair_count = j.at("min_pair_count").get<std::int64_t>();
    r.cases = j.at("cases").get<std::int64_t>();
    r.meals_evaluated = j.at("meals_evaluated").get<std::int64_t>();
    for (const auto& item : j.at("results")) {
      const auto k = item.at("k").get<std::size_t>();
      r.ks.push_back(k);
      r.hits[k] = item.at("hits").get<std::int64_t>();
      r.recall_at_k[k] = item.at("recall").get<double>();
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

void save_report_file(const std::string& path, const EvaluationReport& report) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << report_to_json(report).dump(2) << '\n';
  if (!out.flush()) throw Error(ErrorCode::IoError, "failed writing " + path);
}

// ---- metrics ----

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json arm_json(const ArmMetrics& m) {
  return {{"recalls", m.recalls},
          {"prompt_events", m.prompt_events},
          {"foods_shown", m.foods_shown},
          {"foods_accepted", m.foods_accepted},
          {"precision", optional_number(m.precision)},
          {"recalls_with_prompts", m.recalls_with_prompts},
          {"recalls_with_acceptance", m.recalls_with_acceptance},
          {"fraction_with_acceptance", optional_number(m.fraction_with_acceptance)},
          {"mean_accepted_among_accepting", optional_number(m.mean_accepted_among_accepting)},
          {"unique_shown", m.coverage.unique_shown},
          {"unique_accepted", m.coverage.unique_accepted},
          {"unique_reported", m.coverage.unique_reported},
          {"energy_mean_kcal", optional_number(m.energy_mean)},
          {"energy_included", m.energy_included},
          {"energy_excluded", m.energy_excluded},
          {"energy_missing", m.energy_missing},
          {"duration_mean_minutes", optional_number(m.duration_mean)},
          {"duration_included", m.duration_included},
          {"duration_excluded", m.duration_excluded}};
}

}  // namespace

json arm_metrics_to_json(const std::array<ArmMetrics, 2>& metrics) {
  json arms = json::object();
  for (const auto& m : metrics) arms[std::string(to_string(m.arm))] = arm_json(m);
  return {{"arms", std::move(arms)}};
}

std::string dump_canonical(const json& j) { return j.dump() + "\n"; }

}  // namespace foodprompt
