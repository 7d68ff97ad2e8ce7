// foodprompt: build co-occurrence models, query prompts, run the omission
// simulation, summarize survey logs and serve the survey API.

#include <csignal>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "foodprompt/cooccurrence_model.hpp"
#include "foodprompt/error.hpp"
#include "foodprompt/evaluation.hpp"
#include "foodprompt/food_list.hpp"
#include "foodprompt/handcoded_rules.hpp"
#include "foodprompt/http_server.hpp"
#include "foodprompt/leave_one_out.hpp"
#include "foodprompt/persistence.hpp"
#include "foodprompt/recommender.hpp"
#include "foodprompt/service.hpp"

namespace fp = foodprompt;
using nlohmann::json;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

bool structured(const std::string& format) { return format == "structured"; }

std::string fixed(double v, int digits = 4) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << v;
  return out.str();
}

std::string opt(const std::optional<double>& v, int digits = 4) { return v ? fixed(*v, digits) : "-"; }

int cmd_build(const std::string& corpus_path, const std::string& out_path, std::int64_t min_pair_count,
              const std::string& format) {
  const auto corpus = fp::load_corpus_file(corpus_path);
  auto model = fp::build_model_parallel(corpus);
  if (min_pair_count > 1) model = model.pruned(min_pair_count);
  fp::save_model_file(out_path, model);
  if (structured(format)) {
    std::cout << json{{"foods", model.food_total()}, {"pairs", model.pair_total()}, {"meals", model.total_meals()},
                      {"model", out_path}}
                     .dump()
              << '\n';
  } else {
    std::cout << "foods " << model.food_total() << "\npairs " << model.pair_total() << "\nmeals "
              << model.total_meals() << "\nwrote " << out_path << '\n';
  }
  return 0;
}

int cmd_recommend(const std::string& model_path, const std::vector<std::string>& foods, std::size_t limit,
                  std::int64_t min_pair_count, const std::string& format) {
  const auto model = fp::load_model_file(model_path);
  fp::FoodSet reported;
  for (const auto& f : foods) {
    fp::FoodCode code(f);
    if (model.food_count(code) == 0) std::cerr << "warning: food '" << code.str() << "' is not in the model\n";
    reported.insert(std::move(code));
  }
  const auto recs = fp::recommend(model, reported, fp::RecommendOptions{limit, min_pair_count});
  if (structured(format)) {
    json rows = json::array();
    for (const auto& r : recs) {
      json support = json::array();
      for (const auto& [food, count] : r.supporting_foods) support.push_back({{"food", food.str()}, {"pair_count", count}});
      rows.push_back({{"food", r.food.str()},
                      {"score_r", r.score_r},
                      {"aggregate_c", r.aggregate_c},
                      {"weight_w", r.weight_w},
                      {"supporting_foods", std::move(support)}});
    }
    std::cout << json{{"recommendations", std::move(rows)}}.dump() << '\n';
    return 0;
  }
  std::cout << std::left << std::setw(6) << "rank" << std::setw(24) << "food" << std::right << std::setw(12) << "R"
            << std::setw(10) << "C" << std::setw(8) << "W" << '\n';
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const auto& r = recs[i];
    std::cout << std::left << std::setw(6) << i + 1 << std::setw(24) << r.food.str() << std::right << std::setw(12)
              << fixed(r.score_r) << std::setw(10) << fixed(r.aggregate_c) << std::setw(8) << r.weight_w << '\n';
  }
  return 0;
}

int cmd_evaluate(const std::string& corpus_path, const std::vector<std::size_t>& ks, std::int64_t min_pair_count,
                 bool train_on_all, bool serial, int threads, const std::string& out_path, const std::string& format) {
  const auto corpus = fp::load_corpus_file(corpus_path);
  fp::LeaveOneOutOptions options;
  options.ks = ks;
  options.min_pair_count = min_pair_count;
  options.mode = train_on_all ? fp::HoldOutMode::TrainOnAll : fp::HoldOutMode::LeaveMealOut;
  options.threads = threads;
  const auto report =
      serial ? fp::simulate_leave_one_out_serial(corpus, options) : fp::simulate_leave_one_out(corpus, options);
  if (!out_path.empty()) fp::save_report_file(out_path, report);
  if (structured(format)) {
    std::cout << fp::report_to_json(report).dump() << '\n';
    return 0;
  }
  std::cout << "cases " << report.cases << " over " << report.meals_evaluated << " meals ("
            << (train_on_all ? "train-on-all" : "leave-meal-out") << ")\n";
  std::cout << std::left << std::setw(6) << "k" << std::right << std::setw(10) << "hits" << std::setw(12) << "recall"
            << '\n';
  for (const auto k : report.ks) {
    std::cout << std::left << std::setw(6) << k << std::right << std::setw(10) << report.hits.at(k) << std::setw(12)
              << fixed(report.recall_at_k.at(k)) << '\n';
  }
  return 0;
}

int cmd_stats(const std::string& recall_path, const std::string& event_path, const std::string& format) {
  const auto recalls = fp::load_recall_log_file(recall_path);
  const auto events = fp::load_prompt_events_file(event_path);
  const auto metrics = fp::compute_arm_metrics(recalls, events);
  if (structured(format)) {
    std::cout << fp::arm_metrics_to_json(metrics).dump() << '\n';
    return 0;
  }
  const auto row = [&](const std::string& label, auto&& value) {
    std::cout << std::left << std::setw(34) << label << std::right << std::setw(14) << value(metrics[0])
              << std::setw(14) << value(metrics[1]) << '\n';
  };
  using M = fp::ArmMetrics;
  row("metric", [](const M& m) { return std::string(fp::to_string(m.arm)); });
  row("recalls", [](const M& m) { return std::to_string(m.recalls); });
  row("prompt events", [](const M& m) { return std::to_string(m.prompt_events); });
  row("foods shown", [](const M& m) { return std::to_string(m.foods_shown); });
  row("foods accepted", [](const M& m) { return std::to_string(m.foods_accepted); });
  row("precision", [](const M& m) { return opt(m.precision); });
  row("recalls with prompts", [](const M& m) { return std::to_string(m.recalls_with_prompts); });
  row("recalls with acceptance", [](const M& m) { return std::to_string(m.recalls_with_acceptance); });
  row("fraction with acceptance", [](const M& m) { return opt(m.fraction_with_acceptance); });
  row("mean accepted (accepting only)", [](const M& m) { return opt(m.mean_accepted_among_accepting); });
  row("unique foods shown", [](const M& m) { return std::to_string(m.coverage.unique_shown); });
  row("unique foods accepted", [](const M& m) { return std::to_string(m.coverage.unique_accepted); });
  row("unique foods reported", [](const M& m) { return std::to_string(m.coverage.unique_reported); });
  row("energy mean kcal (>= 250)", [](const M& m) { return opt(m.energy_mean, 1); });
  row("energy excluded / missing",
      [](const M& m) { return std::to_string(m.energy_excluded) + " / " + std::to_string(m.energy_missing); });
  row("duration mean min (<= 60)", [](const M& m) { return opt(m.duration_mean, 2); });
  row("duration excluded", [](const M& m) { return std::to_string(m.duration_excluded); });
  return 0;
}

fp::HttpServer* g_server = nullptr;

void handle_signal(int) {
  if (g_server != nullptr) g_server->stop();
}

int cmd_serve(const std::string& listen, const std::string& model_path, const std::string& rules_path,
              const std::string& foods_path, const std::string& policy, const std::string& log_dir,
              std::uint64_t seed) {
  fp::ServiceConfig config;
  if (!model_path.empty()) config.model = std::make_shared<const fp::CoOccurrenceModel>(fp::load_model_file(model_path));
  if (!rules_path.empty()) config.rules = std::make_shared<const fp::RuleSet>(fp::load_rules_file(rules_path));
  if (!foods_path.empty()) config.foods = std::make_shared<const fp::FoodList>(fp::load_food_list_file(foods_path));
  config.policy = fp::ArmPolicy::parse(policy);
  config.seed = seed;
  config.log_directory = log_dir;

  const auto colon = listen.rfind(':');
  if (colon == std::string::npos) throw fp::Error(fp::ErrorCode::InvalidArgument, "listen address must be host:port");
  const auto host = listen.substr(0, colon);
  int port = 0;
  try {
    port = std::stoi(listen.substr(colon + 1));
  } catch (const std::exception&) {
    throw fp::Error(fp::ErrorCode::InvalidArgument, "bad port in " + listen);
  }

  fp::SurveyService service(std::move(config));
  fp::HttpServer server(service);
  g_server = &server;
  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);

  const int bound = server.bind(host, port);
  if (bound < 0) {
    std::cerr << "error: cannot listen on " << listen << '\n';
    g_server = nullptr;
    return kExitIo;
  }
  std::cerr << "listening on " << host << ':' << bound << " (arm policy " << policy << ")" << std::endl;
  const bool ok = server.listen_after_bind();
  g_server = nullptr;
  return ok ? 0 : kExitIo;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Associated-food prompting: co-occurrence model, evaluation and survey service"};
  app.require_subcommand(1);
  std::string format = "table";

  auto* build = app.add_subcommand("build", "Build a co-occurrence model from a meal corpus");
  std::string corpus_path;
  std::string out_path;
  std::int64_t min_pair_count = 1;
  build->add_option("corpus", corpus_path, "Corpus file (one meal per line)")->required();
  build->add_option("-o,--out", out_path, "Model file to write")->required();
  build->add_option("--min-pair-count", min_pair_count, "Drop pairs seen fewer times")->check(CLI::PositiveNumber);
  build->add_option("--format", format)->check(CLI::IsMember({"table", "structured"}));

  auto* rec = app.add_subcommand("recommend", "Rank omitted-food prompts for a set of reported foods");
  std::string model_path;
  std::vector<std::string> foods;
  std::size_t limit = fp::kDefaultPromptLimit;
  rec->add_option("-m,--model", model_path, "Model file")->required();
  rec->add_option("foods", foods, "Reported food codes")->required();
  rec->add_option("-n,--limit", limit, "Maximum prompts")->check(CLI::PositiveNumber);
  rec->add_option("--min-pair-count", min_pair_count)->check(CLI::PositiveNumber);
  rec->add_option("--format", format)->check(CLI::IsMember({"table", "structured"}));

  auto* eval = app.add_subcommand("evaluate", "Leave-one-out omission simulation");
  std::vector<std::size_t> ks{1, 5, 15};
  bool train_on_all = false;
  bool serial = false;
  int threads = 0;
  std::string report_path;
  eval->add_option("corpus", corpus_path, "Corpus file")->required();
  eval->add_option("-k,--k", ks, "Cut-offs for recall@k")->delimiter(',')->check(CLI::PositiveNumber);
  eval->add_option("--min-pair-count", min_pair_count)->check(CLI::PositiveNumber);
  eval->add_flag("--train-on-all", train_on_all, "Do not remove the evaluated meal from the counts");
  eval->add_flag("--serial", serial, "Use the serial reference implementation");
  eval->add_option("--threads", threads, "OpenMP threads (0 = default)");
  eval->add_option("-o,--out", report_path, "Write the JSON report here");
  eval->add_option("--format", format)->check(CLI::IsMember({"table", "structured"}));

  auto* stats = app.add_subcommand("stats", "Per-arm metrics from recall and prompt-event logs");
  std::string recall_path;
  std::string event_path;
  stats->add_option("recalls", recall_path, "Recall log (recalls.jsonl)")->required();
  stats->add_option("events", event_path, "Prompt-event log (prompt_events.jsonl)")->required();
  stats->add_option("--format", format)->check(CLI::IsMember({"table", "structured"}));

  auto* serve = app.add_subcommand("serve", "Run the survey HTTP service");
  std::string listen = "127.0.0.1:8080";
  std::string rules_path;
  std::string foods_path;
  std::string policy = "alternate";
  std::string log_dir = "logs";
  std::uint64_t seed = 20190101;
  serve->add_option("--listen", listen, "host:port (port 0 picks a free port)")->envname("FOODPROMPT_LISTEN");
  serve->add_option("--model", model_path, "Model file")->envname("FOODPROMPT_MODEL");
  serve->add_option("--rules", rules_path, "Hand-coded rule file")->envname("FOODPROMPT_RULES");
  serve->add_option("--foods", foods_path, "Food list for search")->envname("FOODPROMPT_FOODS");
  serve->add_option("--arm-policy", policy, "alternate | random | fixed:handcoded | fixed:generated")
      ->envname("FOODPROMPT_ARM_POLICY");
  serve->add_option("--log-dir", log_dir, "Directory for recall and prompt-event logs")->envname("FOODPROMPT_LOG_DIR");
  serve->add_option("--seed", seed, "Seed for the random arm policy")->envname("FOODPROMPT_SEED");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*build) return cmd_build(corpus_path, out_path, min_pair_count, format);
    if (*rec) return cmd_recommend(model_path, foods, limit, min_pair_count, format);
    if (*eval) return cmd_evaluate(corpus_path, ks, min_pair_count, train_on_all, serial, threads, report_path, format);
    if (*stats) return cmd_stats(recall_path, event_path, format);
    if (*serve) return cmd_serve(listen, model_path, rules_path, foods_path, policy, log_dir, seed);
  } catch (const fp::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == fp::ErrorCode::IoError ? kExitIo : kExitValidation;
  }
  return 0;
}
