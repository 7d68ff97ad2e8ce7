#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "foodprompt/error.hpp"
#include "foodprompt/persistence.hpp"
#include "oracle.hpp"

using namespace foodprompt;
using foodprompt::testing::random_meals;
using foodprompt::testing::to_corpus;

namespace {

CoOccurrenceModel toy_model() {
  return build_model(
      to_corpus({{"toast", "butter"}, {"toast", "butter", "jam"}, {"toast"}, {"coffee", "milk"}}, "toy"));
}

Error error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "expected an Error";
  return Error(ErrorCode::ValidationError, "");
}

Corpus corpus_from(const std::string& text) {
  std::istringstream in(text);
  return parse_corpus(in, "inline");
}

std::vector<RecallDay> recalls_from(const std::string& text) {
  std::istringstream in(text);
  return parse_recall_log(in);
}

std::vector<PromptEvent> events_from(const std::string& text) {
  std::istringstream in(text);
  return parse_prompt_events(in);
}

RecallDay random_recall(std::mt19937_64& rng, int i) {
  RecallDay r;
  r.recall_id = "R" + std::to_string(i);
  r.respondent_id = "P" + std::to_string(rng() % 50);
  for (const auto& meal : random_meals(rng, 6, 20, 5)) {
    std::vector<FoodCode> foods;
    for (const auto& f : meal) foods.emplace_back(f);
    r.meals.emplace_back(rng() % 2 ? "lunch" : "evening \"snack\"", std::move(foods));
  }
  r.submitted_at = Timestamp{std::chrono::seconds{1500000000 + static_cast<std::int64_t>(rng() % 100000000)}};
  r.duration_minutes = static_cast<double>(rng() % 100000) / 997.0;
  r.device = static_cast<DeviceClass>(rng() % 4);
  if (rng() % 3) r.energy_kcal = static_cast<double>(rng() % 400000) / 113.0;
  r.arm = rng() % 2 ? Arm::Generated : Arm::Handcoded;
  return r;
}

}  // namespace

TEST(ModelFile, ToyModelGoldenText) {
  EXPECT_EQ(serialize_model(toy_model()),
            "foodprompt-model 1\n"
            "label toy\n"
            "meals 4\n"
            "foods 5\n"
            "food butter 2\n"
            "food coffee 1\n"
            "food jam 1\n"
            "food milk 1\n"
            "food toast 3\n"
            "pairs 4\n"
            "pair butter jam 1\n"
            "pair butter toast 2\n"
            "pair coffee milk 1\n"
            "pair jam toast 1\n"
            "end\n");
}

TEST(ModelFile, RoundTripToyModel) {
  const auto model = toy_model();
  EXPECT_EQ(parse_model(serialize_model(model)), model);
}

TEST(ModelFile, RoundTripRandomModelsDeterministically) {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 50; ++trial) {
    const auto model = build_model(to_corpus(random_meals(rng, 60, 25), "label\twith \\ odd\nchars " + std::to_string(trial)));
    const auto text = serialize_model(model);
    const auto loaded = parse_model(text);
    EXPECT_EQ(loaded, model);
    EXPECT_EQ(serialize_model(loaded), text);
  }
}

TEST(ModelFile, PairExceedingFoodCountIsCorrupt) {
  const auto e = error_of([] {
    parse_model("foodprompt-model 1\nlabel x\nmeals 5\nfoods 2\nfood A 2\nfood B 5\npairs 1\npair A B 5\nend\n");
  });
  EXPECT_EQ(e.code(), ErrorCode::CorruptCounts);
}

TEST(ModelFile, UnknownVersion) {
  const auto e = error_of([] { parse_model("foodprompt-model 99\nlabel x\nmeals 0\nfoods 0\npairs 0\nend\n"); });
  EXPECT_EQ(e.code(), ErrorCode::VersionMismatch);
  EXPECT_EQ(e.line(), 1u);
}

TEST(ModelFile, ReversedOrDuplicatePairsAreCorrupt) {
  EXPECT_EQ(error_of([] {
              parse_model("foodprompt-model 1\nlabel x\nmeals 2\nfoods 2\nfood A 2\nfood B 2\npairs 1\npair B A 1\nend\n");
            }).code(),
            ErrorCode::CorruptCounts);
  EXPECT_EQ(error_of([] {
              parse_model(
                  "foodprompt-model 1\nlabel x\nmeals 2\nfoods 2\nfood A 2\nfood B 2\npairs 2\npair A B 1\npair A B 1\nend\n");
            }).code(),
            ErrorCode::CorruptCounts);
}

TEST(ModelFile, MalformedRecordsCarryLineNumbers) {
  auto e = error_of([] { parse_model("foodprompt-model 1\nlabel x\nmeals two\n"); });
  EXPECT_EQ(e.code(), ErrorCode::ParseError);
  EXPECT_EQ(e.line(), 3u);
  e = error_of([] { parse_model("foodprompt-model 1\nlabel x\nmeals 1\nfoods 1\nfood A\n"); });
  EXPECT_EQ(e.code(), ErrorCode::ParseError);
  EXPECT_EQ(e.line(), 5u);
  e = error_of([] { parse_model("foodprompt-model 1\nlabel x\nmeals 1\nfoods 1\nfood A 1\npairs 0\n"); });
  EXPECT_EQ(e.code(), ErrorCode::ParseError);
  e = error_of([] { parse_model("not a model\n"); });
  EXPECT_EQ(e.code(), ErrorCode::ParseError);
}

TEST(CorpusFile, OneMealPerLine) {
  const auto corpus = corpus_from("# comment\nA B\n\nA B C   # trailing comment\n");
  ASSERT_EQ(corpus.size(), 2u);
  EXPECT_EQ(corpus.meals()[1].food_set().size(), 3u);
  EXPECT_EQ(corpus.source_label(), "inline");
}

TEST(CorpusFile, MalformedLineHasLineNumber) {
  const auto e = error_of([] { corpus_from("A B\nA \x01 C\n"); });
  EXPECT_EQ(e.code(), ErrorCode::ParseError);
  EXPECT_EQ(e.line(), 2u);
}

TEST(CorpusFile, EmptyFileIsEmptyCorpus) {
  EXPECT_EQ(error_of([] { corpus_from(""); }).code(), ErrorCode::EmptyCorpus);
  EXPECT_EQ(error_of([] { corpus_from("# only comments\n\n"); }).code(), ErrorCode::EmptyCorpus);
}

TEST(CorpusFile, SaveThenParseKeepsMeals) {
  std::mt19937_64 rng(61);
  const auto corpus = to_corpus(random_meals(rng, 30, 10), "inline");
  std::ostringstream out;
  save_corpus(out, corpus);
  const auto again = corpus_from(out.str());
  EXPECT_EQ(again.meals(), corpus.meals());
}

TEST(RecallLog, RoundTripRandomRecalls) {
  std::mt19937_64 rng(67);
  std::ostringstream out;
  std::vector<RecallDay> recalls;
  for (int i = 0; i < 100; ++i) {
    recalls.push_back(random_recall(rng, i));
    write_recall(out, recalls.back());
  }
  const auto loaded = recalls_from(out.str());
  EXPECT_EQ(loaded, recalls);
  std::ostringstream again;
  for (const auto& r : loaded) write_recall(again, r);
  EXPECT_EQ(again.str(), out.str());
}

TEST(RecallLog, InvalidRecordReportsLineAndIssues) {
  const std::string good =
      R"({"arm":"generated","device":"mobile","duration_minutes":10,"meals":[{"foods":["toast"],"name":"b"}],"recall_id":"R1","respondent_id":"P1","submitted_at":"2020-01-01T00:00:00Z"})";
  const std::string bad =
      R"({"arm":"generated","device":"mobile","duration_minutes":-3,"meals":[],"recall_id":"R2","respondent_id":"P1","submitted_at":"2020-01-01T00:00:00Z"})";
  const auto e = error_of([&] { recalls_from(good + "\n" + bad + "\n"); });
  EXPECT_EQ(e.code(), ErrorCode::ValidationError);
  EXPECT_EQ(e.line(), 2u);
  ASSERT_EQ(e.issues().size(), 3u);
  EXPECT_EQ(e.issues()[1].code, ErrorCode::EmptyRecall);
  EXPECT_EQ(e.issues()[2].code, ErrorCode::NegativeDuration);
}

TEST(RecallLog, MalformedJsonIsParseError) {
  auto e = error_of([] { recalls_from("{not json\n"); });
  EXPECT_EQ(e.code(), ErrorCode::ParseError);
  EXPECT_EQ(e.line(), 1u);
  e = error_of([] { recalls_from("\n{\"recall_id\":\"R1\"}\n"); });
  EXPECT_EQ(e.code(), ErrorCode::ParseError);
  EXPECT_EQ(e.line(), 2u);
}

TEST(PromptEventLog, RoundTrip) {
  std::vector<PromptEvent> events{
      {"R1", 0, Arm::Handcoded, {FoodCode("butter"), FoodCode("jam")}, {FoodCode("butter")}},
      {"R1", 2, Arm::Generated, {FoodCode("milk")}, {}},
  };
  std::ostringstream out;
  for (const auto& e : events) write_prompt_event(out, e);
  EXPECT_EQ(events_from(out.str()), events);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')),
            R"({"accepted":["butter"],"meal_index":0,"prompt_type":"handcoded","recall_id":"R1","shown":["butter","jam"]})");
}

TEST(PromptEventLog, AcceptedOutsideShownRejected) {
  const auto e = error_of([] {
    events_from(R"({"accepted":["milk"],"meal_index":0,"prompt_type":"handcoded","recall_id":"R1","shown":["butter"]})");
  });
  EXPECT_EQ(e.code(), ErrorCode::ValidationError);
  EXPECT_EQ(e.line(), 1u);
}

TEST(EvaluationReportFile, RoundTrip) {
  EvaluationReport report;
  report.ks = {1, 5, 15};
  report.hits = {{1, 3}, {5, 4}, {15, 4}};
  report.recall_at_k = {{1, 3.0 / 7.0}, {5, 4.0 / 7.0}, {15, 4.0 / 7.0}};
  report.cases = 7;
  report.meals_evaluated = 3;
  report.corpus_label = "toy";
  EXPECT_EQ(report_from_json(report_to_json(report)), report);
  auto j = report_to_json(report);
  j["version"] = 99;
  EXPECT_EQ(error_of([&] { report_from_json(j); }).code(), ErrorCode::VersionMismatch);
}
