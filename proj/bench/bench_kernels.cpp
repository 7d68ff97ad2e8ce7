// Serial vs OpenMP kernels on a synthetic planted-association corpus.

#include <benchmark/benchmark.h>

#include "foodprompt/cooccurrence_model.hpp"
#include "foodprompt/leave_one_out.hpp"
#include "oracle.hpp"

#include <map>

namespace {

const foodprompt::Corpus& corpus_of(std::size_t meals) {
  static std::map<std::size_t, foodprompt::Corpus> cache;
  auto it = cache.find(meals);
  if (it == cache.end()) {
    const auto planted = foodprompt::testing::planted_corpus(7, meals, 50, 400);
    it = cache.emplace(meals, foodprompt::testing::to_corpus(planted.meals, "bench")).first;
  }
  return it->second;
}

void BM_BuildSerial(benchmark::State& state) {
  const auto& corpus = corpus_of(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(foodprompt::build_model(corpus));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_BuildParallel(benchmark::State& state) {
  const auto& corpus = corpus_of(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(foodprompt::build_model_parallel(corpus));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_LeaveOneOutSerial(benchmark::State& state) {
  const auto& corpus = corpus_of(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(foodprompt::simulate_leave_one_out_serial(corpus));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_LeaveOneOutParallel(benchmark::State& state) {
  const auto& corpus = corpus_of(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(foodprompt::simulate_leave_one_out(corpus));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_BuildSerial)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BuildParallel)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LeaveOneOutSerial)->Arg(2000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LeaveOneOutParallel)->Arg(2000)->Arg(10000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
