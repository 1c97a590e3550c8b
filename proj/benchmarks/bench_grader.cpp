#include <benchmark/benchmark.h>

#include <string>

#include "cotforge/grader.hpp"

using namespace cotforge;

static void BM_SegmentSteps(benchmark::State& state) {
  std::string trace;
  for (int i = 0; i < state.range(0); ++i) {
    trace += "Reasoning paragraph number " + std::to_string(i) +
             " with enough text to stand on its own.\n\n";
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(segment_steps(trace));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SegmentSteps)->Range(4, 1024)->Complexity();

static void BM_ScoreToLevel(benchmark::State& state) {
  double score = 0.0;
  for (auto _ : state) {
    score += 0.001;
    if (score > 1.0) score = 0.0;
    benchmark::DoNotOptimize(score_to_level(score));
  }
}
BENCHMARK(BM_ScoreToLevel);
