#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "cotforge/answer_extract.hpp"
#include "cotforge/math_answer.hpp"

using namespace cotforge;

namespace {

const std::vector<std::pair<std::string, std::string>>& pair_corpus() {
  static const std::vector<std::pair<std::string, std::string>> pairs = {
      {"42", "42"},           {"1,234", "1234"},      {"\\frac{3}{6}", "1/2"},
      {"0.50", "1/2"},        {"0.3333333", "1/3"},   {" $0.50$ ", "0.5"},
      {"\\sqrt{2}", "1.414"}, {"50\\%", "50"},        {"-3/9", "-1/3"},
      {"3.14", "22/7"},       {"x+y", "X + Y"},       {"\\dfrac{5}{10}", "0.5"},
  };
  return pairs;
}

}  // namespace

static void BM_NormalizeAnswer(benchmark::State& state) {
  const auto& pairs = pair_corpus();
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& p = pairs[i++ % pairs.size()];
    benchmark::DoNotOptimize(normalize_math_answer(p.first));
  }
}
BENCHMARK(BM_NormalizeAnswer);

static void BM_MathEquivalent(benchmark::State& state) {
  const auto& pairs = pair_corpus();
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& p = pairs[i++ % pairs.size()];
    benchmark::DoNotOptimize(math_equivalent(p.first, p.second));
  }
}
BENCHMARK(BM_MathEquivalent);

static void BM_ExtractBoxed(benchmark::State& state) {
  std::string trace = "Let us reason.\n";
  for (int i = 0; i < state.range(0); ++i) {
    trace += "Step " + std::to_string(i) + " computes an intermediate value.\n";
  }
  trace += "Therefore the answer is \\boxed{\\frac{355}{113}}.";
  for (auto _ : state) {
    benchmark::DoNotOptimize(extract_boxed(trace));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ExtractBoxed)->Range(8, 2048)->Complexity();
