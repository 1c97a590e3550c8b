#include <benchmark/benchmark.h>

#include <vector>

#include "cotforge/sampler.hpp"

using namespace cotforge;

namespace {

std::vector<GradedQuestion> synthetic_db(std::size_t per_label) {
  std::vector<GradedQuestion> db;
  db.reserve(per_label * kLevelCount);
  int idx = 0;
  for (std::size_t l = 0; l < kLevelCount; ++l) {
    for (std::size_t k = 0; k < per_label; ++k) {
      GradedQuestion g;
      g.question = {"b" + std::to_string(idx++), Task::kMath, "p", "1", {}, "bench"};
      g.trace = {g.question.id, "m", "r", "1",
                 l == 0 ? Verdict::kCorrect : Verdict::kIncorrect};
      g.difficulty = {static_cast<Level>(l),
                      l == 0 ? std::optional<double>() : std::optional<double>(0.5),
                      GradingMethod::kPrm};
      db.push_back(std::move(g));
    }
  }
  return db;
}

}  // namespace

static void BM_SampleFromLargeDb(benchmark::State& state) {
  auto db = synthetic_db(static_cast<std::size_t>(state.range(0)));
  DifficultyDistribution target;
  target.kind = DistributionKind::kEval;
  target.probs = {0.30, 0.25, 0.20, 0.15, 0.07, 0.03};
  std::uint64_t seed = 17;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sample(db, target, 2000, seed++, ShortfallPolicy::kRedistribute));
  }
  state.SetComplexityN(state.range(0) * static_cast<long>(kLevelCount));
}
BENCHMARK(BM_SampleFromLargeDb)->RangeMultiplier(4)->Range(1000, 16000)->Complexity();

static void BM_Quotas(benchmark::State& state) {
  std::array<double, kLevelCount> probs = {0.30, 0.25, 0.20, 0.15, 0.07, 0.03};
  std::size_t n = 1999;
  for (auto _ : state) {
    benchmark::DoNotOptimize(largest_remainder_quotas(n, probs));
  }
}
BENCHMARK(BM_Quotas);
