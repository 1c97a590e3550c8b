#include "cotforge/distribution.hpp"

#include <numeric>

#include "cotforge/errors.hpp"
#include "cotforge/jsonl.hpp"

namespace cotforge {

DifficultyDistribution build_eval_distribution(const std::vector<GradedQuestion>& graded) {
  if (graded.empty()) {
    throw ValidationError("cannot build an eval distribution from an empty graded set");
  }
  std::array<std::size_t, kLevelCount> counts{};
  for (const GradedQuestion& g : graded) {
    counts[static_cast<std::size_t>(g.difficulty.label)]++;
  }
  DifficultyDistribution d;
  d.kind = DistributionKind::kEval;
  for (std::size_t i = 0; i < kLevelCount; ++i) {
    d.probs[i] = static_cast<double>(counts[i]) / static_cast<double>(graded.size());
  }
  validate(d);
  return d;
}

DifficultyDistribution build_curriculum_distribution(const CurriculumSpec& spec) {
  validate(spec);
  double weight_sum = std::accumulate(spec.weights.begin(), spec.weights.end(), 0.0);
  double total = weight_sum + spec.easy_weight;
  DifficultyDistribution d;
  d.kind = DistributionKind::kCurriculum;
  d.prob(Level::kEasy) = spec.easy_weight / total;
  for (std::size_t i = 0; i < spec.weights.size(); ++i) {
    d.probs[i + 1] = spec.weights[i] / total;
  }
  validate(d);
  return d;
}

DifficultyDistribution load_external_distribution(const std::filesystem::path& file) {
  DifficultyDistribution d = decode_distribution(read_text_file(file));
  d.kind = DistributionKind::kExternal;
  // external files are whatever another run produced; only the shared
  // invariants apply, not the curriculum shape
  validate(d);
  return d;
}

}  // namespace cotforge
