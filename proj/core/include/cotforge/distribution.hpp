#pragma once

#include <filesystem>
#include <vector>

#include "cotforge/records.hpp"

namespace cotforge {

// Option 1: empirical label frequencies of a graded set.
DifficultyDistribution build_eval_distribution(const std::vector<GradedQuestion>& graded);

// Option 2: curriculum weights w1..w5 (strictly decreasing) normalized to
// probabilities, with easy mass taken from easy_weight:
// probs[Li] = wi / (easy_weight + sum(w)), probs[easy] = easy_weight / (...).
DifficultyDistribution build_curriculum_distribution(const CurriculumSpec& spec);

// Reads a distribution.json produced elsewhere (e.g. by another model's
// grading run, for transfer experiments) and revalidates it. The result is
// tagged kind=external regardless of the kind recorded in the file.
DifficultyDistribution load_external_distribution(const std::filesystem::path& file);

}  // namespace cotforge
