#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cotforge/code_judge.hpp"
#include "cotforge/gateway.hpp"
#include "cotforge/records.hpp"

namespace cotforge {

// Per-step quality scores for one trace and their arithmetic mean.
struct StepScores {
  std::vector<std::string> steps;
  std::vector<double> scores;
  double mean = 0.0;
};

// Splits a trace into steps on blank-line boundaries. Segments shorter than
// min_chars are merged into their predecessor (the first segment merges
// forward). Always returns at least one segment.
std::vector<std::string> segment_steps(const std::string& raw_text,
                                       std::size_t min_chars = 10);

// Scores an incorrect (or unusable) trace; never a correct one.
StepScores prm_score(const Question& question, const ModelTrace& trace, StepScorer& scorer);

// Ascending interior cut points of the five score buckets. With the default
// cuts: [0.8,1.0] -> L1, [0.6,0.8) -> L2, [0.4,0.6) -> L3, [0.2,0.4) -> L4,
// [0.0,0.2) -> L5. Lower scores mean higher difficulty.
struct LevelCuts {
  std::array<double, 4> cuts{0.2, 0.4, 0.6, 0.8};
};

Level score_to_level(double score, const LevelCuts& cuts = {});

// Pass-rate grading for code: rate = passed/total through the same buckets.
// All-pass reports are Easy upstream and rejected here.
Level ut_pass_rate_level(const TestReport& report, const LevelCuts& cuts = {});

// The grading rule end to end: correct -> Easy; incorrect -> graded by the
// chosen method; error -> graded as if incorrect (PRM on the raw text, or
// the UT rate of whatever ran, 0 if nothing ran).
DifficultyLabel label(const Question& question, const ModelTrace& trace,
                      GradingMethod method, StepScorer* scorer,
                      const std::optional<TestReport>& report = std::nullopt,
                      const LevelCuts& cuts = {});

}  // namespace cotforge
