#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cotforge/code_judge.hpp"
#include "cotforge/gateway.hpp"
#include "cotforge/grader.hpp"
#include "cotforge/records.hpp"

namespace cotforge {

struct IngestResult {
  std::vector<Question> questions;
  std::size_t duplicates = 0;     // dropped, first occurrence kept
  std::size_t skipped_lines = 0;  // lenient mode only
};

// Streams and validates questions.jsonl files. Duplicate ids across files
// are deduplicated keeping the first, with a count. strict aborts on the
// first malformed line (named file:line); lenient counts and skips it.
IngestResult ingest(const std::vector<std::filesystem::path>& files, bool strict = true);

struct QuarantineRecord {
  std::string question_id;
  std::string model_id;
  std::string reason;
};

struct GradeAllOptions {
  std::string model_id;
  GradingMethod method = GradingMethod::kPrm;
  int workers = 8;
  double max_quarantine_fraction = 0.05;
  std::filesystem::path journal_path;  // empty disables checkpointing
  DecodingParams probe_params{};       // temperature 0: stable labels across runs
  LevelCuts cuts{};
  std::string default_lang = "python";
};

struct GradeAllResult {
  std::vector<GradedQuestion> graded;  // input order
  std::vector<QuarantineRecord> quarantined;
};

// Probes the base model on every question, verifies, grades, and journals
// progress per question so an interrupted run resumes without re-querying
// completed questions. Per-question backend failures are quarantined; the
// run throws QuarantineError when their fraction exceeds the configured
// bound (after journaling everything).
GradeAllResult grade_all(const std::vector<Question>& questions, CompletionBackend& base_model,
                         StepScorer& scorer, const CodeJudge& judge,
                         const ExecutionLimits& limits, const GradeAllOptions& options);

struct LevelScoreStats {
  std::size_t count = 0;
  double min = 0.0;
  double mean = 0.0;
  double max = 0.0;
};

struct DbStats {
  std::array<std::size_t, kLevelCount> counts{};
  std::array<LevelScoreStats, kLevelCount> scores{};  // easy slot stays empty
  std::size_t total = 0;
};

DbStats stats(const std::vector<GradedQuestion>& db);
std::string render_stats(const DbStats& s);

// journal entry codec, exposed for the resume tests
std::string encode_journal_graded(const GradedQuestion& g);
std::string encode_journal_quarantine(const QuarantineRecord& q);

}  // namespace cotforge
