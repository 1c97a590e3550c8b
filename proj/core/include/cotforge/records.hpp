#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cotforge {

// ---------------------------------------------------------------------------
// Core record types. All of them are immutable values once constructed and
// are safe to copy between worker threads. Persistence is line-delimited
// JSON, one record per line, UTF-8; see encode_*/decode_* below.
// ---------------------------------------------------------------------------

enum class Task { kMath, kCode };

enum class Verdict { kCorrect, kIncorrect, kError };

enum class Level { kEasy = 0, kL1, kL2, kL3, kL4, kL5 };
inline constexpr std::size_t kLevelCount = 6;
inline constexpr std::array<Level, kLevelCount> kAllLevels = {
    Level::kEasy, Level::kL1, Level::kL2, Level::kL3, Level::kL4, Level::kL5};

enum class GradingMethod { kPrm, kUt };

enum class DistributionKind { kEval, kCurriculum, kExternal };

std::string to_string(Task t);
std::string to_string(Verdict v);
std::string to_string(Level l);
std::string to_string(GradingMethod m);
std::string to_string(DistributionKind k);

Task task_from_string(std::string_view s);
Verdict verdict_from_string(std::string_view s);
Level level_from_string(std::string_view s);
GradingMethod grading_method_from_string(std::string_view s);
DistributionKind distribution_kind_from_string(std::string_view s);

// One stdin/stdout check for a code question. expected_output is compared
// after trailing-whitespace normalization (see the verifier).
struct TestCase {
  std::string input;
  std::string expected_output;

  friend bool operator==(const TestCase&, const TestCase&) = default;
};

// One task item. Math questions carry a reference answer, code questions a
// nonempty test suite; never both.
struct Question {
  std::string id;
  Task task = Task::kMath;
  std::string prompt;
  std::optional<std::string> reference_answer;
  std::vector<TestCase> tests;
  std::string source;

  friend bool operator==(const Question&, const Question&) = default;
};

// A model's full reasoning text for one question plus what the verifier
// made of it. verdict is kError only when extraction or execution failed,
// never for a wrong-but-well-formed answer.
struct ModelTrace {
  std::string question_id;
  std::string model_id;
  std::string raw_text;
  std::optional<std::string> extracted_answer;
  Verdict verdict = Verdict::kError;

  friend bool operator==(const ModelTrace&, const ModelTrace&) = default;
};

// Easy or a graded level L1..L5. Easy never carries a score; graded levels
// always carry the PRM mean or UT pass rate in [0,1] that produced them.
struct DifficultyLabel {
  Level label = Level::kEasy;
  std::optional<double> score;
  GradingMethod method = GradingMethod::kPrm;

  friend bool operator==(const DifficultyLabel&, const DifficultyLabel&) = default;
};

struct GradedQuestion {
  Question question;
  ModelTrace trace;
  DifficultyLabel difficulty;

  friend bool operator==(const GradedQuestion&, const GradedQuestion&) = default;
};

// Probability mass over the six labels. Sums to 1 within 1e-9. Curriculum
// distributions are strictly decreasing over L1..L5.
struct DifficultyDistribution {
  DistributionKind kind = DistributionKind::kEval;
  std::array<double, kLevelCount> probs{};  // indexed by Level

  double prob(Level l) const { return probs[static_cast<std::size_t>(l)]; }
  double& prob(Level l) { return probs[static_cast<std::size_t>(l)]; }

  friend bool operator==(const DifficultyDistribution&,
                         const DifficultyDistribution&) = default;
};

// Curriculum weights w1..w5, strictly decreasing and positive. easy_weight
// lets an experimenter deliberately include solved questions; it defaults
// to zero mass.
struct CurriculumSpec {
  std::array<double, 5> weights{};
  double easy_weight = 0.0;

  friend bool operator==(const CurriculumSpec&, const CurriculumSpec&) = default;
};

// A teacher reasoning trace for one question. Records persisted to the
// output dataset always have verified = true; unverified records exist only
// in intermediate logs.
struct CoTRecord {
  std::string question_id;
  std::string prompt;
  std::string teacher_model;
  std::string reasoning;
  std::string final_answer;
  bool verified = false;
  int attempt_index = 1;

  friend bool operator==(const CoTRecord&, const CoTRecord&) = default;
};

// One instruction/output pair of the SFT dataset.
struct SftExample {
  std::string instruction;
  std::string output;

  friend bool operator==(const SftExample&, const SftExample&) = default;
};

// ---------------------------------------------------------------------------
// Invariant checks. decode_* call these; module boundaries revalidate
// records they accept from elsewhere. All throw ValidationError naming the
// offending field.
// ---------------------------------------------------------------------------

void validate(const Question& q);
void validate(const DifficultyLabel& l);
void validate(const GradedQuestion& g);
void validate(const DifficultyDistribution& d);
void validate(const CurriculumSpec& s);
void validate(const CoTRecord& r);

// ---------------------------------------------------------------------------
// JSONL codec. Encoding a valid record cannot fail and is byte-deterministic
// (keys are emitted in sorted order). decode(encode(r)) == r field for field.
// ---------------------------------------------------------------------------

std::string encode_question(const Question& q);
std::string encode_graded(const GradedQuestion& g);
std::string encode_distribution(const DifficultyDistribution& d);
std::string encode_cot(const CoTRecord& r);
std::string encode_sft(const SftExample& e);

Question decode_question(std::string_view line);
GradedQuestion decode_graded(std::string_view line);
DifficultyDistribution decode_distribution(std::string_view text);
CoTRecord decode_cot(std::string_view line);
SftExample decode_sft(std::string_view line);

}  // namespace cotforge
