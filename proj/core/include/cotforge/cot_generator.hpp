#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "cotforge/code_judge.hpp"
#include "cotforge/gateway.hpp"
#include "cotforge/records.hpp"

namespace cotforge {

struct CotGenOptions {
  std::string teacher_model;
  int attempts = 1;
  int workers = 8;
  DecodingParams params{0.6, std::nullopt};
  std::string default_lang = "python";
};

// What happened to one sampled question: a verified record, a rejection
// with the verdict of every attempt, or a backend failure.
struct CotOutcome {
  enum class Status { kAccepted, kRejected, kErrored };
  Status status = Status::kErrored;
  std::optional<CoTRecord> record;
  std::vector<Verdict> attempt_verdicts;
  std::string error;
};

// Queries the teacher up to `attempts` times and keeps the first response
// the verifier confirms. Backend failures surface as kErrored, distinct
// from a rejection.
CotOutcome generate_cot(const Question& question, CompletionBackend& teacher,
                        const CodeJudge& judge, const ExecutionLimits& limits,
                        const CotGenOptions& options);

struct RejectedQuestion {
  std::string question_id;
  std::string prompt;
  std::vector<Verdict> attempt_verdicts;
};

struct ErroredQuestion {
  std::string question_id;
  std::string reason;
};

struct GenerateRun {
  std::vector<CoTRecord> accepted;  // input order
  std::vector<RejectedQuestion> rejected;
  std::vector<ErroredQuestion> errored;
};

// generate_cot over a whole sampled set with a worker pool; outputs keep
// the input order regardless of completion order.
GenerateRun generate_all(const std::vector<Question>& sampled, CompletionBackend& teacher,
                         const CodeJudge& judge, const ExecutionLimits& limits,
                         const CotGenOptions& options);

// Splits a teacher response into (reasoning, final answer). A matched
// <think>...</think> span wins; otherwise the text before the final answer
// token is the reasoning and the token itself the answer.
std::pair<std::string, std::string> split_reasoning(const std::string& raw_text);

// Writers refuse any unverified record and write nothing in that case.
std::size_t emit_cot(const std::vector<CoTRecord>& records, std::ostream& out);
std::size_t emit_sft(const std::vector<CoTRecord>& records, std::ostream& out);

std::string encode_rejected(const RejectedQuestion& r);
std::string encode_errored(const ErroredQuestion& e);

}  // namespace cotforge
