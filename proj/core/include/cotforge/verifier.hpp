#pragma once

#include <optional>
#include <string>

#include "cotforge/code_judge.hpp"
#include "cotforge/records.hpp"

namespace cotforge {

// Everything the correctness check learned about one response.
struct VerifyResult {
  Verdict verdict = Verdict::kError;
  std::optional<std::string> extracted;  // answer text (math) or program source (code)
  std::optional<std::string> lang;       // code fence info string
  std::optional<TestReport> report;      // code only, absent when nothing ran
};

// Task-specific correctness: math compares the extracted answer against the
// reference; code must pass every test. Extraction failure yields an error
// verdict, never incorrect.
VerifyResult verify_response(const Question& question, const std::string& raw_text,
                             const CodeJudge& judge, const ExecutionLimits& limits,
                             const std::string& default_lang = "python");

Verdict verdict(const ModelTrace& trace, const Question& question, const CodeJudge& judge,
                const ExecutionLimits& limits);

// Builds the full trace record for a response.
ModelTrace make_trace(const Question& question, const std::string& model_id,
                      const std::string& raw_text, const VerifyResult& result);

}  // namespace cotforge
