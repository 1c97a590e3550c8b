#include "cotforge/verifier.hpp"

#include "cotforge/answer_extract.hpp"
#include "cotforge/errors.hpp"
#include "cotforge/math_answer.hpp"

namespace cotforge {

VerifyResult verify_response(const Question& question, const std::string& raw_text,
                             const CodeJudge& judge, const ExecutionLimits& limits,
                             const std::string& default_lang) {
  VerifyResult result;
  if (question.task == Task::kMath) {
    auto answer = extract_final_answer(raw_text, Task::kMath);
    if (!answer) return result;  // verdict stays error
    result.extracted = *answer;
    if (!question.reference_answer) {
      throw ContractError("math question \"" + question.id + "\" has no reference answer");
    }
    result.verdict = math_equivalent(*answer, *question.reference_answer)
                         ? Verdict::kCorrect
                         : Verdict::kIncorrect;
    return result;
  }

  auto block = extract_last_code_block(raw_text);
  if (!block) return result;
  result.extracted = block->source;
  std::string lang = block->lang.empty() ? default_lang : block->lang;
  if (!judge.supports(lang)) lang = default_lang;
  result.lang = lang;
  result.report = judge.run(block->source, lang, question.tests, limits);
  result.verdict = result.report->passed == result.report->total ? Verdict::kCorrect
                                                                 : Verdict::kIncorrect;
  return result;
}

Verdict verdict(const ModelTrace& trace, const Question& question, const CodeJudge& judge,
                const ExecutionLimits& limits) {
  return verify_response(question, trace.raw_text, judge, limits).verdict;
}

ModelTrace make_trace(const Question& question, const std::string& model_id,
                      const std::string& raw_text, const VerifyResult& result) {
  ModelTrace trace;
  trace.question_id = question.id;
  trace.model_id = model_id;
  trace.raw_text = raw_text;
  trace.extracted_answer = result.extracted;
  trace.verdict = result.verdict;
  return trace;
}

}  // namespace cotforge
