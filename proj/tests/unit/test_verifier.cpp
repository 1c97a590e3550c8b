#include "cotforge/verifier.hpp"

#include "cotforge/errors.hpp"
#include "doctest.h"

using namespace cotforge;

namespace {

ExecutionLimits quick_limits() {
  ExecutionLimits limits;
  limits.wall_time_s = 5.0;
  limits.memory_bytes = 256ull << 20;
  limits.output_bytes = 8ull << 20;
  return limits;
}

Question math_question(const std::string& id, const std::string& reference) {
  return {id, Task::kMath, "compute something", reference, {}, "test"};
}

}  // namespace

TEST_CASE("math verdicts") {
  CodeJudge judge;
  Question q = math_question("m1", "7");

  VerifyResult right = verify_response(q, "thinking... \\boxed{7}", judge, quick_limits());
  CHECK(right.verdict == Verdict::kCorrect);
  CHECK(right.extracted == "7");

  VerifyResult wrong = verify_response(q, "thus \\boxed{8}", judge, quick_limits());
  CHECK(wrong.verdict == Verdict::kIncorrect);

  VerifyResult none = verify_response(q, "I cannot solve this", judge, quick_limits());
  CHECK(none.verdict == Verdict::kError);
  CHECK_FALSE(none.extracted.has_value());
}

TEST_CASE("math equivalence applies through the verdict") {
  CodeJudge judge;
  Question q = math_question("m2", "1/2");
  VerifyResult r = verify_response(q, "the answer is \\boxed{0.5}", judge, quick_limits());
  CHECK(r.verdict == Verdict::kCorrect);
}

TEST_CASE("code verdict requires every test to pass") {
  CodeJudge judge;
  Question q;
  q.id = "c1";
  q.task = Task::kCode;
  q.prompt = "echo the input";
  q.source = "test";
  for (int i = 0; i < 9; ++i) q.tests.push_back({"", "x"});
  q.tests.push_back({"", "y"});  // constant output fails this one

  VerifyResult r =
      verify_response(q, "use this:\n```sh\necho x\n```", judge, quick_limits());
  REQUIRE(r.report.has_value());
  CHECK(r.report->passed == 9);
  CHECK(r.report->total == 10);
  CHECK(r.verdict == Verdict::kIncorrect);

  q.tests.pop_back();
  q.tests.push_back({"", "x"});
  VerifyResult all = verify_response(q, "```sh\necho x\n```", judge, quick_limits());
  CHECK(all.report->passed == 10);
  CHECK(all.verdict == Verdict::kCorrect);
}

TEST_CASE("code trace without a fenced block is an error verdict") {
  CodeJudge judge;
  Question q;
  q.id = "c2";
  q.task = Task::kCode;
  q.prompt = "p";
  q.source = "s";
  q.tests.push_back({"", ""});
  VerifyResult r = verify_response(q, "here is prose, no code", judge, quick_limits());
  CHECK(r.verdict == Verdict::kError);
  CHECK_FALSE(r.report.has_value());
}

TEST_CASE("untagged fences fall back to the default language") {
  CodeJudge judge;
  Question q;
  q.id = "c3";
  q.task = Task::kCode;
  q.prompt = "p";
  q.source = "s";
  q.tests.push_back({"5\n", "5"});
  VerifyResult r = verify_response(q, "```\nprint(input())\n```", judge, quick_limits(),
                                   "python");
  CHECK(r.verdict == Verdict::kCorrect);
  CHECK(r.lang == "python");
}

TEST_CASE("make_trace carries the verifier outcome") {
  CodeJudge judge;
  Question q = math_question("m3", "4");
  VerifyResult r = verify_response(q, "\\boxed{4}", judge, quick_limits());
  ModelTrace t = make_trace(q, "base-model", "\\boxed{4}", r);
  CHECK(t.question_id == "m3");
  CHECK(t.model_id == "base-model");
  CHECK(t.extracted_answer == "4");
  CHECK(t.verdict == Verdict::kCorrect);
}
