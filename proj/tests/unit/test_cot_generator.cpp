#include "cotforge/cot_generator.hpp"

#include <set>
#include <sstream>

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

CotGenOptions options_with(int attempts) {
  CotGenOptions o;
  o.teacher_model = "mock-teacher";
  o.attempts = attempts;
  o.workers = 4;
  return o;
}

Question math_q(const std::string& id, const std::string& prompt, const std::string& ref) {
  return {id, Task::kMath, prompt, ref, {}, "t"};
}

}  // namespace

TEST_CASE("split on think tags") {
  auto [reasoning, answer] = split_reasoning("<think>steps</think>\\boxed{9}");
  CHECK(reasoning == "steps");
  CHECK(answer == "\\boxed{9}");
}

TEST_CASE("split falls back to the final answer token") {
  auto [reasoning, answer] = split_reasoning("first this, then that, so \\boxed{5}");
  CHECK(reasoning == "first this, then that, so");
  CHECK(answer == "\\boxed{5}");
}

TEST_CASE("unmatched think tag uses the fallback split") {
  auto [reasoning, answer] = split_reasoning("<think>open only, \\boxed{2}");
  CHECK(answer == "\\boxed{2}");
  CHECK(reasoning.find("open only") != std::string::npos);
}

TEST_CASE("split handles fenced code answers") {
  auto [reasoning, answer] = split_reasoning("plan:\nread, echo\n```sh\ncat\n```");
  CHECK(reasoning == "plan:\nread, echo");
  CHECK(answer == "```sh\ncat\n```");
}

TEST_CASE("split without any token keeps everything as reasoning") {
  auto [reasoning, answer] = split_reasoning("no answer anywhere");
  CHECK(reasoning == "no answer anywhere");
  CHECK(answer.empty());
}

TEST_CASE("first correct attempt is kept") {
  auto mock = MockBackend::from_json_text(
      R"({"completions":{"p1":["<think>easy</think>\\boxed{4}"]}})");
  CodeJudge judge;
  CotOutcome o =
      generate_cot(math_q("q1", "p1", "4"), *mock, judge, quick_limits(), options_with(1));
  CHECK(o.status == CotOutcome::Status::kAccepted);
  REQUIRE(o.record.has_value());
  CHECK(o.record->attempt_index == 1);
  CHECK(o.record->verified);
  CHECK(o.record->reasoning == "easy");
  CHECK(o.record->final_answer == "\\boxed{4}");
  CHECK(o.record->teacher_model == "mock-teacher");
}

TEST_CASE("wrong, wrong, correct lands on attempt three") {
  auto mock = MockBackend::from_json_text(R"({"completions":{"p1":[
    "<think>a</think>\\boxed{1}",
    "<think>b</think>\\boxed{2}",
    "<think>c</think>\\boxed{4}"
  ]}})");
  CodeJudge judge;
  CotOutcome o =
      generate_cot(math_q("q1", "p1", "4"), *mock, judge, quick_limits(), options_with(3));
  CHECK(o.status == CotOutcome::Status::kAccepted);
  REQUIRE(o.record.has_value());
  CHECK(o.record->attempt_index == 3);
  CHECK(o.attempt_verdicts ==
        std::vector<Verdict>{Verdict::kIncorrect, Verdict::kIncorrect, Verdict::kCorrect});
}

TEST_CASE("exhausted attempts reject with all verdicts recorded") {
  auto mock = MockBackend::from_json_text(
      R"({"completions":{"p1":["\\boxed{1}","\\boxed{2}"]}})");
  CodeJudge judge;
  CotOutcome o =
      generate_cot(math_q("q1", "p1", "4"), *mock, judge, quick_limits(), options_with(2));
  CHECK(o.status == CotOutcome::Status::kRejected);
  CHECK_FALSE(o.record.has_value());
  CHECK(o.attempt_verdicts.size() == 2);
}

TEST_CASE("backend failure is an error, not a rejection") {
  auto mock = MockBackend::from_json_text(R"({"completions":{}})");
  CodeJudge judge;
  CotOutcome o = generate_cot(math_q("q1", "p1", "4"), *mock, judge, quick_limits(),
                              options_with(2));
  CHECK(o.status == CotOutcome::Status::kErrored);
  CHECK_FALSE(o.error.empty());
}

TEST_CASE("code questions verify through the judge") {
  auto mock = MockBackend::from_json_text(
      R"({"completions":{"echo-task":["<think>use cat</think>\n```sh\ncat\n```"]}})");
  Question q{"c1", Task::kCode, "echo-task", std::nullopt, {{"hi\n", "hi"}}, "t"};
  CodeJudge judge;
  CotOutcome o = generate_cot(q, *mock, judge, quick_limits(), options_with(1));
  CHECK(o.status == CotOutcome::Status::kAccepted);
  CHECK(o.record->final_answer == "```sh\ncat\n```");
}

TEST_CASE("generate_all keeps input order and accounts for every question") {
  std::string script = R"({"completions":{)";
  std::vector<Question> questions;
  for (int i = 0; i < 20; ++i) {
    std::string id = "q" + std::to_string(i);
    std::string prompt = "prompt number " + std::to_string(i);
    questions.push_back(math_q(id, prompt, std::to_string(i)));
    if (i) script += ",";
    if (i % 5 == 4) {
      script += "\"" + prompt + "\":[\"\\\\boxed{999}\"]";  // rejected
    } else if (i % 7 == 6) {
      // missing from the script entirely: errored
      script += "\"unused-" + std::to_string(i) + "\":[\"x\"]";
    } else {
      script += "\"" + prompt + "\":[\"<think>t</think>\\\\boxed{" + std::to_string(i) +
                "}\"]";
    }
  }
  script += "}}";

  auto mock = MockBackend::from_json_text(script);
  CodeJudge judge;
  GenerateRun run = generate_all(questions, *mock, judge, quick_limits(), options_with(1));

  CHECK(run.accepted.size() + run.rejected.size() + run.errored.size() == questions.size());
  CHECK_FALSE(run.accepted.empty());
  CHECK_FALSE(run.rejected.empty());
  CHECK_FALSE(run.errored.empty());

  // input order is preserved within the accepted list
  std::vector<std::string> accepted_ids;
  for (const CoTRecord& r : run.accepted) accepted_ids.push_back(r.question_id);
  std::vector<std::string> sorted_by_input;
  for (const Question& q : questions) {
    for (const std::string& id : accepted_ids) {
      if (id == q.id) sorted_by_input.push_back(id);
    }
  }
  CHECK(accepted_ids == sorted_by_input);

  // subset property: every output id is a sampled id, no duplicates
  std::set<std::string> input_ids;
  for (const Question& q : questions) input_ids.insert(q.id);
  std::set<std::string> seen;
  for (const std::string& id : accepted_ids) {
    CHECK(input_ids.count(id) == 1);
    CHECK(seen.insert(id).second);
  }
}

TEST_CASE("sft writer emits the think template") {
  CoTRecord r;
  r.question_id = "q1";
  r.prompt = "what is 2+2?";
  r.teacher_model = "t";
  r.reasoning = "two plus two";
  r.final_answer = "\\boxed{4}";
  r.verified = true;
  r.attempt_index = 1;

  std::ostringstream out;
  CHECK(emit_sft({r, r}, out) == 2);
  std::istringstream lines(out.str());
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    SftExample e = decode_sft(line);
    CHECK(e.instruction == "what is 2+2?");
    CHECK(e.output == "<think>two plus two</think>\\boxed{4}");
    ++count;
  }
  CHECK(count == 2);
}

TEST_CASE("writers refuse unverified records and write nothing") {
  CoTRecord good;
  good.question_id = "q1";
  good.prompt = "p";
  good.teacher_model = "t";
  good.reasoning = "r";
  good.final_answer = "a";
  good.verified = true;
  CoTRecord bad = good;
  bad.verified = false;

  std::ostringstream out;
  CHECK_THROWS_AS(emit_sft({good, bad}, out), ContractError);
  CHECK(out.str().empty());
  CHECK_THROWS_AS(emit_cot({bad}, out), ContractError);
  CHECK(out.str().empty());
}

TEST_CASE("empty record list writes an empty valid file") {
  std::ostringstream out;
  CHECK(emit_sft({}, out) == 0);
  CHECK(emit_cot({}, out) == 0);
  CHECK(out.str().empty());
}

TEST_CASE("cot records round-trip through the dataset file") {
  CoTRecord r;
  r.question_id = "q1";
  r.prompt = "p";
  r.teacher_model = "t";
  r.reasoning = "line one\nline two";
  r.final_answer = "\\boxed{1}";
  r.verified = true;
  r.attempt_index = 2;
  std::ostringstream out;
  emit_cot({r}, out);
  std::string line = out.str();
  line.pop_back();  // newline
  CHECK(decode_cot(line) == r);
}

TEST_CASE("sidecar encodings") {
  RejectedQuestion r{"q4", "prompt", {Verdict::kIncorrect, Verdict::kError}};
  std::string line = encode_rejected(r);
  CHECK(line.find("\"q4\"") != std::string::npos);
  CHECK(line.find("incorrect") != std::string::npos);
  ErroredQuestion e{"q5", "timeout talking to backend"};
  CHECK(encode_errored(e).find("timeout") != std::string::npos);
}
