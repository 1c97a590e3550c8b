#include "cotforge/records.hpp"

#include <cmath>
#include <sstream>

#include "cotforge/errors.hpp"
#include "json.hpp"

namespace cotforge {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& msg) { throw ValidationError(msg); }

// json::at with a ValidationError instead of nlohmann's own exception type.
const json& field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) bad(std::string("missing field \"") + key + "\"");
  return *it;
}

std::string get_string(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_string()) bad(std::string("field \"") + key + "\" must be a string");
  return v.get<std::string>();
}

double get_number(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number()) bad(std::string("field \"") + key + "\" must be a number");
  return v.get<double>();
}

json parse_object(std::string_view text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) bad("malformed JSON");
  if (!j.is_object()) bad("expected a JSON object");
  return j;
}

}  // namespace

// --- enum names --------------------------------------------------------------

std::string to_string(Task t) { return t == Task::kMath ? "math" : "code"; }

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kCorrect: return "correct";
    case Verdict::kIncorrect: return "incorrect";
    case Verdict::kError: return "error";
  }
  return "error";
}

std::string to_string(Level l) {
  switch (l) {
    case Level::kEasy: return "easy";
    case Level::kL1: return "l1";
    case Level::kL2: return "l2";
    case Level::kL3: return "l3";
    case Level::kL4: return "l4";
    case Level::kL5: return "l5";
  }
  return "easy";
}

std::string to_string(GradingMethod m) {
  return m == GradingMethod::kPrm ? "prm" : "ut";
}

std::string to_string(DistributionKind k) {
  switch (k) {
    case DistributionKind::kEval: return "eval";
    case DistributionKind::kCurriculum: return "curriculum";
    case DistributionKind::kExternal: return "external";
  }
  return "eval";
}

Task task_from_string(std::string_view s) {
  if (s == "math") return Task::kMath;
  if (s == "code") return Task::kCode;
  bad("unknown task \"" + std::string(s) + "\"");
}

Verdict verdict_from_string(std::string_view s) {
  if (s == "correct") return Verdict::kCorrect;
  if (s == "incorrect") return Verdict::kIncorrect;
  if (s == "error") return Verdict::kError;
  bad("unknown verdict \"" + std::string(s) + "\"");
}

Level level_from_string(std::string_view s) {
  for (Level l : kAllLevels) {
    if (to_string(l) == s) return l;
  }
  bad("unknown label \"" + std::string(s) + "\"");
}

GradingMethod grading_method_from_string(std::string_view s) {
  if (s == "prm") return GradingMethod::kPrm;
  if (s == "ut") return GradingMethod::kUt;
  bad("unknown grading_method \"" + std::string(s) + "\"");
}

DistributionKind distribution_kind_from_string(std::string_view s) {
  if (s == "eval") return DistributionKind::kEval;
  if (s == "curriculum") return DistributionKind::kCurriculum;
  if (s == "external") return DistributionKind::kExternal;
  bad("unknown distribution kind \"" + std::string(s) + "\"");
}

// --- invariants --------------------------------------------------------------

void validate(const Question& q) {
  if (q.id.empty()) bad("question id must be nonempty");
  if (q.task == Task::kMath) {
    if (!q.reference_answer.has_value())
      bad("question \"" + q.id + "\": reference_answer required for math task");
    if (!q.tests.empty())
      bad("question \"" + q.id + "\": tests must be absent for math task");
  } else {
    if (q.tests.empty())
      bad("question \"" + q.id + "\": tests required (nonempty) for code task");
    if (q.reference_answer.has_value())
      bad("question \"" + q.id + "\": reference_answer must be absent for code task");
  }
}

void validate(const DifficultyLabel& l) {
  if (l.label == Level::kEasy) {
    if (l.score.has_value()) bad("easy label must not carry a score");
  } else {
    if (!l.score.has_value()) bad("graded label \"" + to_string(l.label) + "\" requires a score");
    if (*l.score < 0.0 || *l.score > 1.0)
      bad("score " + std::to_string(*l.score) + " outside [0,1]");
  }
}

void validate(const GradedQuestion& g) {
  validate(g.question);
  validate(g.difficulty);
  if (g.trace.question_id != g.question.id)
    bad("trace question_id \"" + g.trace.question_id + "\" does not match question \"" +
        g.question.id + "\"");
  bool easy = g.difficulty.label == Level::kEasy;
  bool correct = g.trace.verdict == Verdict::kCorrect;
  if (easy != correct)
    bad("question \"" + g.question.id +
        "\": label easy and verdict correct must coincide");
}

void validate(const DifficultyDistribution& d) {
  double sum = 0.0;
  for (Level l : kAllLevels) {
    double p = d.prob(l);
    if (p < 0.0) bad("probs[" + to_string(l) + "] is negative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    bad("distribution not normalized: probs sum to " + std::to_string(sum));
  if (d.kind == DistributionKind::kCurriculum) {
    for (std::size_t i = 1; i + 1 < kLevelCount; ++i) {
      if (!(d.probs[i] > d.probs[i + 1]))
        bad("curriculum distribution must be strictly decreasing over l1..l5");
    }
  }
}

void validate(const CurriculumSpec& s) {
  for (double w : s.weights) {
    if (!(w > 0.0)) bad("curriculum weights must be strictly positive");
  }
  for (std::size_t i = 0; i + 1 < s.weights.size(); ++i) {
    if (!(s.weights[i] > s.weights[i + 1]))
      bad("curriculum weights must satisfy w_i > w_{i+1}; got w" +
          std::to_string(i + 1) + " <= w" + std::to_string(i + 2));
  }
  if (s.easy_weight < 0.0) bad("easy_weight must be >= 0");
}

void validate(const CoTRecord& r) {
  if (r.question_id.empty()) bad("cot record id must be nonempty");
  if (r.attempt_index < 1) bad("attempt_index must be >= 1");
}

// --- encoding ----------------------------------------------------------------

namespace {

json question_to_json(const Question& q) {
  json j;
  j["id"] = q.id;
  j["task"] = to_string(q.task);
  j["prompt"] = q.prompt;
  if (q.reference_answer) j["reference_answer"] = *q.reference_answer;
  if (!q.tests.empty()) {
    json tests = json::array();
    for (const TestCase& t : q.tests) {
      tests.push_back({{"input", t.input}, {"expected_output", t.expected_output}});
    }
    j["tests"] = tests;
  }
  j["source"] = q.source;
  return j;
}

Question question_from_json(const json& j) {
  Question q;
  q.id = get_string(j, "id");
  q.task = task_from_string(get_string(j, "task"));
  q.prompt = get_string(j, "prompt");
  if (j.contains("reference_answer")) q.reference_answer = get_string(j, "reference_answer");
  if (j.contains("tests")) {
    const json& tests = j["tests"];
    if (!tests.is_array()) bad("field \"tests\" must be an array");
    for (const json& t : tests) {
      if (!t.is_object()) bad("test case must be an object");
      q.tests.push_back({get_string(t, "input"), get_string(t, "expected_output")});
    }
  }
  q.source = get_string(j, "source");
  validate(q);
  return q;
}

}  // namespace

std::string encode_question(const Question& q) { return question_to_json(q).dump(); }

Question decode_question(std::string_view line) {
  return question_from_json(parse_object(line));
}

std::string encode_graded(const GradedQuestion& g) {
  json j = question_to_json(g.question);
  j["model_id"] = g.trace.model_id;
  j["raw_text"] = g.trace.raw_text;
  if (g.trace.extracted_answer) j["extracted_answer"] = *g.trace.extracted_answer;
  j["verdict"] = to_string(g.trace.verdict);
  j["label"] = to_string(g.difficulty.label);
  if (g.difficulty.score) j["score"] = *g.difficulty.score;
  j["grading_method"] = to_string(g.difficulty.method);
  return j.dump();
}

GradedQuestion decode_graded(std::string_view line) {
  json j = parse_object(line);
  GradedQuestion g;
  g.question = question_from_json(j);
  g.trace.question_id = g.question.id;
  g.trace.model_id = get_string(j, "model_id");
  g.trace.raw_text = get_string(j, "raw_text");
  if (j.contains("extracted_answer")) g.trace.extracted_answer = get_string(j, "extracted_answer");
  g.trace.verdict = verdict_from_string(get_string(j, "verdict"));
  g.difficulty.label = level_from_string(get_string(j, "label"));
  if (j.contains("score")) g.difficulty.score = get_number(j, "score");
  g.difficulty.method = grading_method_from_string(get_string(j, "grading_method"));
  validate(g);
  return g;
}

std::string encode_distribution(const DifficultyDistribution& d) {
  json probs;
  for (Level l : kAllLevels) probs[to_string(l)] = d.prob(l);
  json j;
  j["kind"] = to_string(d.kind);
  j["probs"] = probs;
  return j.dump();
}

DifficultyDistribution decode_distribution(std::string_view text) {
  json j = parse_object(text);
  DifficultyDistribution d;
  d.kind = distribution_kind_from_string(get_string(j, "kind"));
  const json& probs = field(j, "probs");
  if (!probs.is_object()) bad("field \"probs\" must be an object");
  for (Level l : kAllLevels) {
    std::string key = to_string(l);
    auto it = probs.find(key);
    if (it == probs.end()) bad("missing field \"probs." + key + "\"");
    if (!it->is_number()) bad("field \"probs." + key + "\" must be a number");
    d.prob(l) = it->get<double>();
  }
  validate(d);
  return d;
}

std::string encode_cot(const CoTRecord& r) {
  json j;
  j["id"] = r.question_id;
  j["prompt"] = r.prompt;
  j["teacher_model"] = r.teacher_model;
  j["reasoning"] = r.reasoning;
  j["final_answer"] = r.final_answer;
  j["verified"] = r.verified;
  j["attempt_index"] = r.attempt_index;
  return j.dump();
}

CoTRecord decode_cot(std::string_view line) {
  json j = parse_object(line);
  CoTRecord r;
  r.question_id = get_string(j, "id");
  r.prompt = get_string(j, "prompt");
  r.teacher_model = get_string(j, "teacher_model");
  r.reasoning = get_string(j, "reasoning");
  r.final_answer = get_string(j, "final_answer");
  const json& v = field(j, "verified");
  if (!v.is_boolean()) bad("field \"verified\" must be a boolean");
  r.verified = v.get<bool>();
  const json& a = field(j, "attempt_index");
  if (!a.is_number_integer()) bad("field \"attempt_index\" must be an integer");
  r.attempt_index = a.get<int>();
  validate(r);
  return r;
}

std::string encode_sft(const SftExample& e) {
  json j;
  j["instruction"] = e.instruction;
  j["output"] = e.output;
  return j.dump();
}

SftExample decode_sft(std::string_view line) {
  json j = parse_object(line);
  return {get_string(j, "instruction"), get_string(j, "output")};
}

}  // namespace cotforge
