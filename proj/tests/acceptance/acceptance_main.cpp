// Acceptance suite: deterministic, mock-backed checks of the pipeline's
// contracts. Each criterion prints one PASS/FAIL line; the binary exits
// nonzero if any fail.

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cotforge/adaptive_db.hpp"
#include "cotforge/answer_extract.hpp"
#include "cotforge/cot_generator.hpp"
#include "cotforge/distribution.hpp"
#include "cotforge/errors.hpp"
#include "cotforge/gateway.hpp"
#include "cotforge/grader.hpp"
#include "cotforge/jsonl.hpp"
#include "cotforge/math_answer.hpp"
#include "cotforge/records.hpp"
#include "cotforge/sampler.hpp"
#include "cotforge/verifier.hpp"
#include "support/golden_math_pairs.hpp"
#include "support/quota_oracle.hpp"
#include "support/rational_oracle.hpp"
#include "support/run_cli.hpp"
#include "support/tmpdir.hpp"

using namespace cotforge;
namespace fs = std::filesystem;

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void expect(bool condition, const std::string& message) {
  if (!condition) throw Failure(message);
}

std::string fixture(const std::string& name) {
  return std::string(COTFORGE_FIXTURES) + "/" + name;
}

ExecutionLimits default_limits() {
  ExecutionLimits limits;
  limits.wall_time_s = 5.0;
  limits.memory_bytes = 256ull << 20;
  limits.output_bytes = 8ull << 20;
  return limits;
}

std::size_t count_lines(const fs::path& file) {
  std::ifstream in(file);
  expect(bool(in), "cannot open " + file.string());
  std::size_t n = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) ++n;
  }
  return n;
}

bool files_equal(const fs::path& a, const fs::path& b) {
  return read_text_file(a) == read_text_file(b);
}

// ---- criterion 1: verifier golden suite vs the exact rational oracle ----

void criterion_verifier_golden() {
  const auto& pairs = testing::golden_math_pairs();
  expect(pairs.size() >= 50, "need at least 50 curated pairs");

  auto start = std::chrono::steady_clock::now();
  std::size_t oracle_checked = 0;
  for (const auto& p : pairs) {
    bool got = math_equivalent(p.a, p.b);
    expect(got == p.equivalent,
           std::string("frozen verdict mismatch for (") + p.a + ", " + p.b + ")");
    if (auto expected = oracle::equivalent(p.a, p.b)) {
      expect(got == *expected,
             std::string("oracle disagreement for (") + p.a + ", " + p.b + ")");
      ++oracle_checked;
    }
  }
  double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  expect(oracle_checked >= 40, "oracle covered too few pairs");
  expect(elapsed < 1.0, "golden suite took " + std::to_string(elapsed) + "s, budget 1s");
}

// ---- criterion 2: judge fixtures {2/2, 1/2, 0/2-timeout} ----

void criterion_judge_suite() {
  CodeJudge judge({{"sh", "sh {src}"}}, JudgeOptions{false, 2});
  Question q;
  q.id = "judge-fixture";
  q.task = Task::kCode;
  q.prompt = "echo stdin";
  q.source = "acceptance";
  q.tests = {{"a\n", "a"}, {"b\n", "b"}};

  ExecutionLimits limits = default_limits();
  VerifyResult all = verify_response(q, "```sh\ncat\n```", judge, limits);
  expect(all.report && all.report->passed == 2 && all.report->total == 2,
         "all-pass program must report 2/2");
  expect(all.verdict == Verdict::kCorrect, "all-pass program must verify correct");

  VerifyResult partial = verify_response(q, "```sh\necho a\n```", judge, limits);
  expect(partial.report && partial.report->passed == 1 && partial.report->total == 2,
         "partial program must report 1/2");
  expect(partial.verdict == Verdict::kIncorrect,
         "partial passes are incorrect under the all-tests rule");

  limits.wall_time_s = 1.0;
  auto start = std::chrono::steady_clock::now();
  VerifyResult loop = verify_response(q, "```sh\nwhile :; do :; done\n```", judge, limits);
  double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  expect(loop.report && loop.report->passed == 0 && loop.report->total == 2,
         "looping program must report 0/2");
  for (CaseOutcome o : loop.report->outcomes) {
    expect(o == CaseOutcome::kTimeout, "looping program outcomes must be timeout");
  }
  expect(loop.verdict == Verdict::kIncorrect, "looping program is not correct");
  // the two cases run concurrently under a 1s wall clock
  expect(elapsed < 1.5, "wall-time overrun " + std::to_string(elapsed - 1.0) +
                            "s exceeds the 0.5s budget");
}

// ---- criterion 3: grader partition over 10,000 scores ----

void criterion_grader_partition() {
  std::mt19937_64 rng(2024);
  std::vector<double> scores;
  scores.reserve(10000);
  for (int i = 0; i < 10000; ++i) {
    scores.push_back(static_cast<double>(rng() % 1000001) / 1000000.0);
  }
  for (double s : scores) {
    Level l = score_to_level(s);
    expect(l != Level::kEasy, "scores grade to L1..L5 only");
  }
  std::sort(scores.begin(), scores.end());
  for (std::size_t i = 0; i + 1 < scores.size(); ++i) {
    expect(static_cast<int>(score_to_level(scores[i])) >=
               static_cast<int>(score_to_level(scores[i + 1])),
           "anti-monotonicity violated");
  }
  const std::pair<double, Level> boundary[] = {
      {0.0, Level::kL5}, {0.2, Level::kL4}, {0.4, Level::kL3},
      {0.6, Level::kL2}, {0.8, Level::kL1}, {1.0, Level::kL1},
  };
  for (auto [score, level] : boundary) {
    expect(score_to_level(score) == level,
           "boundary " + std::to_string(score) + " maps wrong");
  }
}

// ---- criterion 4: Eq.-1 dichotomy on a 600-question scripted run ----

void criterion_dichotomy_600() {
  testing::TempDir dir;
  std::vector<Question> questions;
  std::ostringstream completions;
  std::ostringstream step_scores;
  const double group_scores[5] = {0.9, 0.7, 0.5, 0.3, 0.1};

  bool first = true;
  for (int i = 0; i < 600; ++i) {
    std::string id = "s" + std::to_string(i);
    std::string prompt = "scripted question " + std::to_string(i);
    questions.push_back({id, Task::kMath, prompt, std::to_string(i), {}, "acceptance"});
    int group = i / 100;  // 0: correct; 1..5: wrong with a pinned score
    if (!first) {
      completions << ",";
      step_scores << ",";
    }
    first = false;
    if (group == 0) {
      completions << "\"" << prompt << "\":[\"the answer is \\\\boxed{" << i << "}\"]";
      step_scores << "\"" << prompt << "\":{\"constant\":0.5}";  // never consulted
    } else {
      completions << "\"" << prompt << "\":[\"try one\\n\\nthen \\\\boxed{" << i + 1
                  << "}\"]";
      step_scores << "\"" << prompt << "\":{\"constant\":" << group_scores[group - 1]
                  << "}";
    }
  }
  std::string script = "{\"completions\":{" + completions.str() + "},\"step_scores\":{" +
                       step_scores.str() + "}}";
  auto mock = MockBackend::from_json_text(script);

  GradeAllOptions options;
  options.model_id = "dichotomy-model";
  options.workers = 8;
  options.journal_path = dir.file("journal.jsonl");
  CodeJudge judge;
  GradeAllResult result =
      grade_all(questions, *mock, *mock, judge, default_limits(), options);
  expect(result.graded.size() == 600, "expected 600 graded records");
  expect(result.quarantined.empty(), "no quarantine expected");

  std::ostringstream file;
  for (const GradedQuestion& g : result.graded) file << encode_graded(g) << "\n";
  std::string path = dir.write("graded.jsonl", file.str()).string();

  std::array<std::size_t, kLevelCount> counts{};
  for_each_jsonl_line(path, [&](std::size_t, const std::string& line) {
    GradedQuestion g = decode_graded(line);
    bool easy = g.difficulty.label == Level::kEasy;
    bool correct = g.trace.verdict == Verdict::kCorrect;
    expect(easy == correct, "label=easy must coincide with verdict=correct");
    counts[static_cast<std::size_t>(g.difficulty.label)]++;
  });
  for (std::size_t c : counts) expect(c == 100, "each label must hold exactly 100");

  DifficultyDistribution d = build_eval_distribution(result.graded);
  for (Level l : kAllLevels) {
    expect(std::abs(d.prob(l) - 1.0 / 6.0) < 1e-15, "eval distribution must be uniform 1/6");
  }
}

// ---- criterion 5: curriculum normalization ----

void criterion_curriculum() {
  CurriculumSpec spec;
  spec.weights = {5, 4, 3, 2, 1};
  DifficultyDistribution d = build_curriculum_distribution(spec);
  const double expected[5] = {1.0 / 3.0, 4.0 / 15.0, 1.0 / 5.0, 2.0 / 15.0, 1.0 / 15.0};
  for (int i = 0; i < 5; ++i) {
    expect(std::abs(d.probs[i + 1] - expected[i]) < 1e-12,
           "weight normalization off at level " + std::to_string(i + 1));
  }

  CurriculumSpec flat;
  flat.weights = {1, 1, 1, 1, 1};
  bool rejected = false;
  try {
    build_curriculum_distribution(flat);
  } catch (const ValidationError&) {
    rejected = true;
  }
  expect(rejected, "equal weights must be rejected");

  CurriculumSpec scaled;
  scaled.weights = {5000, 4000, 3000, 2000, 1000};
  expect(build_curriculum_distribution(scaled) == d,
         "scaling weights by 1000 must not change the distribution");
}

// ---- criterion 6: sampler quotas, determinism, conservation ----

void criterion_sampler() {
  std::vector<GradedQuestion> db;
  const std::size_t sizes[kLevelCount] = {2000, 2000, 2000, 2000, 1000, 1000};
  int idx = 0;
  for (std::size_t l = 0; l < kLevelCount; ++l) {
    for (std::size_t k = 0; k < sizes[l]; ++k) {
      GradedQuestion g;
      g.question = {"d" + std::to_string(idx++), Task::kMath, "p", "1", {}, "a"};
      g.trace = {g.question.id, "m", "r", "1",
                 l == 0 ? Verdict::kCorrect : Verdict::kIncorrect};
      g.difficulty = {static_cast<Level>(l),
                      l == 0 ? std::optional<double>() : std::optional<double>(0.5),
                      GradingMethod::kPrm};
      db.push_back(std::move(g));
    }
  }
  DifficultyDistribution target;
  target.kind = DistributionKind::kEval;
  target.probs = {0.30, 0.25, 0.20, 0.15, 0.07, 0.03};

  const std::size_t n = 2000;
  auto picked = sample(db, target, n, 17, ShortfallPolicy::kRedistribute);
  expect(picked.size() == n, "ample buckets must fill n exactly");

  auto expected = testing::quota_oracle(n, target.probs);
  std::array<std::size_t, kLevelCount> counts{};
  std::set<std::string> ids;
  for (const auto& g : picked) {
    counts[static_cast<std::size_t>(g.difficulty.label)]++;
    expect(ids.insert(g.question.id).second, "duplicate id sampled");
  }
  expect(counts == expected, "per-label counts must equal largest-remainder quotas");

  expect(check_fit(picked, target) <= 2.0 * 5.0 / static_cast<double>(n) + 1e-12,
         "check_fit exceeds the rounding bound");

  auto again = sample(db, target, n, 17, ShortfallPolicy::kRedistribute);
  for (std::size_t i = 0; i < n; ++i) {
    expect(picked[i].question.id == again[i].question.id, "same seed must reproduce ids");
  }

  // a starving bucket: redistribute must still return exactly n
  std::vector<GradedQuestion> scarce(db.begin(), db.begin() + 50);  // 50 easy
  for (std::size_t i = 2000; i < db.size(); ++i) scarce.push_back(db[i]);
  DifficultyDistribution uniform;
  uniform.kind = DistributionKind::kEval;
  uniform.probs.fill(1.0 / 6.0);
  auto filled = sample(scarce, uniform, 600, 9, ShortfallPolicy::kRedistribute);
  expect(filled.size() == 600, "redistribute must conserve n when supply suffices");
}

// ---- criterion 7: end-to-end mock pipeline on the shipped fixtures ----

void run_pipeline_into(const std::string& dir) {
  auto r = testing::run_cli({
      "--mock", fixture("demo/mock.json"), "--limits.wall-time", "5", "--judge.workers",
      "2", "pipeline", "--questions", fixture("demo/questions.jsonl"), "--model",
      "demo-base", "--teacher", "demo-teacher", "--mode", "eval", "--n", "60", "--seed",
      "17", "--out-dir", dir,
  });
  expect(r.exit_code == 0, "pipeline exited " + std::to_string(r.exit_code) + "\n" + r.output);
}

void criterion_pipeline() {
  testing::TempDir scratch;
  std::string run_a = (scratch.path / "a").string();
  std::string run_b = (scratch.path / "b").string();

  auto start = std::chrono::steady_clock::now();
  run_pipeline_into(run_a);
  double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  expect(elapsed < 60.0, "pipeline took " + std::to_string(elapsed) + "s, budget 60s");

  run_pipeline_into(run_b);
  for (const char* f : {"graded.jsonl", "distribution.json", "sampled.jsonl", "cot.jsonl",
                        "sft.jsonl", "rejects.jsonl", "errors.jsonl"}) {
    expect(files_equal(fs::path(run_a) / f, fs::path(run_b) / f),
           std::string("output differs across runs: ") + f);
  }

  // accounting: accepted + rejected + errored = sampled
  std::size_t sampled = count_lines(fs::path(run_a) / "sampled.jsonl");
  std::size_t accepted = count_lines(fs::path(run_a) / "cot.jsonl");
  std::size_t rejected = count_lines(fs::path(run_a) / "rejects.jsonl");
  std::size_t errored = count_lines(fs::path(run_a) / "errors.jsonl");
  expect(accepted + rejected + errored == sampled,
         "accepted+rejected+errored must equal the sampled count");
  expect(count_lines(fs::path(run_a) / "sft.jsonl") == accepted,
         "sft line count must match cot line count");

  // every emitted record re-verifies as correct against its question
  std::map<std::string, Question> by_id;
  for_each_jsonl_line(fixture("demo/questions.jsonl"),
                      [&](std::size_t, const std::string& line) {
                        Question q = decode_question(line);
                        by_id[q.id] = q;
                      });
  CodeJudge judge;
  for_each_jsonl_line(
      fs::path(run_a) / "cot.jsonl", [&](std::size_t, const std::string& line) {
        CoTRecord r = decode_cot(line);
        expect(r.verified, "emitted record must be verified");
        auto it = by_id.find(r.question_id);
        expect(it != by_id.end(), "emitted record for unknown question " + r.question_id);
        VerifyResult vr =
            verify_response(it->second, r.final_answer, judge, default_limits());
        expect(vr.verdict == Verdict::kCorrect,
               "emitted answer fails independent re-verification for " + r.question_id);
      });
  for_each_jsonl_line(fs::path(run_a) / "sft.jsonl",
                      [&](std::size_t, const std::string& line) {
                        SftExample e = decode_sft(line);
                        expect(e.output.rfind("<think>", 0) == 0,
                               "sft output must carry the think template");
                      });
}

// ---- criterion 8: kill the grading run mid-flight, resume, byte-compare ----

void criterion_resume() {
  testing::TempDir scratch;
  fs::path oracle_out = scratch.path / "oracle.graded.jsonl";
  fs::path victim_out = scratch.path / "victim.graded.jsonl";
  fs::path victim_journal = scratch.path / "victim.graded.jsonl.journal";

  // uninterrupted oracle run; the fast and slow mocks share all responses
  auto oracle = testing::run_cli({"--mock", fixture("demo/mock.json"), "grade",
                                  "--questions", fixture("demo/questions.jsonl"), "--model",
                                  "demo-base", "--out", oracle_out.string(), "--workers",
                                  "4"});
  expect(oracle.exit_code == 0, "oracle grade run failed:\n" + oracle.output);

  std::string slow_mock = fixture("demo/mock_slow.json");
  std::string questions = fixture("demo/questions.jsonl");
  std::string out_arg = victim_out.string();

  pid_t pid = fork();
  expect(pid >= 0, "fork failed");
  if (pid == 0) {
    int null_fd = open("/dev/null", O_WRONLY);
    dup2(null_fd, STDOUT_FILENO);
    dup2(null_fd, STDERR_FILENO);
    execl(COTFORGE_BIN, COTFORGE_BIN, "--mock", slow_mock.c_str(), "grade", "--questions",
          questions.c_str(), "--model", "demo-base", "--out", out_arg.c_str(), "--workers",
          "2", static_cast<char*>(nullptr));
    _exit(127);
  }
  std::size_t seen = 0;
  for (int poll = 0; poll < 1500; ++poll) {
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
    if (fs::exists(victim_journal)) {
      seen = count_lines(victim_journal);
      if (seen >= 20) break;
    }
  }
  kill(pid, SIGKILL);
  int status = 0;
  waitpid(pid, &status, 0);
  expect(seen >= 20, "journal never reached 20 entries before the kill");
  std::size_t after_kill = count_lines(victim_journal);
  expect(after_kill < 200, "run finished before the kill; nothing was interrupted");
  expect(!fs::exists(victim_out), "final output must not exist after the kill");

  auto resumed = testing::run_cli({"--mock", fixture("demo/mock.json"), "grade",
                                   "--questions", questions, "--model", "demo-base",
                                   "--out", out_arg, "--workers", "4"});
  expect(resumed.exit_code == 0, "resume run failed:\n" + resumed.output);
  expect(count_lines(victim_journal) == 200, "journal must cover every question");
  expect(files_equal(oracle_out, victim_out),
         "resumed graded.jsonl differs from the uninterrupted oracle run");
}

// ---- criterion 9: the three ablation configurations ----

void criterion_ablations() {
  testing::TempDir scratch;

  // (a) prm vs ut grading of the same code questions
  std::ostringstream code_only;
  for_each_jsonl_line(fixture("demo/questions.jsonl"),
                      [&](std::size_t, const std::string& line) {
                        Question q = decode_question(line);
                        if (q.task == Task::kCode) code_only << encode_question(q) << "\n";
                      });
  std::string code_file = scratch.write("code_questions.jsonl", code_only.str()).string();

  std::string prm_graded = (scratch.path / "prm.graded.jsonl").string();
  std::string ut_graded = (scratch.path / "ut.graded.jsonl").string();
  auto prm_run = testing::run_cli({"--mock", fixture("demo/mock.json"), "grade",
                                   "--questions", code_file, "--model", "demo-base",
                                   "--method", "prm", "--out", prm_graded});
  expect(prm_run.exit_code == 0, "prm grading failed:\n" + prm_run.output);
  auto ut_run = testing::run_cli({"--mock", fixture("demo/mock.json"), "grade",
                                  "--questions", code_file, "--model", "demo-base",
                                  "--method", "ut", "--out", ut_graded});
  expect(ut_run.exit_code == 0, "ut grading failed:\n" + ut_run.output);

  auto prm_records = read_jsonl<GradedQuestion>(prm_graded, decode_graded);
  auto ut_records = read_jsonl<GradedQuestion>(ut_graded, decode_graded);
  expect(prm_records.size() == ut_records.size() && !prm_records.empty(),
         "both gradings must cover the same questions");
  std::set<std::string> prm_easy, ut_easy;
  bool some_label_differs = false;
  for (std::size_t i = 0; i < prm_records.size(); ++i) {
    expect(prm_records[i].question.id == ut_records[i].question.id, "id order mismatch");
    if (prm_records[i].difficulty.label == Level::kEasy) {
      prm_easy.insert(prm_records[i].question.id);
    }
    if (ut_records[i].difficulty.label == Level::kEasy) {
      ut_easy.insert(ut_records[i].question.id);
    }
    if (prm_records[i].difficulty.label != ut_records[i].difficulty.label) {
      some_label_differs = true;
    }
  }
  expect(prm_easy == ut_easy, "method choice must never change the easy set");
  expect(some_label_differs, "prm and ut gradings should differ on some graded level");

  std::string dist_a = (scratch.path / "prm.dist.json").string();
  expect(testing::run_cli({"distribution", "--mode", "eval", "--graded", prm_graded,
                           "--out", dist_a})
                 .exit_code == 0,
         "prm eval distribution failed");
  std::string sampled_prm = (scratch.path / "prm.sampled.jsonl").string();
  std::string sampled_ut = (scratch.path / "ut.sampled.jsonl").string();
  expect(testing::run_cli({"sample", "--graded", prm_graded, "--dist", dist_a, "--n", "10",
                           "--seed", "3", "--shortfall", "redistribute", "--out",
                           sampled_prm})
                 .exit_code == 0,
         "sampling the prm grading failed");
  expect(testing::run_cli({"sample", "--graded", ut_graded, "--dist", dist_a, "--n", "10",
                           "--seed", "3", "--shortfall", "redistribute", "--out",
                           sampled_ut})
                 .exit_code == 0,
         "sampling the ut grading failed");
  expect(!files_equal(sampled_prm, sampled_ut), "(a) sampled outputs must be distinct");
  read_jsonl<GradedQuestion>(sampled_prm, decode_graded);  // schema-valid
  read_jsonl<GradedQuestion>(sampled_ut, decode_graded);

  // a full graded db shared by (b) and (c)
  std::string full_graded = (scratch.path / "full.graded.jsonl").string();
  expect(testing::run_cli({"--mock", fixture("demo/mock.json"), "grade", "--questions",
                           fixture("demo/questions.jsonl"), "--model", "demo-base", "--out",
                           full_graded})
                 .exit_code == 0,
         "full grading failed");
  std::string own_dist = (scratch.path / "own.dist.json").string();
  expect(testing::run_cli({"distribution", "--mode", "eval", "--graded", full_graded,
                           "--out", own_dist})
                 .exit_code == 0,
         "own eval distribution failed");

  // (b) transfer: a distribution produced by another grading run drives
  // this db's sampling through the external loader
  std::string transferred = (scratch.path / "transferred.dist.json").string();
  expect(testing::run_cli({"distribution", "--mode", "external", "--from", dist_a, "--out",
                           transferred})
                 .exit_code == 0,
         "external load failed");
  DifficultyDistribution ext = decode_distribution(read_text_file(transferred));
  expect(ext.kind == DistributionKind::kExternal, "transferred kind must be external");

  std::string sampled_own = (scratch.path / "own.sampled.jsonl").string();
  std::string sampled_ext = (scratch.path / "ext.sampled.jsonl").string();
  expect(testing::run_cli({"sample", "--graded", full_graded, "--dist", own_dist, "--n",
                           "60", "--seed", "17", "--shortfall", "redistribute", "--out",
                           sampled_own})
                 .exit_code == 0,
         "sampling with the own distribution failed");
  expect(testing::run_cli({"sample", "--graded", full_graded, "--dist", transferred, "--n",
                           "60", "--seed", "17", "--shortfall", "redistribute", "--out",
                           sampled_ext})
                 .exit_code == 0,
         "sampling with the transferred distribution failed");
  expect(!files_equal(sampled_own, sampled_ext), "(b) sampled outputs must be distinct");
  read_jsonl<GradedQuestion>(sampled_own, decode_graded);
  read_jsonl<GradedQuestion>(sampled_ext, decode_graded);

  // (c) Option 1 (eval) vs Option 2 (curriculum weights)
  std::string curriculum = (scratch.path / "curriculum.dist.json").string();
  expect(testing::run_cli({"distribution", "--mode", "curriculum", "--weights", "5,4,3,2,1",
                           "--out", curriculum})
                 .exit_code == 0,
         "curriculum distribution failed");
  std::string sampled_cur = (scratch.path / "cur.sampled.jsonl").string();
  expect(testing::run_cli({"sample", "--graded", full_graded, "--dist", curriculum, "--n",
                           "60", "--seed", "17", "--shortfall", "redistribute", "--out",
                           sampled_cur})
                 .exit_code == 0,
         "sampling with the curriculum distribution failed");
  expect(!files_equal(sampled_own, sampled_cur), "(c) sampled outputs must be distinct");
  read_jsonl<GradedQuestion>(sampled_cur, decode_graded);
}

struct Criterion {
  int number;
  const char* title;
  std::function<void()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "verifier golden suite agrees with the exact rational oracle",
       criterion_verifier_golden},
      {2, "judge fixtures report {2/2, 1/2, 0/2-timeout} with bounded overrun",
       criterion_judge_suite},
      {3, "grader buckets partition [0,1] and are anti-monotone over 10k scores",
       criterion_grader_partition},
      {4, "600-question mock run holds the easy/correct dichotomy and uniform eval mass",
       criterion_dichotomy_600},
      {5, "curriculum weights normalize, reject flat orderings, ignore scaling",
       criterion_curriculum},
      {6, "sampler meets largest-remainder quotas with seeded determinism",
       criterion_sampler},
      {7, "mock pipeline is fast, pure, accounted, and byte-stable", criterion_pipeline},
      {8, "killed grading run resumes to a byte-identical graded.jsonl", criterion_resume},
      {9, "prm/ut, distribution transfer, and option 1/2 ablations are expressible",
       criterion_ablations},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    try {
      c.run();
      std::cout << "PASS  criterion " << c.number << ": " << c.title << "\n";
    } catch (const std::exception& e) {
      ++failures;
      std::cout << "FAIL  criterion " << c.number << ": " << c.title << "\n      "
                << e.what() << "\n";
    }
  }
  if (failures) {
    std::cout << failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all " << criteria.size() << " acceptance criteria passed\n";
  return 0;
}
