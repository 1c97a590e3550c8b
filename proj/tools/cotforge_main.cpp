// cotforge: builds model-adaptive chain-of-thought SFT datasets.
//
// Stages: grade questions against a base model, build a difficulty
// distribution, sample to match it, generate verified teacher CoT records.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cotforge/adaptive_db.hpp"
#include "cotforge/cot_generator.hpp"
#include "cotforge/distribution.hpp"
#include "cotforge/errors.hpp"
#include "cotforge/gateway.hpp"
#include "cotforge/jsonl.hpp"
#include "cotforge/records.hpp"
#include "cotforge/sampler.hpp"
#include "cotforge/verifier.hpp"

namespace fs = std::filesystem;
using namespace cotforge;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitValidation = 3;
constexpr int kExitBackend = 4;
constexpr int kExitQuarantine = 5;

struct GlobalOptions {
  // gateway
  std::string endpoint;
  std::string teacher_endpoint;
  std::string scorer_endpoint;
  std::string api_key_env = "COTFORGE_API_KEY";
  double timeout_s = 120.0;
  int max_inflight = 8;
  int retry_attempts = 3;
  double backoff_base_s = 0.5;
  std::string mock_script;

  // judge limits
  double wall_time_s = 10.0;
  double memory_mb = 512.0;
  double output_mb = 16.0;

  // judge commands
  std::vector<std::string> lang_commands;  // "tag=command {src}"
  std::string default_lang = "python";
  bool exact_output = false;
  int judge_workers = 2;

  // grader
  std::vector<double> cuts{0.2, 0.4, 0.6, 0.8};

  // decoding
  double probe_temperature = 0.0;
  double teacher_temperature = 0.6;
};

ExecutionLimits make_limits(const GlobalOptions& g) {
  ExecutionLimits limits;
  limits.wall_time_s = g.wall_time_s;
  limits.memory_bytes = static_cast<std::uint64_t>(g.memory_mb * 1024.0 * 1024.0);
  limits.output_bytes = static_cast<std::uint64_t>(g.output_mb * 1024.0 * 1024.0);
  validate(limits);
  return limits;
}

CodeJudge make_judge(const GlobalOptions& g) {
  std::map<std::string, std::string> commands = {{"python", "python3 {src}"},
                                                 {"sh", "sh {src}"}};
  for (const std::string& spec : g.lang_commands) {
    std::size_t eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw UsageError("--judge.lang expects tag=command, got \"" + spec + "\"");
    }
    commands[spec.substr(0, eq)] = spec.substr(eq + 1);
  }
  JudgeOptions options;
  options.exact_bytes = g.exact_output;
  options.workers = g.judge_workers;
  return CodeJudge(std::move(commands), options);
}

LevelCuts make_cuts(const GlobalOptions& g) {
  if (g.cuts.size() != 4) throw UsageError("--grader.cuts expects exactly 4 values");
  LevelCuts cuts;
  for (std::size_t i = 0; i < 4; ++i) cuts.cuts[i] = g.cuts[i];
  for (std::size_t i = 0; i + 1 < 4; ++i) {
    if (!(cuts.cuts[i] < cuts.cuts[i + 1])) {
      throw UsageError("--grader.cuts must be strictly increasing");
    }
  }
  if (!(cuts.cuts[0] > 0.0 && cuts.cuts[3] < 1.0)) {
    throw UsageError("--grader.cuts must lie strictly inside (0,1)");
  }
  return cuts;
}

struct Backends {
  std::shared_ptr<Gateway> base;
  std::shared_ptr<Gateway> teacher;
  std::shared_ptr<Gateway> scorer;
};

Backends make_backends(const GlobalOptions& g, const std::string& base_model,
                       const std::string& teacher_model) {
  std::shared_ptr<CompletionBackend> base_raw;
  std::shared_ptr<CompletionBackend> teacher_raw;
  std::shared_ptr<StepScorer> scorer_raw;

  if (!g.mock_script.empty()) {
    auto mock = MockBackend::from_file(g.mock_script);
    base_raw = mock;
    teacher_raw = mock;
    scorer_raw = mock;
  } else {
    BackendConfig base_cfg;
    base_cfg.endpoint = g.endpoint;
    base_cfg.model = base_model;
    base_cfg.api_key_env = g.api_key_env;
    base_cfg.timeout_s = g.timeout_s;
    base_cfg.max_inflight = g.max_inflight;
    base_cfg.retry_max_attempts = g.retry_attempts;
    base_cfg.backoff_base_s = g.backoff_base_s;

    BackendConfig teacher_cfg = base_cfg;
    teacher_cfg.model = teacher_model;
    if (!g.teacher_endpoint.empty()) teacher_cfg.endpoint = g.teacher_endpoint;

    BackendConfig scorer_cfg = base_cfg;
    if (!g.scorer_endpoint.empty()) scorer_cfg.endpoint = g.scorer_endpoint;

    if (!base_model.empty()) base_raw = std::make_shared<HttpCompletionBackend>(base_cfg);
    if (!teacher_model.empty()) {
      teacher_raw = std::make_shared<HttpCompletionBackend>(teacher_cfg);
    }
    scorer_raw = std::make_shared<HttpStepScorer>(scorer_cfg);
  }

  Backends b;
  b.base = std::make_shared<Gateway>(base_raw, scorer_raw, g.max_inflight, g.retry_attempts,
                                     g.backoff_base_s);
  b.teacher = std::make_shared<Gateway>(teacher_raw, scorer_raw, g.max_inflight,
                                        g.retry_attempts, g.backoff_base_s);
  b.scorer = b.base;
  return b;
}

std::vector<GradedQuestion> read_graded_file(const fs::path& file) {
  return read_jsonl<GradedQuestion>(file, decode_graded);
}

void write_graded_file(const fs::path& file, const std::vector<GradedQuestion>& graded) {
  std::ostringstream out;
  for (const GradedQuestion& g : graded) out << encode_graded(g) << '\n';
  write_text_file_atomic(file, out.str());
}

CurriculumSpec parse_weights(const std::string& weights_csv, double easy_weight) {
  CurriculumSpec spec;
  spec.easy_weight = easy_weight;
  std::istringstream in(weights_csv);
  std::string item;
  std::vector<double> values;
  while (std::getline(in, item, ',')) {
    try {
      values.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ValidationError("cannot parse weight \"" + item + "\"");
    }
  }
  if (values.size() != 5) {
    throw ValidationError("--weights expects five comma-separated values, got " +
                          std::to_string(values.size()));
  }
  for (std::size_t i = 0; i < 5; ++i) spec.weights[i] = values[i];
  validate(spec);
  return spec;
}

// --- stage implementations, shared between subcommands and `pipeline` -------

struct GradeArgs {
  std::vector<std::string> questions;
  std::string model;
  std::string method = "prm";
  std::string out;
  std::string journal;  // defaults to out + ".journal"
  int workers = 8;
  double max_quarantine = 0.05;
  bool lenient = false;
};

void run_grade(const GlobalOptions& g, const GradeArgs& args, Backends& backends) {
  std::vector<fs::path> files(args.questions.begin(), args.questions.end());
  IngestResult ingested = ingest(files, !args.lenient);
  if (ingested.duplicates > 0) {
    std::cerr << "warning: dropped " << ingested.duplicates << " duplicate question id(s)\n";
  }
  if (ingested.skipped_lines > 0) {
    std::cerr << "warning: skipped " << ingested.skipped_lines << " malformed line(s)\n";
  }
  if (ingested.questions.empty()) {
    std::cerr << "warning: no questions to grade\n";
    write_text_file_atomic(args.out, "");
    return;
  }

  GradeAllOptions options;
  options.model_id = args.model;
  options.method = grading_method_from_string(args.method);
  options.workers = args.workers;
  options.max_quarantine_fraction = args.max_quarantine;
  options.journal_path = args.journal.empty() ? fs::path(args.out + ".journal")
                                              : fs::path(args.journal);
  options.probe_params.temperature = g.probe_temperature;
  options.cuts = make_cuts(g);
  options.default_lang = g.default_lang;

  CodeJudge judge = make_judge(g);
  GradeAllResult result = grade_all(ingested.questions, *backends.base, *backends.scorer,
                                    judge, make_limits(g), options);

  write_graded_file(args.out, result.graded);
  if (!result.quarantined.empty()) {
    std::ostringstream side;
    for (const QuarantineRecord& q : result.quarantined) {
      side << encode_journal_quarantine(q) << '\n';
    }
    write_text_file_atomic(args.out + ".quarantine.jsonl", side.str());
  }
  std::cout << "graded " << result.graded.size() << " question(s), quarantined "
            << result.quarantined.size() << " -> " << args.out << "\n";
}

struct DistributionArgs {
  std::string mode = "eval";
  std::string graded;
  std::string weights;
  double easy_weight = 0.0;
  std::string from;
  std::string out;
};

void run_distribution(const DistributionArgs& args) {
  DifficultyDistribution dist;
  if (args.mode == "eval") {
    if (args.graded.empty()) throw UsageError("--mode eval requires --graded");
    dist = build_eval_distribution(read_graded_file(args.graded));
  } else if (args.mode == "curriculum") {
    if (args.weights.empty()) throw UsageError("--mode curriculum requires --weights");
    dist = build_curriculum_distribution(parse_weights(args.weights, args.easy_weight));
  } else if (args.mode == "external") {
    if (args.from.empty()) throw UsageError("--mode external requires --from");
    dist = load_external_distribution(args.from);
  } else {
    throw UsageError("unknown distribution mode \"" + args.mode + "\"");
  }
  write_text_file_atomic(args.out, encode_distribution(dist) + "\n");
  std::cout << "wrote " << to_string(dist.kind) << " distribution -> " << args.out << "\n";
}

struct SampleArgs {
  std::string graded;
  std::string dist;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string shortfall = "redistribute";
  std::string out;
};

void run_sample(const SampleArgs& args) {
  std::vector<GradedQuestion> db = read_graded_file(args.graded);
  DifficultyDistribution dist = decode_distribution(read_text_file(args.dist));
  std::vector<GradedQuestion> picked =
      sample(db, dist, args.n, args.seed, shortfall_policy_from_string(args.shortfall));
  std::ostringstream out;
  for (const GradedQuestion& g : picked) out << encode_graded(g) << '\n';
  write_text_file_atomic(args.out, out.str());
  std::cout << "sampled " << picked.size() << " question(s), fit distance "
            << check_fit(picked, dist) << " -> " << args.out << "\n";
}

struct GenerateArgs {
  std::string sampled;
  std::string teacher;
  int attempts = 1;
  int workers = 8;
  std::string out;
  std::string sft;
  std::string rejects;
  std::string errors;
};

void run_generate(const GlobalOptions& g, const GenerateArgs& args, Backends& backends) {
  std::vector<GradedQuestion> sampled = read_graded_file(args.sampled);
  std::vector<Question> questions;
  questions.reserve(sampled.size());
  for (GradedQuestion& s : sampled) questions.push_back(std::move(s.question));

  CotGenOptions options;
  options.teacher_model = args.teacher;
  options.attempts = args.attempts;
  options.workers = args.workers;
  options.params.temperature = g.teacher_temperature;
  options.default_lang = g.default_lang;

  CodeJudge judge = make_judge(g);
  GenerateRun run = generate_all(questions, *backends.teacher, judge, make_limits(g), options);

  {
    std::ostringstream out;
    emit_cot(run.accepted, out);
    write_text_file_atomic(args.out, out.str());
  }
  if (!args.sft.empty()) {
    std::ostringstream out;
    emit_sft(run.accepted, out);
    write_text_file_atomic(args.sft, out.str());
  }
  if (!args.rejects.empty()) {
    std::ostringstream out;
    for (const RejectedQuestion& r : run.rejected) out << encode_rejected(r) << '\n';
    write_text_file_atomic(args.rejects, out.str());
  }
  if (!args.errors.empty()) {
    std::ostringstream out;
    for (const ErroredQuestion& e : run.errored) out << encode_errored(e) << '\n';
    write_text_file_atomic(args.errors, out.str());
  }
  std::cout << "accepted " << run.accepted.size() << ", rejected " << run.rejected.size()
            << ", errored " << run.errored.size() << " of " << questions.size()
            << " sampled question(s) -> " << args.out << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cotforge: model-adaptive CoT dataset construction"};
  app.require_subcommand(1);
  app.set_config("--config", "", "config file (INI/TOML sections per module)");

  GlobalOptions g;
  app.add_option("--gateway.endpoint", g.endpoint, "base model endpoint URL")
      ->configurable(true);
  app.add_option("--gateway.teacher-endpoint", g.teacher_endpoint,
                 "teacher endpoint URL (defaults to the base endpoint)")
      ->configurable(true);
  app.add_option("--gateway.scorer-endpoint", g.scorer_endpoint,
                 "step scorer endpoint URL (defaults to the base endpoint)")
      ->configurable(true);
  app.add_option("--gateway.api-key-env", g.api_key_env,
                 "environment variable holding the API token")
      ->configurable(true);
  app.add_option("--gateway.timeout", g.timeout_s, "request timeout in seconds")
      ->configurable(true);
  app.add_option("--gateway.max-inflight", g.max_inflight, "per-backend in-flight cap")
      ->configurable(true);
  app.add_option("--gateway.retry-attempts", g.retry_attempts, "max attempts per request")
      ->configurable(true);
  app.add_option("--gateway.backoff-base", g.backoff_base_s,
                 "exponential backoff base in seconds")
      ->configurable(true);
  app.add_option("--mock", g.mock_script,
                 "mock script file; swaps every backend for deterministic playback")
      ->configurable(true);

  app.add_option("--limits.wall-time", g.wall_time_s, "judge wall time per test (seconds)")
      ->configurable(true);
  app.add_option("--limits.memory-mb", g.memory_mb, "judge memory cap (MiB)")
      ->configurable(true);
  app.add_option("--limits.output-mb", g.output_mb, "judge output cap (MiB)")
      ->configurable(true);

  app.add_option("--judge.lang", g.lang_commands,
                 "language command template, tag=command with {src} (repeatable)")
      ->configurable(true);
  app.add_option("--judge.default-lang", g.default_lang,
                 "language for fenced blocks without a tag")
      ->configurable(true);
  app.add_flag("--judge.exact-output", g.exact_output,
               "compare outputs byte for byte instead of trimming")
      ->configurable(true);
  app.add_option("--judge.workers", g.judge_workers, "concurrent test cases per program")
      ->configurable(true);

  app.add_option("--grader.cuts", g.cuts, "four ascending score cut points")
      ->expected(4)
      ->configurable(true);
  app.add_option("--probe.temperature", g.probe_temperature,
                 "base model decoding temperature")
      ->configurable(true);
  app.add_option("--teacher.temperature", g.teacher_temperature,
                 "teacher decoding temperature")
      ->configurable(true);

  // ingest-check
  auto* cmd_ingest = app.add_subcommand("ingest-check", "validate questions.jsonl files");
  std::vector<std::string> ingest_files;
  bool ingest_lenient = false;
  cmd_ingest->add_option("--questions", ingest_files, "question files")->required();
  cmd_ingest->add_flag("--lenient", ingest_lenient, "skip malformed lines with a count");

  // grade
  auto* cmd_grade = app.add_subcommand("grade", "probe, verify and grade questions");
  GradeArgs grade_args;
  cmd_grade->add_option("--questions", grade_args.questions, "question files")->required();
  cmd_grade->add_option("--model", grade_args.model, "base model id")->required();
  cmd_grade->add_option("--method", grade_args.method, "grading method")
      ->check(CLI::IsMember({"prm", "ut"}));
  cmd_grade->add_option("--out", grade_args.out, "output graded.jsonl")->required();
  cmd_grade->add_option("--journal", grade_args.journal, "checkpoint journal path");
  cmd_grade->add_option("--workers", grade_args.workers, "worker pool size");
  cmd_grade->add_option("--max-quarantine", grade_args.max_quarantine,
                        "max quarantined fraction before the run fails");
  cmd_grade->add_flag("--lenient", grade_args.lenient, "skip malformed input lines");

  // distribution
  auto* cmd_dist = app.add_subcommand("distribution", "build a difficulty distribution");
  DistributionArgs dist_args;
  cmd_dist->add_option("--mode", dist_args.mode, "eval | curriculum | external")
      ->check(CLI::IsMember({"eval", "curriculum", "external"}));
  cmd_dist->add_option("--graded", dist_args.graded, "graded.jsonl for --mode eval");
  cmd_dist->add_option("--weights", dist_args.weights,
                       "five decreasing weights, e.g. 5,4,3,2,1");
  cmd_dist->add_option("--easy-weight", dist_args.easy_weight, "weight for easy questions");
  cmd_dist->add_option("--from", dist_args.from, "distribution.json for --mode external");
  cmd_dist->add_option("--out", dist_args.out, "output distribution.json")->required();

  // sample
  auto* cmd_sample = app.add_subcommand("sample", "sample questions to match a distribution");
  SampleArgs sample_args;
  cmd_sample->add_option("--graded", sample_args.graded, "graded.jsonl database")->required();
  cmd_sample->add_option("--dist", sample_args.dist, "target distribution.json")->required();
  cmd_sample->add_option("--n", sample_args.n, "sample size")->required();
  cmd_sample->add_option("--seed", sample_args.seed, "generator seed (mt19937_64)");
  cmd_sample->add_option("--shortfall", sample_args.shortfall, "bucket shortfall policy")
      ->check(CLI::IsMember({"redistribute", "truncate", "fail"}));
  cmd_sample->add_option("--out", sample_args.out, "output sampled.jsonl")->required();

  // generate
  auto* cmd_gen = app.add_subcommand("generate", "teacher CoT generation with verification");
  GenerateArgs gen_args;
  cmd_gen->add_option("--sampled", gen_args.sampled, "sampled.jsonl")->required();
  cmd_gen->add_option("--teacher", gen_args.teacher, "teacher model id")->required();
  cmd_gen->add_option("--attempts", gen_args.attempts, "teacher attempts per question");
  cmd_gen->add_option("--workers", gen_args.workers, "worker pool size");
  cmd_gen->add_option("--out", gen_args.out, "output cot.jsonl")->required();
  cmd_gen->add_option("--sft", gen_args.sft, "output sft.jsonl");
  cmd_gen->add_option("--rejects", gen_args.rejects, "rejected questions sidecar");
  cmd_gen->add_option("--errors", gen_args.errors, "errored questions sidecar");

  // stats
  auto* cmd_stats = app.add_subcommand("stats", "per-label counts and score histograms");
  std::string stats_graded;
  cmd_stats->add_option("--graded", stats_graded, "graded.jsonl")->required();

  // pipeline
  auto* cmd_pipe = app.add_subcommand("pipeline", "grade -> distribution -> sample -> generate");
  GradeArgs pipe_grade;
  DistributionArgs pipe_dist;
  SampleArgs pipe_sample;
  GenerateArgs pipe_gen;
  std::string pipe_outdir = "pipeline-out";
  cmd_pipe->add_option("--questions", pipe_grade.questions, "question files")->required();
  cmd_pipe->add_option("--model", pipe_grade.model, "base model id")->required();
  cmd_pipe->add_option("--teacher", pipe_gen.teacher, "teacher model id")->required();
  cmd_pipe->add_option("--method", pipe_grade.method, "grading method")
      ->check(CLI::IsMember({"prm", "ut"}));
  cmd_pipe->add_option("--mode", pipe_dist.mode, "distribution mode")
      ->check(CLI::IsMember({"eval", "curriculum", "external"}));
  cmd_pipe->add_option("--weights", pipe_dist.weights, "curriculum weights");
  cmd_pipe->add_option("--easy-weight", pipe_dist.easy_weight, "curriculum easy weight");
  cmd_pipe->add_option("--dist-from", pipe_dist.from, "external distribution.json");
  cmd_pipe->add_option("--n", pipe_sample.n, "sample size")->required();
  cmd_pipe->add_option("--seed", pipe_sample.seed, "sampler seed");
  cmd_pipe->add_option("--shortfall", pipe_sample.shortfall, "shortfall policy")
      ->check(CLI::IsMember({"redistribute", "truncate", "fail"}));
  cmd_pipe->add_option("--attempts", pipe_gen.attempts, "teacher attempts per question");
  cmd_pipe->add_option("--workers", pipe_grade.workers, "worker pool size");
  cmd_pipe->add_option("--max-quarantine", pipe_grade.max_quarantine,
                       "max quarantined fraction");
  cmd_pipe->add_option("--out-dir", pipe_outdir, "directory for all stage outputs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (cmd_ingest->parsed()) {
      std::vector<fs::path> files(ingest_files.begin(), ingest_files.end());
      IngestResult r = ingest(files, !ingest_lenient);
      std::cout << r.questions.size() << " question(s), " << r.duplicates
                << " duplicate(s) dropped, " << r.skipped_lines << " line(s) skipped\n";
    } else if (cmd_grade->parsed()) {
      Backends backends = make_backends(g, grade_args.model, "");
      run_grade(g, grade_args, backends);
    } else if (cmd_dist->parsed()) {
      run_distribution(dist_args);
    } else if (cmd_sample->parsed()) {
      run_sample(sample_args);
    } else if (cmd_gen->parsed()) {
      Backends backends = make_backends(g, "", gen_args.teacher);
      run_generate(g, gen_args, backends);
    } else if (cmd_stats->parsed()) {
      std::cout << render_stats(stats(read_graded_file(stats_graded)));
    } else if (cmd_pipe->parsed()) {
      fs::create_directories(pipe_outdir);
      fs::path dir(pipe_outdir);

      // one backend set for the whole run, so scripted mocks play an ordered
      // response list per question across the stages
      Backends backends = make_backends(g, pipe_grade.model, pipe_gen.teacher);

      pipe_grade.out = (dir / "graded.jsonl").string();
      pipe_grade.journal = (dir / "journal.jsonl").string();
      run_grade(g, pipe_grade, backends);

      pipe_dist.graded = pipe_grade.out;
      pipe_dist.out = (dir / "distribution.json").string();
      run_distribution(pipe_dist);

      pipe_sample.graded = pipe_grade.out;
      pipe_sample.dist = pipe_dist.out;
      pipe_sample.out = (dir / "sampled.jsonl").string();
      run_sample(pipe_sample);

      pipe_gen.sampled = pipe_sample.out;
      pipe_gen.workers = pipe_grade.workers;
      pipe_gen.out = (dir / "cot.jsonl").string();
      pipe_gen.sft = (dir / "sft.jsonl").string();
      pipe_gen.rejects = (dir / "rejects.jsonl").string();
      pipe_gen.errors = (dir / "errors.jsonl").string();
      run_generate(g, pipe_gen, backends);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const QuarantineError& e) {
    std::cerr << "quarantine: " << e.what() << "\n";
    return kExitQuarantine;
  } catch (const BackendError& e) {
    std::cerr << "backend error: " << e.what() << "\n";
    return kExitBackend;
  } catch (const EnvironmentError& e) {
    std::cerr << "environment error: " << e.what() << "\n";
    return kExitBackend;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ContractError& e) {
    std::cerr << "contract violation: " << e.what() << "\n";
    return kExitValidation;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}
