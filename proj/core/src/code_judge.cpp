#include "cotforge/code_judge.hpp"

#include <fcntl.h>
#include <sched.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/stat.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "cotforge/errors.hpp"

namespace cotforge {

namespace fs = std::filesystem;

void validate(const ExecutionLimits& limits) {
  if (!(limits.wall_time_s > 0.0)) throw ValidationError("wall_time must be > 0");
  if (limits.memory_bytes == 0) throw ValidationError("memory cap must be > 0");
  if (limits.output_bytes == 0) throw ValidationError("output cap must be > 0");
}

std::string to_string(CaseOutcome o) {
  switch (o) {
    case CaseOutcome::kPass: return "pass";
    case CaseOutcome::kWrongOutput: return "wrong_output";
    case CaseOutcome::kRuntimeError: return "runtime_error";
    case CaseOutcome::kTimeout: return "timeout";
    case CaseOutcome::kResourceLimit: return "resource_limit";
  }
  return "runtime_error";
}

namespace {

struct ScratchDir {
  fs::path path;

  ScratchDir() {
    std::string tmpl = (fs::temp_directory_path() / "cotforge-judge-XXXXXX").string();
    std::vector<char> buf(tmpl.begin(), tmpl.end());
    buf.push_back('\0');
    if (!mkdtemp(buf.data())) {
      throw EnvironmentError(std::string("mkdtemp failed: ") + std::strerror(errno));
    }
    path = buf.data();
  }

  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

std::vector<std::string> split_command(const std::string& tmpl, const std::string& src) {
  std::vector<std::string> argv;
  std::istringstream in(tmpl);
  std::string word;
  while (in >> word) {
    std::size_t pos;
    while ((pos = word.find("{src}")) != std::string::npos) {
      word.replace(pos, 5, src);
    }
    argv.push_back(word);
  }
  if (argv.empty()) throw ValidationError("empty judge command template");
  return argv;
}

void set_limit(int resource, rlim_t value) {
  rlimit lim{value, value};
  setrlimit(resource, &lim);  // best effort; the wall clock is authoritative
}

struct CaseResult {
  CaseOutcome outcome;
  bool exec_failed = false;
  int exec_errno = 0;
};

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw EnvironmentError("cannot write " + p.string());
  out << content;
}

std::string read_capped(const fs::path& p, std::uint64_t cap) {
  std::ifstream in(p, std::ios::binary);
  std::string data;
  data.resize(cap);
  in.read(data.data(), static_cast<std::streamsize>(cap));
  data.resize(static_cast<std::size_t>(in.gcount()));
  return data;
}

CaseResult run_one_case(const std::vector<std::string>& argv, const fs::path& dir,
                        const fs::path& in_path, const fs::path& out_path,
                        const ExecutionLimits& limits) {
  int err_pipe[2];
  if (pipe2(err_pipe, O_CLOEXEC) != 0) {
    throw EnvironmentError(std::string("pipe2 failed: ") + std::strerror(errno));
  }

  pid_t pid = fork();
  if (pid < 0) {
    close(err_pipe[0]);
    close(err_pipe[1]);
    throw EnvironmentError(std::string("fork failed: ") + std::strerror(errno));
  }

  if (pid == 0) {
    setpgid(0, 0);
    unshare(CLONE_NEWNET);  // best effort; EPERM is fine

    int in_fd = open(in_path.c_str(), O_RDONLY);
    int out_fd = open(out_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    int null_fd = open("/dev/null", O_WRONLY);
    if (in_fd < 0 || out_fd < 0 || null_fd < 0) _exit(126);
    dup2(in_fd, STDIN_FILENO);
    dup2(out_fd, STDOUT_FILENO);
    dup2(null_fd, STDERR_FILENO);

    if (chdir(dir.c_str()) != 0) _exit(126);

    set_limit(RLIMIT_AS, limits.memory_bytes);
    set_limit(RLIMIT_FSIZE, limits.output_bytes);
    set_limit(RLIMIT_CPU, static_cast<rlim_t>(std::ceil(limits.wall_time_s)) + 1);
    set_limit(RLIMIT_CORE, 0);

    std::vector<char*> cargv;
    cargv.reserve(argv.size() + 1);
    for (const std::string& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
    cargv.push_back(nullptr);
    execvp(cargv[0], cargv.data());

    int saved = errno;
    ssize_t n = write(err_pipe[1], &saved, sizeof(saved));
    (void)n;
    _exit(127);
  }

  close(err_pipe[1]);
  setpgid(pid, pid);  // both sides set it to close the race

  auto start = std::chrono::steady_clock::now();
  const auto wall = std::chrono::duration<double>(limits.wall_time_s);
  bool timed_out = false;
  int status = 0;

  while (true) {
    pid_t r = waitpid(pid, &status, WNOHANG);
    if (r == pid) break;
    if (r < 0 && errno != EINTR) {
      close(err_pipe[0]);
      throw EnvironmentError(std::string("waitpid failed: ") + std::strerror(errno));
    }
    if (std::chrono::steady_clock::now() - start >= wall) {
      timed_out = true;
      kill(-pid, SIGKILL);
      kill(pid, SIGKILL);
      waitpid(pid, &status, 0);
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }

  int child_errno = 0;
  ssize_t n = read(err_pipe[0], &child_errno, sizeof(child_errno));
  close(err_pipe[0]);
  if (n == sizeof(child_errno)) {
    return {CaseOutcome::kRuntimeError, true, child_errno};
  }

  if (timed_out) return {CaseOutcome::kTimeout};
  if (WIFSIGNALED(status)) {
    int sig = WTERMSIG(status);
    if (sig == SIGXFSZ) return {CaseOutcome::kResourceLimit};
    if (sig == SIGXCPU) return {CaseOutcome::kTimeout};
    return {CaseOutcome::kRuntimeError};
  }
  if (WIFEXITED(status) && WEXITSTATUS(status) != 0) {
    return {CaseOutcome::kRuntimeError};
  }
  return {CaseOutcome::kPass};  // provisional; output comparison follows
}

}  // namespace

CodeJudge::CodeJudge(std::map<std::string, std::string> lang_commands, JudgeOptions options)
    : lang_commands_(std::move(lang_commands)), options_(options) {
  if (options_.workers < 1) options_.workers = 1;
}

CodeJudge::CodeJudge()
    : CodeJudge({{"python", "python3 {src}"}, {"sh", "sh {src}"}}) {}

bool CodeJudge::supports(const std::string& lang) const {
  return lang_commands_.count(lang) > 0;
}

std::string CodeJudge::normalize_output(std::string_view s) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t nl = s.find('\n', pos);
    std::string_view line =
        nl == std::string_view::npos ? s.substr(pos) : s.substr(pos, nl - pos);
    while (!line.empty() &&
           (line.back() == ' ' || line.back() == '\t' || line.back() == '\r')) {
      line.remove_suffix(1);
    }
    lines.emplace_back(line);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) out.push_back('\n');
    out += lines[i];
  }
  return out;
}

bool CodeJudge::outputs_match(std::string_view actual, std::string_view expected,
                              bool exact_bytes) {
  if (exact_bytes) return actual == expected;
  return normalize_output(actual) == normalize_output(expected);
}

TestReport CodeJudge::run(const std::string& program, const std::string& lang,
                          const std::vector<TestCase>& suite,
                          const ExecutionLimits& limits) const {
  if (suite.empty()) throw ContractError("test suite must be nonempty");
  validate(limits);
  auto it = lang_commands_.find(lang);
  if (it == lang_commands_.end()) {
    throw EnvironmentError("no judge command configured for language \"" + lang + "\"");
  }

  ScratchDir scratch;
  fs::path src = scratch.path / "prog";
  write_file(src, program);
  std::vector<std::string> argv = split_command(it->second, src.string());

  TestReport report;
  report.total = static_cast<int>(suite.size());
  report.outcomes.assign(suite.size(), CaseOutcome::kRuntimeError);

  std::atomic<std::size_t> next{0};
  std::mutex fail_mutex;
  std::exception_ptr failure;

  auto worker = [&]() {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= suite.size()) return;
      try {
        fs::path in_path = scratch.path / ("in-" + std::to_string(i));
        fs::path out_path = scratch.path / ("out-" + std::to_string(i));
        write_file(in_path, suite[i].input);
        CaseResult r = run_one_case(argv, scratch.path, in_path, out_path, limits);
        if (r.exec_failed) {
          throw EnvironmentError("cannot launch judge command \"" + argv[0] +
                                 "\": " + std::strerror(r.exec_errno));
        }
        if (r.outcome == CaseOutcome::kPass) {
          std::string actual = read_capped(out_path, limits.output_bytes + 1);
          r.outcome = outputs_match(actual, suite[i].expected_output, options_.exact_bytes)
                          ? CaseOutcome::kPass
                          : CaseOutcome::kWrongOutput;
        }
        report.outcomes[i] = r.outcome;
      } catch (...) {
        std::lock_guard lock(fail_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  int workers = std::min<int>(options_.workers, static_cast<int>(suite.size()));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (int w = 0; w < workers; ++w) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (CaseOutcome o : report.outcomes) {
    if (o == CaseOutcome::kPass) ++report.passed;
  }
  return report;
}

}  // namespace cotforge
