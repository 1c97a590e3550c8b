#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cotforge/records.hpp"

namespace cotforge {

// Per-test-case execution limits. All strictly positive.
struct ExecutionLimits {
  double wall_time_s = 10.0;
  std::uint64_t memory_bytes = 512ull << 20;
  std::uint64_t output_bytes = 16ull << 20;
};

void validate(const ExecutionLimits& limits);

enum class CaseOutcome { kPass, kWrongOutput, kRuntimeError, kTimeout, kResourceLimit };

std::string to_string(CaseOutcome o);

struct TestReport {
  int total = 0;
  int passed = 0;
  std::vector<CaseOutcome> outcomes;  // one per case, in suite order
};

struct JudgeOptions {
  bool exact_bytes = false;  // default: online-judge trailing-whitespace trim
  int workers = 1;           // concurrent test cases
};

// Runs candidate programs against stdin/stdout test suites. Each case gets a
// fresh child process confined by rlimits (address space, cpu backstop,
// output file size) in a scratch directory; the parent enforces wall time.
// Network isolation is attempted via a fresh net namespace and silently
// skipped where the kernel refuses it.
class CodeJudge {
 public:
  // lang -> command template; "{src}" is replaced by the program path.
  // Templates are split on spaces, no shell involved.
  explicit CodeJudge(std::map<std::string, std::string> lang_commands,
                     JudgeOptions options = {});

  // Default table: python3 and sh.
  CodeJudge();

  bool supports(const std::string& lang) const;

  // Throws EnvironmentError when the interpreter itself cannot be launched;
  // ContractError on an empty suite or invalid limits.
  TestReport run(const std::string& program, const std::string& lang,
                 const std::vector<TestCase>& suite, const ExecutionLimits& limits) const;

  static bool outputs_match(std::string_view actual, std::string_view expected,
                            bool exact_bytes);

  // Per-line trailing whitespace and trailing newlines removed.
  static std::string normalize_output(std::string_view s);

 private:
  std::map<std::string, std::string> lang_commands_;
  JudgeOptions options_;
};

}  // namespace cotforge
