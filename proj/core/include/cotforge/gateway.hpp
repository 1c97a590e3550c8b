#pragma once

#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace cotforge {

struct DecodingParams {
  double temperature = 0.0;
  std::optional<int> max_tokens;
};

// Text-completion side of a model endpoint.
class CompletionBackend {
 public:
  virtual ~CompletionBackend() = default;
  virtual std::string complete(const std::string& prompt, const DecodingParams& params) = 0;
};

// Step-scoring side of the process-reward endpoint:
// {question, steps} -> one score in [0,1] per step.
class StepScorer {
 public:
  virtual ~StepScorer() = default;
  virtual std::vector<double> score_steps(const std::string& question,
                                          const std::vector<std::string>& steps) = 0;
};

struct BackendConfig {
  std::string endpoint;     // e.g. http://localhost:8000
  std::string model;        // model id sent on the wire
  std::string api_key_env;  // name of the env var holding the token; may be empty
  double timeout_s = 60.0;
  int max_inflight = 8;
  int retry_max_attempts = 3;  // total attempts, >= 1
  double backoff_base_s = 0.5;
};

void validate(const BackendConfig& config);

// OpenAI-compatible chat completions over POST {endpoint}/v1/chat/completions.
class HttpCompletionBackend : public CompletionBackend {
 public:
  explicit HttpCompletionBackend(BackendConfig config);
  std::string complete(const std::string& prompt, const DecodingParams& params) override;

 private:
  BackendConfig config_;
};

// POST {endpoint}/score with {"question","steps":[...]} -> {"scores":[...]}.
class HttpStepScorer : public StepScorer {
 public:
  explicit HttpStepScorer(BackendConfig config);
  std::vector<double> score_steps(const std::string& question,
                                  const std::vector<std::string>& steps) override;

 private:
  BackendConfig config_;
};

// Deterministic scripted backend for offline runs and tests. The script is a
// JSON file mapping prompt keys (exact prompt or a substring of it, e.g. a
// question id embedded in the prompt) to ordered response lists; successive
// calls for the same key consume the list in order.
class MockBackend : public CompletionBackend, public StepScorer {
 public:
  static std::shared_ptr<MockBackend> from_file(const std::filesystem::path& script);
  static std::shared_ptr<MockBackend> from_json_text(const std::string& text);

  std::string complete(const std::string& prompt, const DecodingParams& params) override;
  std::vector<double> score_steps(const std::string& question,
                                  const std::vector<std::string>& steps) override;

  // instrumentation for concurrency tests
  int max_concurrent_seen() const;
  int total_calls() const;

  struct Impl;

 private:
  explicit MockBackend(std::unique_ptr<Impl> impl);
  std::unique_ptr<Impl> impl_;

 public:
  ~MockBackend();
};

// The concurrency boundary in front of any backend pair: enforces the
// per-backend in-flight cap and retries retryable failures with exponential
// backoff. Safe for concurrent use from many workers.
class Gateway : public CompletionBackend, public StepScorer {
 public:
  Gateway(std::shared_ptr<CompletionBackend> completions, std::shared_ptr<StepScorer> scorer,
          int max_inflight, int retry_max_attempts, double backoff_base_s);

  std::string complete(const std::string& prompt, const DecodingParams& params) override;
  std::vector<double> score_steps(const std::string& question,
                                  const std::vector<std::string>& steps) override;

 private:
  template <typename Fn>
  auto with_retries(Fn&& fn) -> decltype(fn());

  void acquire();
  void release();

  std::shared_ptr<CompletionBackend> completions_;
  std::shared_ptr<StepScorer> scorer_;
  int max_inflight_;
  int retry_max_attempts_;
  double backoff_base_s_;
  int in_flight_ = 0;
  std::mutex mutex_;
  std::condition_variable slot_free_;
};

}  // namespace cotforge
