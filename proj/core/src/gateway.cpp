#include "cotforge/gateway.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <thread>

#include "cotforge/errors.hpp"
#include "cotforge/jsonl.hpp"
#include "httplib.h"
#include "json.hpp"

namespace cotforge {

using nlohmann::json;

void validate(const BackendConfig& config) {
  if (config.max_inflight < 1) throw ValidationError("max in-flight must be >= 1");
  if (!(config.timeout_s > 0.0)) throw ValidationError("timeout must be > 0");
  if (config.retry_max_attempts < 1) throw ValidationError("retry attempts must be >= 1");
  if (config.backoff_base_s < 0.0) throw ValidationError("backoff base must be >= 0");
}

namespace {

std::unique_ptr<httplib::Client> make_client(const BackendConfig& config) {
  auto client = std::make_unique<httplib::Client>(config.endpoint);
  auto timeout = std::chrono::milliseconds(static_cast<long>(config.timeout_s * 1000.0));
  client->set_connection_timeout(timeout);
  client->set_read_timeout(timeout);
  client->set_write_timeout(timeout);
  if (!config.api_key_env.empty()) {
    if (const char* token = std::getenv(config.api_key_env.c_str())) {
      client->set_default_headers({{"Authorization", std::string("Bearer ") + token}});
    }
  }
  return client;
}

// One attempt; the Gateway owns retries.
std::string post_json(const BackendConfig& config, const std::string& path,
                      const json& body) {
  auto client = make_client(config);
  httplib::Result res = client->Post(path, body.dump(), "application/json");
  if (!res) {
    switch (res.error()) {
      case httplib::Error::ConnectionTimeout:
      case httplib::Error::Read:
      case httplib::Error::Write:
        throw TimeoutError("timeout talking to " + config.endpoint + path);
      default:
        throw HttpError("cannot reach " + config.endpoint + path + " (" +
                            httplib::to_string(res.error()) + ")",
                        0, /*transport_failure=*/true);
    }
  }
  if (res->status != 200) {
    throw HttpError("HTTP " + std::to_string(res->status) + " from " + config.endpoint + path,
                    res->status);
  }
  return res->body;
}

json parse_body(const std::string& body, const std::string& what) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded()) throw MalformedResponseError(what + ": response body is not JSON");
  return j;
}

}  // namespace

HttpCompletionBackend::HttpCompletionBackend(BackendConfig config)
    : config_(std::move(config)) {
  validate(config_);
  if (config_.endpoint.empty()) throw ValidationError("completion endpoint not configured");
}

std::string HttpCompletionBackend::complete(const std::string& prompt,
                                            const DecodingParams& params) {
  json body = {
      {"model", config_.model},
      {"messages", json::array({json{{"role", "user"}, {"content", prompt}}})},
      {"temperature", params.temperature},
  };
  if (params.max_tokens) body["max_tokens"] = *params.max_tokens;

  json j = parse_body(post_json(config_, "/v1/chat/completions", body), "completion");
  const json* content = nullptr;
  if (j.contains("choices") && j["choices"].is_array() && !j["choices"].empty()) {
    const json& msg = j["choices"][0];
    if (msg.contains("message") && msg["message"].contains("content") &&
        msg["message"]["content"].is_string()) {
      content = &msg["message"]["content"];
    }
  }
  if (!content) {
    throw MalformedResponseError("completion: missing choices[0].message.content");
  }
  return content->get<std::string>();
}

HttpStepScorer::HttpStepScorer(BackendConfig config) : config_(std::move(config)) {
  validate(config_);
  if (config_.endpoint.empty()) throw ValidationError("scorer endpoint not configured");
}

std::vector<double> HttpStepScorer::score_steps(const std::string& question,
                                                const std::vector<std::string>& steps) {
  json body = {{"question", question}, {"steps", steps}};
  json j = parse_body(post_json(config_, "/score", body), "scorer");
  if (!j.contains("scores") || !j["scores"].is_array()) {
    throw MalformedResponseError("scorer: missing \"scores\" array");
  }
  std::vector<double> scores;
  for (const json& v : j["scores"]) {
    if (!v.is_number()) throw MalformedResponseError("scorer: non-numeric score");
    scores.push_back(v.get<double>());
  }
  if (scores.size() != steps.size()) {
    throw MalformedResponseError("scorer: got " + std::to_string(scores.size()) +
                                 " scores for " + std::to_string(steps.size()) + " steps");
  }
  for (double s : scores) {
    if (s < 0.0 || s > 1.0) {
      throw MalformedResponseError("scorer: score " + std::to_string(s) + " outside [0,1]");
    }
  }
  return scores;
}

// --- mock backend --------------------------------------------------------

struct MockBackend::Impl {
  enum class Exhausted { kRepeatLast, kError };

  struct ScoreRule {
    std::optional<double> constant;
    std::optional<std::vector<double>> vector_scores;
    std::map<std::string, double> keyword_scores;
    double fallback = 0.5;
  };

  Exhausted on_exhausted = Exhausted::kRepeatLast;
  int delay_ms = 0;
  std::map<std::string, std::vector<std::string>> completions;
  std::map<std::string, ScoreRule> score_rules;

  std::mutex mutex;
  std::map<std::string, std::size_t> cursors;
  std::atomic<int> in_flight{0};
  std::atomic<int> max_seen{0};
  std::atomic<int> calls{0};

  // exact key first, then the longest script key contained in the prompt
  template <typename Map>
  typename Map::const_iterator lookup(const Map& map, const std::string& prompt) const {
    if (auto it = map.find(prompt); it != map.end()) return it;
    auto best = map.end();
    std::size_t best_len = 0;
    for (auto it = map.begin(); it != map.end(); ++it) {
      const std::string& key = it->first;
      if (!key.empty() && prompt.find(key) != std::string::npos && key.size() > best_len) {
        best = it;
        best_len = key.size();
      }
    }
    return best;
  }

  struct Tracker {
    Impl& impl;
    explicit Tracker(Impl& i) : impl(i) {
      int now = impl.in_flight.fetch_add(1) + 1;
      int seen = impl.max_seen.load();
      while (now > seen && !impl.max_seen.compare_exchange_weak(seen, now)) {
      }
      impl.calls.fetch_add(1);
      if (impl.delay_ms > 0) {
        std::this_thread::sleep_for(std::chrono::milliseconds(impl.delay_ms));
      }
    }
    ~Tracker() { impl.in_flight.fetch_sub(1); }
  };
};

MockBackend::MockBackend(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
MockBackend::~MockBackend() = default;

std::shared_ptr<MockBackend> MockBackend::from_file(const std::filesystem::path& script) {
  return from_json_text(read_text_file(script));
}

std::shared_ptr<MockBackend> MockBackend::from_json_text(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw ValidationError("mock script is not a JSON object");
  }
  auto impl = std::make_unique<Impl>();
  if (j.contains("on_exhausted")) {
    std::string mode = j["on_exhausted"].get<std::string>();
    if (mode == "repeat_last") {
      impl->on_exhausted = Impl::Exhausted::kRepeatLast;
    } else if (mode == "error") {
      impl->on_exhausted = Impl::Exhausted::kError;
    } else {
      throw ValidationError("mock script: unknown on_exhausted mode \"" + mode + "\"");
    }
  }
  if (j.contains("delay_ms")) impl->delay_ms = j["delay_ms"].get<int>();
  if (j.contains("completions")) {
    for (const auto& [key, value] : j["completions"].items()) {
      std::vector<std::string> responses;
      if (value.is_string()) {
        responses.push_back(value.get<std::string>());
      } else if (value.is_array()) {
        for (const json& r : value) responses.push_back(r.get<std::string>());
      } else {
        throw ValidationError("mock script: completions[\"" + key +
                              "\"] must be a string or array");
      }
      if (responses.empty()) {
        throw ValidationError("mock script: completions[\"" + key + "\"] is empty");
      }
      impl->completions[key] = std::move(responses);
    }
  }
  if (j.contains("step_scores")) {
    for (const auto& [key, value] : j["step_scores"].items()) {
      Impl::ScoreRule rule;
      if (value.is_number()) {
        rule.constant = value.get<double>();
      } else if (value.is_object()) {
        if (value.contains("constant")) rule.constant = value["constant"].get<double>();
        if (value.contains("vector")) {
          rule.vector_scores = value["vector"].get<std::vector<double>>();
        }
        if (value.contains("keywords")) {
          for (const auto& [kw, score] : value["keywords"].items()) {
            rule.keyword_scores[kw] = score.get<double>();
          }
        }
        if (value.contains("default")) rule.fallback = value["default"].get<double>();
      } else {
        throw ValidationError("mock script: step_scores[\"" + key +
                              "\"] must be a number or object");
      }
      impl->score_rules[key] = std::move(rule);
    }
  }
  return std::shared_ptr<MockBackend>(new MockBackend(std::move(impl)));
}

std::string MockBackend::complete(const std::string& prompt, const DecodingParams&) {
  Impl::Tracker tracker(*impl_);
  std::lock_guard lock(impl_->mutex);
  auto it = impl_->lookup(impl_->completions, prompt);
  if (it == impl_->completions.end()) {
    throw MockScriptError("mock script has no completion for key \"" +
                          prompt.substr(0, 120) + "\"");
  }
  const std::vector<std::string>& responses = it->second;
  std::size_t& cursor = impl_->cursors[it->first];
  if (cursor >= responses.size()) {
    if (impl_->on_exhausted == Impl::Exhausted::kError) {
      throw MockScriptError("mock script exhausted for key \"" + it->first + "\"");
    }
    return responses.back();
  }
  return responses[cursor++];
}

std::vector<double> MockBackend::score_steps(const std::string& question,
                                             const std::vector<std::string>& steps) {
  Impl::Tracker tracker(*impl_);
  std::lock_guard lock(impl_->mutex);
  auto it = impl_->lookup(impl_->score_rules, question);
  if (it == impl_->score_rules.end()) {
    throw MockScriptError("mock script has no step scores for key \"" +
                          question.substr(0, 120) + "\"");
  }
  const Impl::ScoreRule* rule = &it->second;
  if (rule->vector_scores) return *rule->vector_scores;
  std::vector<double> scores;
  scores.reserve(steps.size());
  for (const std::string& step : steps) {
    double score = rule->constant.value_or(rule->fallback);
    if (!rule->constant) {
      for (const auto& [kw, kw_score] : rule->keyword_scores) {
        if (step.find(kw) != std::string::npos) {
          score = kw_score;
          break;
        }
      }
    }
    scores.push_back(score);
  }
  return scores;
}

int MockBackend::max_concurrent_seen() const { return impl_->max_seen.load(); }
int MockBackend::total_calls() const { return impl_->calls.load(); }

// --- gateway --------------------------------------------------------------

Gateway::Gateway(std::shared_ptr<CompletionBackend> completions,
                 std::shared_ptr<StepScorer> scorer, int max_inflight,
                 int retry_max_attempts, double backoff_base_s)
    : completions_(std::move(completions)),
      scorer_(std::move(scorer)),
      max_inflight_(std::max(1, max_inflight)),
      retry_max_attempts_(std::max(1, retry_max_attempts)),
      backoff_base_s_(std::max(0.0, backoff_base_s)) {}

void Gateway::acquire() {
  std::unique_lock lock(mutex_);
  slot_free_.wait(lock, [&] { return in_flight_ < max_inflight_; });
  ++in_flight_;
}

void Gateway::release() {
  {
    std::lock_guard lock(mutex_);
    --in_flight_;
  }
  slot_free_.notify_one();
}

namespace {

[[noreturn]] void rethrow_with_attempts(const BackendError& e, int attempts) {
  std::string msg = std::string(e.what()) + " (after " + std::to_string(attempts) +
                    (attempts == 1 ? " attempt)" : " attempts)");
  if (dynamic_cast<const TimeoutError*>(&e)) throw TimeoutError(msg);
  if (const auto* h = dynamic_cast<const HttpError*>(&e)) {
    throw HttpError(msg, h->status(), h->retryable() && h->status() < 400);
  }
  throw BackendError(msg);
}

}  // namespace

template <typename Fn>
auto Gateway::with_retries(Fn&& fn) -> decltype(fn()) {
  double delay = backoff_base_s_;
  for (int attempt = 1;; ++attempt) {
    try {
      return fn();
    } catch (const BackendError& e) {
      if (!e.retryable()) throw;
      if (attempt >= retry_max_attempts_) rethrow_with_attempts(e, attempt);
    }
    if (delay > 0.0) {
      std::this_thread::sleep_for(std::chrono::duration<double>(delay));
    }
    delay *= 2.0;
  }
}

std::string Gateway::complete(const std::string& prompt, const DecodingParams& params) {
  acquire();
  struct Release {
    Gateway& g;
    ~Release() { g.release(); }
  } releaser{*this};
  return with_retries([&] { return completions_->complete(prompt, params); });
}

std::vector<double> Gateway::score_steps(const std::string& question,
                                         const std::vector<std::string>& steps) {
  acquire();
  struct Release {
    Gateway& g;
    ~Release() { g.release(); }
  } releaser{*this};
  auto scores = with_retries([&] { return scorer_->score_steps(question, steps); });
  if (scores.size() != steps.size()) {
    throw MalformedResponseError("scorer: got " + std::to_string(scores.size()) +
                                 " scores for " + std::to_string(steps.size()) + " steps");
  }
  for (double s : scores) {
    if (s < 0.0 || s > 1.0) {
      throw MalformedResponseError("scorer: score " + std::to_string(s) + " outside [0,1]");
    }
  }
  return scores;
}

}  // namespace cotforge
