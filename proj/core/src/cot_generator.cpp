#include "cotforge/cot_generator.hpp"

#include <atomic>
#include <mutex>
#include <thread>

#include "cotforge/answer_extract.hpp"
#include "cotforge/errors.hpp"
#include "cotforge/verifier.hpp"
#include "json.hpp"

namespace cotforge {

using nlohmann::json;

namespace {

std::string_view trim_view(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

std::pair<std::string, std::string> split_reasoning(const std::string& raw_text) {
  constexpr std::string_view kOpen = "<think>";
  constexpr std::string_view kClose = "</think>";
  std::size_t open = raw_text.find(kOpen);
  if (open != std::string::npos) {
    std::size_t close = raw_text.find(kClose, open + kOpen.size());
    if (close != std::string::npos) {
      std::string reasoning(
          trim_view(std::string_view(raw_text).substr(open + kOpen.size(), close - open - kOpen.size())));
      std::string answer(trim_view(std::string_view(raw_text).substr(close + kClose.size())));
      return {std::move(reasoning), std::move(answer)};
    }
    // unmatched <think>: fall through to the token split
  }

  if (auto span = find_final_answer_span(raw_text)) {
    std::string reasoning(trim_view(std::string_view(raw_text).substr(0, span->begin)));
    std::string answer(raw_text.substr(span->begin, span->end - span->begin));
    return {std::move(reasoning), std::move(answer)};
  }
  return {raw_text, std::string()};
}

CotOutcome generate_cot(const Question& question, CompletionBackend& teacher,
                        const CodeJudge& judge, const ExecutionLimits& limits,
                        const CotGenOptions& options) {
  if (options.attempts < 1) throw ContractError("attempts must be >= 1");
  CotOutcome outcome;
  for (int attempt = 1; attempt <= options.attempts; ++attempt) {
    std::string raw;
    try {
      raw = teacher.complete(question.prompt, options.params);
    } catch (const BackendError& e) {
      outcome.status = CotOutcome::Status::kErrored;
      outcome.error = e.what();
      return outcome;
    }
    VerifyResult vr = verify_response(question, raw, judge, limits, options.default_lang);
    outcome.attempt_verdicts.push_back(vr.verdict);
    if (vr.verdict == Verdict::kCorrect) {
      auto [reasoning, answer] = split_reasoning(raw);
      CoTRecord record;
      record.question_id = question.id;
      record.prompt = question.prompt;
      record.teacher_model = options.teacher_model;
      record.reasoning = std::move(reasoning);
      record.final_answer = std::move(answer);
      record.verified = true;
      record.attempt_index = attempt;
      validate(record);
      outcome.status = CotOutcome::Status::kAccepted;
      outcome.record = std::move(record);
      return outcome;
    }
  }
  outcome.status = CotOutcome::Status::kRejected;
  return outcome;
}

GenerateRun generate_all(const std::vector<Question>& sampled, CompletionBackend& teacher,
                         const CodeJudge& judge, const ExecutionLimits& limits,
                         const CotGenOptions& options) {
  std::vector<CotOutcome> outcomes(sampled.size());
  std::atomic<std::size_t> next{0};
  std::mutex fail_mutex;
  std::exception_ptr fatal;

  auto worker = [&]() {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= sampled.size()) return;
      try {
        outcomes[i] = generate_cot(sampled[i], teacher, judge, limits, options);
      } catch (...) {
        std::lock_guard lock(fail_mutex);
        if (!fatal) fatal = std::current_exception();
        return;
      }
    }
  };

  int workers = std::max(1, options.workers);
  if (sampled.size() < static_cast<std::size_t>(workers)) {
    workers = static_cast<int>(sampled.size() ? sampled.size() : 1);
  }
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (int w = 0; w < workers; ++w) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  if (fatal) std::rethrow_exception(fatal);

  GenerateRun run;
  for (std::size_t i = 0; i < sampled.size(); ++i) {
    CotOutcome& o = outcomes[i];
    switch (o.status) {
      case CotOutcome::Status::kAccepted:
        run.accepted.push_back(std::move(*o.record));
        break;
      case CotOutcome::Status::kRejected:
        run.rejected.push_back({sampled[i].id, sampled[i].prompt, o.attempt_verdicts});
        break;
      case CotOutcome::Status::kErrored:
        run.errored.push_back({sampled[i].id, o.error});
        break;
    }
  }
  return run;
}

namespace {

void require_all_verified(const std::vector<CoTRecord>& records, const char* sink) {
  for (const CoTRecord& r : records) {
    if (!r.verified) {
      throw ContractError(std::string(sink) + ": record \"" + r.question_id +
                          "\" is not verified; nothing written");
    }
  }
}

}  // namespace

std::size_t emit_cot(const std::vector<CoTRecord>& records, std::ostream& out) {
  require_all_verified(records, "cot writer");
  for (const CoTRecord& r : records) out << encode_cot(r) << '\n';
  return records.size();
}

std::size_t emit_sft(const std::vector<CoTRecord>& records, std::ostream& out) {
  require_all_verified(records, "sft writer");
  for (const CoTRecord& r : records) {
    SftExample e{r.prompt, "<think>" + r.reasoning + "</think>" + r.final_answer};
    out << encode_sft(e) << '\n';
  }
  return records.size();
}

std::string encode_rejected(const RejectedQuestion& r) {
  json verdicts = json::array();
  for (Verdict v : r.attempt_verdicts) verdicts.push_back(to_string(v));
  json j;
  j["id"] = r.question_id;
  j["prompt"] = r.prompt;
  j["attempt_verdicts"] = verdicts;
  return j.dump();
}

std::string encode_errored(const ErroredQuestion& e) {
  json j;
  j["id"] = e.question_id;
  j["reason"] = e.reason;
  return j.dump();
}

}  // namespace cotforge
