#include "cotforge/adaptive_db.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "cotforge/errors.hpp"
#include "cotforge/jsonl.hpp"
#include "cotforge/verifier.hpp"
#include "json.hpp"

namespace cotforge {

using nlohmann::json;

IngestResult ingest(const std::vector<std::filesystem::path>& files, bool strict) {
  IngestResult result;
  std::unordered_set<std::string> seen;
  for (const auto& file : files) {
    for_each_jsonl_line(file, [&](std::size_t, const std::string& line) {
      Question q;
      if (strict) {
        q = decode_question(line);
      } else {
        try {
          q = decode_question(line);
        } catch (const ValidationError&) {
          ++result.skipped_lines;
          return;
        }
      }
      if (!seen.insert(q.id).second) {
        ++result.duplicates;
        return;
      }
      result.questions.push_back(std::move(q));
    });
  }
  return result;
}

std::string encode_journal_graded(const GradedQuestion& g) { return encode_graded(g); }

std::string encode_journal_quarantine(const QuarantineRecord& q) {
  json j;
  j["quarantine"] = true;
  j["id"] = q.question_id;
  j["model_id"] = q.model_id;
  j["reason"] = q.reason;
  return j.dump();
}

namespace {

struct JournalState {
  std::unordered_map<std::string, GradedQuestion> graded;
  std::unordered_map<std::string, QuarantineRecord> quarantined;
};

// A run killed mid-write leaves at most one truncated trailing line; that
// line is dropped, anything malformed before it is a real error.
JournalState load_journal(const std::filesystem::path& path, const std::string& model_id) {
  JournalState state;
  if (path.empty() || !std::filesystem::exists(path)) return state;

  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open journal " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) lines.push_back(line);
  }

  for (std::size_t i = 0; i < lines.size(); ++i) {
    bool last = i + 1 == lines.size();
    try {
      json j = json::parse(lines[i], nullptr, false);
      if (j.is_discarded() || !j.is_object()) throw ValidationError("malformed journal line");
      if (j.contains("quarantine")) {
        QuarantineRecord q{j.at("id").get<std::string>(), j.at("model_id").get<std::string>(),
                           j.at("reason").get<std::string>()};
        if (q.model_id == model_id) state.quarantined[q.question_id] = std::move(q);
      } else {
        GradedQuestion g = decode_graded(lines[i]);
        if (g.trace.model_id == model_id) state.graded[g.question.id] = std::move(g);
      }
    } catch (const std::exception& e) {
      if (last) break;  // interrupted write
      throw ValidationError("journal " + path.string() + " line " + std::to_string(i + 1) +
                            ": " + e.what());
    }
  }
  return state;
}

class JournalWriter {
 public:
  explicit JournalWriter(const std::filesystem::path& path) {
    if (path.empty()) return;
    out_.open(path, std::ios::app);
    if (!out_) throw ValidationError("cannot open journal " + path.string() + " for append");
    enabled_ = true;
  }

  void append(const std::string& line) {
    if (!enabled_) return;
    std::lock_guard lock(mutex_);
    out_ << line << '\n';
    out_.flush();
  }

 private:
  bool enabled_ = false;
  std::ofstream out_;
  std::mutex mutex_;
};

}  // namespace

GradeAllResult grade_all(const std::vector<Question>& questions, CompletionBackend& base_model,
                         StepScorer& scorer, const CodeJudge& judge,
                         const ExecutionLimits& limits, const GradeAllOptions& options) {
  validate(limits);
  JournalState done = load_journal(options.journal_path, options.model_id);
  JournalWriter journal(options.journal_path);

  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < questions.size(); ++i) {
    const std::string& id = questions[i].id;
    if (!done.graded.count(id) && !done.quarantined.count(id)) todo.push_back(i);
  }

  std::vector<std::optional<GradedQuestion>> fresh(questions.size());
  std::vector<std::optional<QuarantineRecord>> failed(questions.size());

  std::atomic<std::size_t> next{0};
  std::mutex fail_mutex;
  std::exception_ptr fatal;

  auto worker = [&]() {
    while (true) {
      std::size_t k = next.fetch_add(1);
      if (k >= todo.size()) return;
      std::size_t i = todo[k];
      const Question& q = questions[i];
      try {
        try {
          std::string raw = base_model.complete(q.prompt, options.probe_params);
          VerifyResult vr = verify_response(q, raw, judge, limits, options.default_lang);
          GradedQuestion g;
          g.question = q;
          g.trace = make_trace(q, options.model_id, raw, vr);
          g.difficulty = label(q, g.trace, options.method, &scorer, vr.report, options.cuts);
          validate(g);
          journal.append(encode_journal_graded(g));
          fresh[i] = std::move(g);
        } catch (const BackendError& e) {
          QuarantineRecord rec{q.id, options.model_id, e.what()};
          journal.append(encode_journal_quarantine(rec));
          failed[i] = std::move(rec);
        }
      } catch (...) {
        std::lock_guard lock(fail_mutex);
        if (!fatal) fatal = std::current_exception();
        return;
      }
    }
  };

  int workers = std::max(1, options.workers);
  workers = std::min<int>(workers, std::max<std::size_t>(todo.size(), 1));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (int w = 0; w < workers; ++w) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  if (fatal) std::rethrow_exception(fatal);

  GradeAllResult result;
  for (std::size_t i = 0; i < questions.size(); ++i) {
    const std::string& id = questions[i].id;
    if (fresh[i]) {
      result.graded.push_back(std::move(*fresh[i]));
    } else if (failed[i]) {
      result.quarantined.push_back(std::move(*failed[i]));
    } else if (auto it = done.graded.find(id); it != done.graded.end()) {
      result.graded.push_back(it->second);
    } else if (auto qt = done.quarantined.find(id); qt != done.quarantined.end()) {
      result.quarantined.push_back(qt->second);
    }
  }

  if (!questions.empty()) {
    double fraction = static_cast<double>(result.quarantined.size()) /
                      static_cast<double>(questions.size());
    if (fraction > options.max_quarantine_fraction) {
      throw QuarantineError(std::to_string(result.quarantined.size()) + " of " +
                            std::to_string(questions.size()) +
                            " questions quarantined, above the allowed fraction " +
                            std::to_string(options.max_quarantine_fraction));
    }
  }
  return result;
}

DbStats stats(const std::vector<GradedQuestion>& db) {
  DbStats s;
  s.total = db.size();
  std::array<double, kLevelCount> sums{};
  for (const GradedQuestion& g : db) {
    std::size_t i = static_cast<std::size_t>(g.difficulty.label);
    s.counts[i]++;
    if (g.difficulty.score) {
      LevelScoreStats& ls = s.scores[i];
      double score = *g.difficulty.score;
      if (ls.count == 0) {
        ls.min = ls.max = score;
      } else {
        ls.min = std::min(ls.min, score);
        ls.max = std::max(ls.max, score);
      }
      sums[i] += score;
      ls.count++;
    }
  }
  for (std::size_t i = 0; i < kLevelCount; ++i) {
    if (s.scores[i].count > 0) {
      s.scores[i].mean = sums[i] / static_cast<double>(s.scores[i].count);
    }
  }
  return s;
}

std::string render_stats(const DbStats& s) {
  std::ostringstream out;
  out << "label  count";
  out << "  score_min  score_mean  score_max\n";
  for (Level l : kAllLevels) {
    std::size_t i = static_cast<std::size_t>(l);
    out << to_string(l);
    for (std::size_t pad = to_string(l).size(); pad < 7; ++pad) out << ' ';
    out << s.counts[i];
    if (s.scores[i].count > 0) {
      out << "  " << s.scores[i].min << "  " << s.scores[i].mean << "  " << s.scores[i].max;
    }
    out << '\n';
  }
  out << "total  " << s.total << '\n';
  return out.str();
}

}  // namespace cotforge
