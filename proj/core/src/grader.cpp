#include "cotforge/grader.hpp"

#include <cctype>
#include <numeric>

#include "cotforge/errors.hpp"

namespace cotforge {

namespace {

bool blank(const std::string& line) {
  for (char c : line) {
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

std::vector<std::string> segment_steps(const std::string& raw_text, std::size_t min_chars) {
  std::vector<std::string> paragraphs;
  std::string current;
  std::size_t pos = 0;
  bool prev_blank = true;
  while (pos <= raw_text.size()) {
    std::size_t nl = raw_text.find('\n', pos);
    std::string line = nl == std::string::npos ? raw_text.substr(pos)
                                               : raw_text.substr(pos, nl - pos);
    if (blank(line)) {
      if (!prev_blank) {
        paragraphs.push_back(current);
        current.clear();
      }
      prev_blank = true;
    } else {
      if (!current.empty()) current.push_back('\n');
      current += line;
      prev_blank = false;
    }
    if (nl == std::string::npos) break;
    pos = nl + 1;
  }
  if (!current.empty()) paragraphs.push_back(current);
  if (paragraphs.empty()) paragraphs.push_back(raw_text);

  std::vector<std::string> merged;
  for (std::string& p : paragraphs) {
    if (p.size() < min_chars && !merged.empty()) {
      merged.back().push_back('\n');
      merged.back() += p;
    } else {
      merged.push_back(std::move(p));
    }
  }
  // a short leading segment has no predecessor; merge it forward
  while (merged.size() > 1 && merged.front().size() < min_chars) {
    merged[1] = merged[0] + "\n" + merged[1];
    merged.erase(merged.begin());
  }
  return merged;
}

StepScores prm_score(const Question& question, const ModelTrace& trace, StepScorer& scorer) {
  if (trace.verdict == Verdict::kCorrect) {
    throw ContractError("prm_score called on a correct trace for question \"" +
                        question.id + "\"");
  }
  StepScores result;
  result.steps = segment_steps(trace.raw_text);
  result.scores = scorer.score_steps(question.prompt, result.steps);
  if (result.scores.size() != result.steps.size()) {
    throw MalformedResponseError("scorer returned " + std::to_string(result.scores.size()) +
                                 " scores for " + std::to_string(result.steps.size()) +
                                 " steps");
  }
  result.mean = std::accumulate(result.scores.begin(), result.scores.end(), 0.0) /
                static_cast<double>(result.scores.size());
  return result;
}

Level score_to_level(double score, const LevelCuts& cuts) {
  if (!(score >= 0.0 && score <= 1.0)) {
    throw ContractError("score " + std::to_string(score) + " outside [0,1]");
  }
  if (score < cuts.cuts[0]) return Level::kL5;
  if (score < cuts.cuts[1]) return Level::kL4;
  if (score < cuts.cuts[2]) return Level::kL3;
  if (score < cuts.cuts[3]) return Level::kL2;
  return Level::kL1;
}

Level ut_pass_rate_level(const TestReport& report, const LevelCuts& cuts) {
  if (report.total <= 0) throw ContractError("ut grading requires a nonempty report");
  if (report.passed >= report.total) {
    throw ContractError("all-pass report reached the grader; it should be easy upstream");
  }
  double rate = static_cast<double>(report.passed) / static_cast<double>(report.total);
  return score_to_level(rate, cuts);
}

DifficultyLabel label(const Question& question, const ModelTrace& trace,
                      GradingMethod method, StepScorer* scorer,
                      const std::optional<TestReport>& report, const LevelCuts& cuts) {
  DifficultyLabel out;
  out.method = method;
  if (trace.verdict == Verdict::kCorrect) {
    out.label = Level::kEasy;
    return out;
  }

  if (method == GradingMethod::kUt) {
    if (question.task != Task::kCode) {
      throw ContractError("ut grading requires a code task (question \"" + question.id +
                          "\")");
    }
    if (report && report->total > 0) {
      out.score = static_cast<double>(report->passed) / static_cast<double>(report->total);
      out.label = ut_pass_rate_level(*report, cuts);
    } else {
      // nothing ran (extraction failed): hardest level
      out.score = 0.0;
      out.label = Level::kL5;
    }
    return out;
  }

  if (!scorer) {
    throw ContractError("prm grading requires a scorer backend (question \"" + question.id +
                        "\")");
  }
  StepScores scores = prm_score(question, trace, *scorer);
  out.score = scores.mean;
  out.label = score_to_level(scores.mean, cuts);
  return out;
}

}  // namespace cotforge
