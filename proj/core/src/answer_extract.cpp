#include "cotforge/answer_extract.hpp"

#include <cctype>

namespace cotforge {

namespace {

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

// Token boundary: a number must not be glued to an identifier or to a dotted
// sequence like "v1.2.3".
bool boundary_before(std::string_view text, std::size_t pos) {
  if (pos == 0) return true;
  char prev = text[pos - 1];
  return !is_word_char(prev) && prev != '.';
}

bool boundary_after(std::string_view text, std::size_t pos) {
  if (pos >= text.size()) return true;
  return !is_word_char(text[pos]);
}

// Tries to read a number token at `i`: sign? digits (, groups)? (.digits)?
// (/digits)?. Returns one past the end, or npos if there is no token here.
std::size_t scan_number_token(std::string_view text, std::size_t i) {
  std::size_t start = i;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) ++i;
  std::size_t digits_start = i;
  while (i < text.size() && is_digit(text[i])) ++i;
  if (i == digits_start) return std::string_view::npos;

  bool grouped = false;
  if (i - digits_start <= 3) {
    std::size_t j = i;
    while (j + 3 < text.size() && text[j] == ',' && is_digit(text[j + 1]) &&
           is_digit(text[j + 2]) && is_digit(text[j + 3]) &&
           (j + 4 >= text.size() || !is_digit(text[j + 4]))) {
      grouped = true;
      j += 4;
    }
    if (grouped) i = j;
  }

  bool fractional = false;
  if (!grouped && i + 1 < text.size() && text[i] == '.' && is_digit(text[i + 1])) {
    fractional = true;
    ++i;
    while (i < text.size() && is_digit(text[i])) ++i;
  }

  if (!grouped && !fractional) {
    std::size_t j = i;
    while (j < text.size() && (text[j] == ' ' || text[j] == '\t')) ++j;
    if (j < text.size() && text[j] == '/') {
      ++j;
      while (j < text.size() && (text[j] == ' ' || text[j] == '\t')) ++j;
      std::size_t den_start = j;
      while (j < text.size() && is_digit(text[j])) ++j;
      if (j > den_start && boundary_after(text, j)) i = j;
    }
  }

  if (!boundary_before(text, start) || !boundary_after(text, i)) {
    return std::string_view::npos;
  }
  return i;
}

// \frac{int}{int} with an optional sign, returned whole.
std::size_t scan_frac_token(std::string_view text, std::size_t i) {
  std::size_t start = i;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) ++i;
  for (std::string_view head : {"\\frac{", "\\dfrac{", "\\tfrac{"}) {
    if (text.substr(i).starts_with(head)) {
      std::size_t p = i + head.size();
      auto eat_int = [&](std::size_t q) -> std::size_t {
        if (q < text.size() && (text[q] == '+' || text[q] == '-')) ++q;
        std::size_t d = q;
        while (q < text.size() && is_digit(text[q])) ++q;
        return q > d ? q : std::string_view::npos;
      };
      std::size_t q = eat_int(p);
      if (q == std::string_view::npos || q >= text.size() || text[q] != '}') continue;
      ++q;
      if (q >= text.size() || text[q] != '{') continue;
      q = eat_int(q + 1);
      if (q == std::string_view::npos || q >= text.size() || text[q] != '}') continue;
      return q + 1;
    }
  }
  (void)start;
  return std::string_view::npos;
}

}  // namespace

std::optional<std::string> extract_boxed(std::string_view text) {
  constexpr std::string_view kMarker = "\\boxed{";
  std::size_t open = text.rfind(kMarker);
  if (open == std::string_view::npos) return std::nullopt;
  std::size_t i = open + kMarker.size();
  int depth = 1;
  std::string content;
  while (i < text.size()) {
    char c = text[i];
    if (c == '\\' && i + 1 < text.size()) {
      content.push_back(c);
      content.push_back(text[i + 1]);
      i += 2;
      continue;
    }
    if (c == '{') {
      ++depth;
    } else if (c == '}') {
      --depth;
      if (depth == 0) return content;
    }
    content.push_back(c);
    ++i;
  }
  return std::nullopt;  // unbalanced, no usable content
}

std::optional<std::string> extract_last_number_token(std::string_view text) {
  std::optional<std::string> last;
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::size_t end = scan_frac_token(text, i); end != std::string_view::npos) {
      last = std::string(text.substr(i, end - i));
      i = end;
      continue;
    }
    char c = text[i];
    if (is_digit(c) || ((c == '+' || c == '-') && i + 1 < text.size() && is_digit(text[i + 1]))) {
      if (std::size_t end = scan_number_token(text, i); end != std::string_view::npos) {
        last = std::string(text.substr(i, end - i));
        i = end;
        continue;
      }
      // skip the glued run so "v1.2.3" is not re-scanned from inside
      while (i < text.size() && (is_word_char(text[i]) || text[i] == '.')) ++i;
      continue;
    }
    ++i;
  }
  return last;
}

std::optional<CodeBlock> extract_last_code_block(std::string_view text) {
  constexpr std::string_view kFence = "```";
  std::optional<CodeBlock> last;
  std::size_t pos = 0;
  while (true) {
    std::size_t open = text.find(kFence, pos);
    if (open == std::string_view::npos) break;
    std::size_t info_end = text.find('\n', open + kFence.size());
    if (info_end == std::string_view::npos) break;
    std::size_t close = text.find(kFence, info_end + 1);
    if (close == std::string_view::npos) break;

    std::string lang(text.substr(open + kFence.size(), info_end - open - kFence.size()));
    while (!lang.empty() && (lang.back() == ' ' || lang.back() == '\r')) lang.pop_back();
    while (!lang.empty() && lang.front() == ' ') lang.erase(lang.begin());

    std::string body(text.substr(info_end + 1, close - info_end - 1));
    if (!body.empty() && body.back() == '\n') body.pop_back();

    last = CodeBlock{std::move(body), std::move(lang)};
    pos = close + kFence.size();
  }
  return last;
}

std::optional<std::string> extract_final_answer(std::string_view raw_text, Task task) {
  if (task == Task::kCode) {
    auto block = extract_last_code_block(raw_text);
    if (!block) return std::nullopt;
    return block->source;
  }
  if (auto boxed = extract_boxed(raw_text)) return boxed;
  return extract_last_number_token(raw_text);
}

namespace {

std::optional<TokenSpan> find_boxed_span(std::string_view text) {
  constexpr std::string_view kMarker = "\\boxed{";
  std::size_t open = text.rfind(kMarker);
  if (open == std::string_view::npos) return std::nullopt;
  std::size_t i = open + kMarker.size();
  int depth = 1;
  while (i < text.size()) {
    char c = text[i];
    if (c == '\\' && i + 1 < text.size()) {
      i += 2;
      continue;
    }
    if (c == '{') ++depth;
    if (c == '}' && --depth == 0) return TokenSpan{open, i + 1};
    ++i;
  }
  return std::nullopt;
}

std::optional<TokenSpan> find_fence_span(std::string_view text) {
  constexpr std::string_view kFence = "```";
  std::optional<TokenSpan> last;
  std::size_t pos = 0;
  while (true) {
    std::size_t open = text.find(kFence, pos);
    if (open == std::string_view::npos) break;
    std::size_t info_end = text.find('\n', open + kFence.size());
    if (info_end == std::string_view::npos) break;
    std::size_t close = text.find(kFence, info_end + 1);
    if (close == std::string_view::npos) break;
    last = TokenSpan{open, close + kFence.size()};
    pos = close + kFence.size();
  }
  return last;
}

std::optional<TokenSpan> find_number_span(std::string_view text) {
  std::optional<TokenSpan> last;
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::size_t end = scan_frac_token(text, i); end != std::string_view::npos) {
      last = TokenSpan{i, end};
      i = end;
      continue;
    }
    char c = text[i];
    if (is_digit(c) || ((c == '+' || c == '-') && i + 1 < text.size() && is_digit(text[i + 1]))) {
      if (std::size_t end = scan_number_token(text, i); end != std::string_view::npos) {
        last = TokenSpan{i, end};
        i = end;
        continue;
      }
      while (i < text.size() && (is_word_char(text[i]) || text[i] == '.')) ++i;
      continue;
    }
    ++i;
  }
  return last;
}

}  // namespace

std::optional<TokenSpan> find_final_answer_span(std::string_view text) {
  auto boxed = find_boxed_span(text);
  auto fence = find_fence_span(text);
  if (boxed && fence) return boxed->begin > fence->begin ? boxed : fence;
  if (boxed) return boxed;
  if (fence) return fence;
  return find_number_span(text);
}

}  // namespace cotforge
