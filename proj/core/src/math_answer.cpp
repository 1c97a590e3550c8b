#include "cotforge/math_answer.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>

namespace cotforge {

namespace {

using int128 = __int128;

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool consume_suffix(std::string& s, std::string_view suffix) {
  if (s.size() >= suffix.size() &&
      std::string_view(s).substr(s.size() - suffix.size()) == suffix) {
    s.erase(s.size() - suffix.size());
    return true;
  }
  return false;
}

void erase_all(std::string& s, std::string_view token) {
  std::size_t pos = 0;
  while ((pos = s.find(token, pos)) != std::string::npos) s.erase(pos, token.size());
}

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
}

// "1,234,567" or "1,234.5" -> commas removed; anything else untouched.
// Only the fully validated thousands pattern is rewritten.
std::string strip_thousands_separators(const std::string& s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  std::size_t head = i;
  while (i < s.size() && is_digit(s[i])) ++i;
  std::size_t head_len = i - head;
  if (head_len == 0 || head_len > 3) return s;
  bool saw_group = false;
  while (i + 3 < s.size() && s[i] == ',' && is_digit(s[i + 1]) && is_digit(s[i + 2]) &&
         is_digit(s[i + 3])) {
    saw_group = true;
    i += 4;
  }
  if (!saw_group) return s;
  if (i < s.size()) {
    if (s[i] != '.') return s;
    ++i;
    while (i < s.size() && is_digit(s[i])) ++i;
  }
  if (i != s.size()) return s;
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c != ',') out.push_back(c);
  }
  return out;
}

std::optional<Rational> make_rational(int128 num, int128 den) {
  if (den == 0) return std::nullopt;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  int128 a = num < 0 ? -num : num;
  int128 b = den;
  while (b != 0) {
    int128 t = a % b;
    a = b;
    b = t;
  }
  if (a != 0) {
    num /= a;
    den /= a;
  }
  constexpr int128 kMax = std::numeric_limits<long long>::max();
  constexpr int128 kMin = std::numeric_limits<long long>::min();
  if (num > kMax || num < kMin || den > kMax) return std::nullopt;
  return Rational{static_cast<long long>(num), static_cast<long long>(den)};
}

// Parses a run of up to 18 digits; longer runs do not fit our exact range.
std::optional<int128> parse_digits(std::string_view s) {
  if (s.empty() || s.size() > 18) return std::nullopt;
  int128 v = 0;
  for (char c : s) {
    if (!is_digit(c)) return std::nullopt;
    v = v * 10 + (c - '0');
  }
  return v;
}

std::optional<long long> parse_signed_int(std::string_view s) {
  s = trim(s);
  bool neg = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  auto digits = parse_digits(s);
  if (!digits) return std::nullopt;
  int128 v = neg ? -*digits : *digits;
  return static_cast<long long>(v);
}

int128 pow10(std::size_t n) {
  int128 v = 1;
  while (n--) v *= 10;
  return v;
}

struct ParsedValue {
  Rational value;
  bool from_decimal = false;
};

// integer | decimal | a/b | [-]\frac{a}{b}, already cleaned.
std::optional<ParsedValue> parse_rational_text(const std::string& cleaned) {
  std::string s(trim(cleaned));
  if (s.empty()) return std::nullopt;

  bool neg = false;
  std::size_t i = 0;
  if (s[0] == '+' || s[0] == '-') {
    neg = s[0] == '-';
    i = 1;
  }

  if (s.compare(i, 6, "\\frac{") == 0) {
    std::size_t a_end = s.find('}', i + 6);
    if (a_end == std::string::npos) return std::nullopt;
    if (a_end + 1 >= s.size() || s[a_end + 1] != '{') return std::nullopt;
    std::size_t b_end = s.find('}', a_end + 2);
    if (b_end == std::string::npos || b_end + 1 != s.size()) return std::nullopt;
    auto a = parse_signed_int(s.substr(i + 6, a_end - (i + 6)));
    auto b = parse_signed_int(s.substr(a_end + 2, b_end - (a_end + 2)));
    if (!a || !b) return std::nullopt;
    auto r = make_rational(int128(neg ? -*a : *a), int128(*b));
    if (!r) return std::nullopt;
    return ParsedValue{*r, false};
  }

  std::string body = strip_thousands_separators(s.substr(i));

  if (std::size_t slash = body.find('/'); slash != std::string::npos) {
    auto a = parse_signed_int(std::string_view(body).substr(0, slash));
    auto b = parse_signed_int(std::string_view(body).substr(slash + 1));
    if (!a || !b) return std::nullopt;
    auto r = make_rational(int128(neg ? -*a : *a), int128(*b));
    if (!r) return std::nullopt;
    return ParsedValue{*r, false};
  }

  if (std::size_t dot = body.find('.'); dot != std::string::npos) {
    std::string_view whole = std::string_view(body).substr(0, dot);
    std::string_view frac = std::string_view(body).substr(dot + 1);
    if (whole.empty() && frac.empty()) return std::nullopt;
    auto w = whole.empty() ? std::optional<int128>(0) : parse_digits(whole);
    auto f = frac.empty() ? std::optional<int128>(0) : parse_digits(frac);
    if (!w || !f) return std::nullopt;
    int128 den = pow10(frac.size());
    int128 num = *w * den + *f;
    auto r = make_rational(neg ? -num : num, den);
    if (!r) return std::nullopt;
    return ParsedValue{*r, true};
  }

  auto digits = parse_digits(body);
  if (!digits) return std::nullopt;
  auto r = make_rational(neg ? -*digits : *digits, 1);
  if (!r) return std::nullopt;
  return ParsedValue{*r, false};
}

// lowercase with all whitespace removed, for text comparisons
std::string fold_text(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (is_space(c)) continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

double as_double(const Rational& r) {
  return static_cast<double>(r.num) / static_cast<double>(r.den);
}

}  // namespace

std::string clean_answer_text(std::string_view input, AnswerUnit* unit_out) {
  std::string s(trim(input));
  AnswerUnit unit = AnswerUnit::kNone;

  for (int pass = 0; pass < 4; ++pass) {
    std::string before = s;

    s = std::string(trim(s));
    if (s.size() >= 2 && s.front() == '$' && s.back() == '$') {
      s = std::string(trim(std::string_view(s).substr(1, s.size() - 2)));
    }
    erase_all(s, "\\left");
    erase_all(s, "\\right");
    replace_all(s, "\\dfrac", "\\frac");
    replace_all(s, "\\tfrac", "\\frac");
    s = std::string(trim(s));

    while (!s.empty() && s.back() == '.') s.pop_back();
    s = std::string(trim(s));

    if (consume_suffix(s, "\\%") || consume_suffix(s, "%")) {
      unit = AnswerUnit::kPercent;
    } else if (consume_suffix(s, "^{\\circ}") || consume_suffix(s, "^\\circ") ||
               consume_suffix(s, "\\degree") || consume_suffix(s, "°")) {
      unit = AnswerUnit::kDegree;
    }
    s = std::string(trim(s));

    if (s == before) break;
  }

  if (unit_out) *unit_out = unit;
  return s;
}

NormalizedAnswer normalize_math_answer(std::string_view input) {
  NormalizedAnswer out;
  out.text = clean_answer_text(input, &out.unit);
  if (auto parsed = parse_rational_text(out.text)) {
    out.kind = NormalizedAnswer::Kind::kRational;
    out.value = parsed->value;
    out.from_decimal = parsed->from_decimal;
  }
  return out;
}

bool terminates_base10(const Rational& r) {
  long long d = r.den;
  while (d % 2 == 0) d /= 2;
  while (d % 5 == 0) d /= 5;
  return d == 1;
}

bool math_equivalent(const NormalizedAnswer& a, const NormalizedAnswer& b) {
  using Kind = NormalizedAnswer::Kind;
  if (a.kind == Kind::kRational && b.kind == Kind::kRational) {
    if (a.value == b.value) return true;
    if (a.from_decimal != b.from_decimal) {
      const NormalizedAnswer& exact = a.from_decimal ? b : a;
      const NormalizedAnswer& approx = a.from_decimal ? a : b;
      if (!terminates_base10(exact.value)) {
        double ev = as_double(exact.value);
        double av = as_double(approx.value);
        return std::abs(av - ev) <= kDecimalRelTolerance * std::abs(ev);
      }
    }
    return false;
  }
  if (a.kind == Kind::kText && b.kind == Kind::kText) {
    return fold_text(a.text) == fold_text(b.text);
  }
  return false;
}

bool math_equivalent(std::string_view a, std::string_view b) {
  return math_equivalent(normalize_math_answer(a), normalize_math_answer(b));
}

std::string canonical_string(const NormalizedAnswer& a) {
  std::string body;
  if (a.kind == NormalizedAnswer::Kind::kRational) {
    body = std::to_string(a.value.num);
    if (a.value.den != 1) body += "/" + std::to_string(a.value.den);
  } else {
    body = a.text;
  }
  switch (a.unit) {
    case AnswerUnit::kPercent: body += "%"; break;
    case AnswerUnit::kDegree: body += "°"; break;
    case AnswerUnit::kNone: break;
  }
  return body;
}

}  // namespace cotforge
