#pragma once

#include <string>
#include <string_view>

namespace cotforge {

// Exact rational, always reduced, den > 0.
struct Rational {
  long long num = 0;
  long long den = 1;

  friend bool operator==(const Rational&, const Rational&) = default;
};

enum class AnswerUnit { kNone, kPercent, kDegree };

// Canonical form of a math answer: an exact rational where the input parses
// as one (integers, a/b, \frac{a}{b}, terminating decimals), otherwise the
// cleaned string. Equivalence scope is deliberately rationals + literal
// strings, not a CAS; symbolic forms like \sqrt{2} compare as cleaned text.
struct NormalizedAnswer {
  enum class Kind { kRational, kText };

  Kind kind = Kind::kText;
  Rational value;             // meaningful only when kind == kRational
  bool from_decimal = false;  // value was written as a decimal literal
  std::string text;           // cleaned input, always set
  AnswerUnit unit = AnswerUnit::kNone;
};

// String-level cleanup: trims whitespace, strips surrounding $...$,
// removes \left and \right, strips validated thousands separators, trailing
// periods, and a trailing percent/degree mark (reported through *unit).
// Idempotent: clean(clean(s)) == clean(s).
std::string clean_answer_text(std::string_view s, AnswerUnit* unit = nullptr);

NormalizedAnswer normalize_math_answer(std::string_view s);

// True iff the rational p/q (reduced) has a terminating base-10 expansion.
bool terminates_base10(const Rational& r);

// Exact equality when both sides normalize to rationals. When exactly one
// side is a decimal literal and the other an exact non-terminating rational,
// the decimal is accepted within relative 1e-6 of the exact value. Text
// passthroughs compare case- and whitespace-insensitively.
bool math_equivalent(const NormalizedAnswer& a, const NormalizedAnswer& b);
bool math_equivalent(std::string_view a, std::string_view b);

inline constexpr double kDecimalRelTolerance = 1e-6;

// One-line rendering whose re-normalization is equivalent to the input.
std::string canonical_string(const NormalizedAnswer& a);

}  // namespace cotforge
