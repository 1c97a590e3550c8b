#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "cotforge/records.hpp"

namespace cotforge {

struct CodeBlock {
  std::string source;  // fence body, fence markers stripped
  std::string lang;    // fence info string ("python", "cpp", ...), may be empty
};

// Content of the last \boxed{...} in the text, brace-balanced.
std::optional<std::string> extract_boxed(std::string_view text);

// Last standalone number or fraction token ("42", "1,234", "3.5", "3/4",
// "\frac{1}{2}"). Tokens glued to identifiers or dotted sequences are skipped.
std::optional<std::string> extract_last_number_token(std::string_view text);

// Body of the last complete ``` fenced block, with its info string.
std::optional<CodeBlock> extract_last_code_block(std::string_view text);

// The per-task extraction rule: math prefers \boxed, falling back to the
// last number token; code takes the last fenced block. nullopt means the
// trace has no usable answer and its verdict becomes error.
std::optional<std::string> extract_final_answer(std::string_view raw_text, Task task);

// Half-open [begin, end) character range of a token inside the raw text.
struct TokenSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};

// Span of the text's final answer token: the later of the last \boxed{...}
// and the last fenced block (markers included), else the last number token.
std::optional<TokenSpan> find_final_answer_span(std::string_view text);

}  // namespace cotforge
