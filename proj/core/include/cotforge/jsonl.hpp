#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace cotforge {

// Calls fn(line_number, line) for every nonempty line of a JSONL file.
// Line numbers are 1-based. Throws ValidationError if the file is unreadable;
// decoding errors thrown by fn are rethrown with "file:line: " prepended.
void for_each_jsonl_line(const std::filesystem::path& file,
                         const std::function<void(std::size_t, const std::string&)>& fn);

// Reads a whole file into a string; ValidationError if unreadable.
std::string read_text_file(const std::filesystem::path& file);

// Atomically replaces `file` with `content` (write to temp + rename).
void write_text_file_atomic(const std::filesystem::path& file, const std::string& content);

// Decode an entire JSONL file through a per-line decoder.
template <typename T>
std::vector<T> read_jsonl(const std::filesystem::path& file,
                          T (*decode)(std::string_view)) {
  std::vector<T> out;
  for_each_jsonl_line(file, [&](std::size_t, const std::string& line) {
    out.push_back(decode(line));
  });
  return out;
}

}  // namespace cotforge
