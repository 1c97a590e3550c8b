#include "cotforge/jsonl.hpp"

#include <fstream>
#include <sstream>

#include "cotforge/errors.hpp"

namespace cotforge {

void for_each_jsonl_line(const std::filesystem::path& file,
                         const std::function<void(std::size_t, const std::string&)>& fn) {
  std::ifstream in(file);
  if (!in) throw ValidationError("cannot open " + file.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      fn(line_no, line);
    } catch (const ValidationError& e) {
      throw ValidationError(file.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

std::string read_text_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file_atomic(const std::filesystem::path& file, const std::string& content) {
  std::filesystem::path tmp = file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw ValidationError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, file);
}

}  // namespace cotforge
