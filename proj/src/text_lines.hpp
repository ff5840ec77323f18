#pragma once

// Line-oriented tokenizer shared by the text readers.

#include <spemb/error.hpp>

#include <charconv>
#include <cmath>
#include <istream>
#include <string>
#include <vector>

namespace spemb::detail {

struct Line {
  std::size_t number = 0;
  std::vector<std::string> tokens;
};

/// Yields non-blank lines with `#` comments stripped.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(Line& line) {
    std::string raw;
    while (std::getline(in_, raw)) {
      ++count_;
      if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
      line.tokens.clear();
      std::size_t i = 0;
      while (i < raw.size()) {
        while (i < raw.size() && is_space(raw[i])) ++i;
        std::size_t j = i;
        while (j < raw.size() && !is_space(raw[j])) ++j;
        if (j > i) line.tokens.emplace_back(raw, i, j - i);
        i = j;
      }
      if (!line.tokens.empty()) {
        line.number = count_;
        return true;
      }
    }
    return false;
  }

  std::size_t line_number() const { return count_; }

 private:
  static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

  std::istream& in_;
  std::size_t count_ = 0;
};

inline double to_real(const std::string& tok, std::size_t line) {
  double v = 0.0;
  const char* first = tok.data();
  if (!tok.empty() && tok[0] == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
    throw ParseError(line, "non-numeric token '" + tok + "'");
  }
  return v;
}

inline std::size_t to_index(const std::string& tok, std::size_t line, const char* what) {
  unsigned long long v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    if (!tok.empty() && tok[0] == '-') throw ParseError(line, std::string("negative ") + what + " '" + tok + "'");
    throw ParseError(line, std::string("non-numeric token '") + tok + "' for " + what);
  }
  return static_cast<std::size_t>(v);
}

/// Shortest decimal form that round-trips.
inline std::string format_real(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace spemb::detail
