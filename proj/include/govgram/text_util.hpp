#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace govgram {

/// Half-open byte range [begin, end).
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
  bool empty() const noexcept { return end <= begin; }
  bool contains(const Span& other) const noexcept {
    return begin <= other.begin && other.end <= end;
  }
  friend bool operator==(const Span&, const Span&) = default;
};

inline std::string_view slice(std::string_view text, Span span) {
  return text.substr(span.begin, span.end - span.begin);
}

struct Token {
  std::string_view text;
  std::string lower;
  Span span;
  bool is_word = false;
};

/// Splits text into word and punctuation tokens. Words may carry internal
/// apostrophes, hyphens and underscores ("can't", "co-chair"). Bytes >= 0x80
/// are treated as word characters.
std::vector<Token> tokenize(std::string_view text);

std::string to_lower(std::string_view text);
std::string_view trim(std::string_view text);
std::vector<std::string_view> split(std::string_view text, char delimiter);
bool starts_with_ci(std::string_view text, std::string_view prefix);
bool is_upper_ascii(char c) noexcept;

/// Collapses whitespace runs to single spaces and trims.
std::string collapse_whitespace(std::string_view text);

/// Shortest round-trip decimal representation.
std::string format_double(double value);
/// Fixed-precision representation for human-facing tables.
std::string format_fixed(double value, int digits);

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(std::string_view value);
/// Splits one CSV line, honoring double-quoted fields.
std::vector<std::string> parse_csv_line(std::string_view line);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

/// Lowercase hex SHA-256 digest.
std::string sha256_hex(std::string_view data);

/// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is
/// visited exactly once; results written to per-index slots are therefore
/// independent of the worker count.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace govgram
