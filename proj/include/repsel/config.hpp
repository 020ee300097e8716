#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace repsel {

/// Input that failed to parse; carries the 1-based line number (0 if unknown).
class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, const std::string& what);
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

struct KeyValue {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

/// Parses `key = value` lines. `#` starts a comment, blank lines are skipped,
/// and a `[section]` header prefixes following keys with `section.`.
std::vector<KeyValue> parse_key_values(std::string_view text);

std::string read_file(const std::string& path);

double parse_double(const KeyValue& kv);
long long parse_integer(const KeyValue& kv);
bool parse_bool(const KeyValue& kv);
/// Splits a comma-separated list, trimming whitespace; empty items are dropped.
std::vector<std::string> split_list(std::string_view text, char sep = ',');
std::string trim(std::string_view s);

}  // namespace repsel
