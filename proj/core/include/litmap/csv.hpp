#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace litmap::csv {

using Row = std::vector<std::string>;

/// RFC 4180 reader: quoted fields may hold commas, doubled quotes, and line
/// breaks. Each row carries the 1-based line number it started on.
struct ParsedRow {
  std::size_t line = 0;
  Row fields;
};

/// Throws FormatError on an unterminated quoted field.
std::vector<ParsedRow> parse(std::string_view text);

/// Quotes a field only when it contains a comma, quote, line break, or
/// leading/trailing whitespace.
std::string escape(std::string_view field);

std::string format_row(const Row& row);

}  // namespace litmap::csv
