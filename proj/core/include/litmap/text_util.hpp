#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace litmap::text {

/// Replaces every invalid UTF-8 sequence with U+FFFD. Returns true if any
/// replacement happened.
bool sanitize_utf8(std::string& s);

std::string_view trim(std::string_view s);
std::string_view trim_right(std::string_view s);

/// ASCII case fold; bytes >= 0x80 are left alone.
std::string to_lower(std::string_view s);

/// Trims and collapses internal whitespace runs to one space.
std::string collapse_whitespace(std::string_view s);

std::vector<std::string> split_lines(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);

std::size_t codepoint_count(std::string_view s);

bool iequals(std::string_view a, std::string_view b);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace litmap::text
