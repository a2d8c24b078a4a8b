#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace blic {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// Whole-string parse; throws std::invalid_argument on trailing garbage.
double parse_double(std::string_view text);
long long parse_integer(std::string_view text);

std::string_view trim(std::string_view text);
std::vector<std::string_view> split(std::string_view text, char sep);
/// Splits on runs of spaces and tabs.
std::vector<std::string_view> split_whitespace(std::string_view text);

}  // namespace blic
