#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dpg {

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

/// Strict full-string parse; throws std::invalid_argument.
double parse_double(std::string_view text);
long long parse_integer(std::string_view text);

std::string_view trim(std::string_view text);
std::vector<std::string_view> split_whitespace(std::string_view text);

}  // namespace dpg
