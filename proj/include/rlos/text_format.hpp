#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace rlos {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// Fixed-point text with `digits` fractional digits.
std::string format_fixed(double value, int digits);

/// Strict full-string parse; throws ValidationError naming `what`.
double parse_double(std::string_view text, std::string_view what);
long long parse_integer(std::string_view text, std::string_view what);

std::vector<std::string> split(std::string_view text, char sep);
std::string_view trim(std::string_view text);

}  // namespace rlos
