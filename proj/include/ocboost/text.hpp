#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ocboost {

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

// Strict parse of a whole field; throws FormatError naming `what`.
double parse_double(std::string_view s, std::string_view what);
long long parse_int(std::string_view s, std::string_view what);

std::vector<std::string_view> split(std::string_view line, char sep);
std::string_view trim(std::string_view s);

}  // namespace ocboost
