#pragma once

#include <string>
#include <string_view>

namespace robgxe {

/// Shortest decimal text that parses back to exactly `x`. NaN prints as "NA".
std::string format_double(double x);

/// Strict parse of a whole field; returns false on trailing garbage or empty input.
bool parse_double(std::string_view text, double& out);

}  // namespace robgxe
