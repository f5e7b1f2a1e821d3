#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace sqd::cli {

/// Parses a real number or a multiple of pi: "0.5", "pi", "pi/2", "3*pi/4", "-pi/4".
double parse_value(std::string_view text);

/// Comma-separated values; an item "a:b:n" expands to n evenly spaced values
/// from a to b inclusive.
std::vector<double> parse_list(const std::vector<std::string>& items);

/// n points in [a, b) (endpoint excluded).
std::vector<double> half_open_grid(double a, double b, int n);

/// "%.15g" rendering used for every number in emitted tables.
std::string format_number(double v);

}  // namespace sqd::cli
