#include "cli/values.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "sqd/errors.hpp"

namespace sqd::cli {
namespace {

double parse_plain(std::string_view text, std::string_view whole) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
    throw InvalidArgument("cannot parse number '" + std::string(whole) + "'");
  return v;
}

std::string_view strip(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

double parse_value(std::string_view text) {
  const std::string_view whole = text;
  text = strip(text);
  const auto pi_pos = text.find("pi");
  if (pi_pos == std::string_view::npos) return parse_plain(text, whole);

  double sign = 1.0;
  std::string_view before = text.substr(0, pi_pos);
  std::string_view after = text.substr(pi_pos + 2);
  double factor = 1.0;
  if (!before.empty() && before.front() == '-') {
    sign = -1.0;
    before.remove_prefix(1);
  }
  if (!before.empty()) {
    if (before.back() != '*') throw InvalidArgument("cannot parse angle '" + std::string(whole) + "'");
    before.remove_suffix(1);
    factor = parse_plain(before, whole);
  }
  double divisor = 1.0;
  if (!after.empty()) {
    if (after.front() != '/') throw InvalidArgument("cannot parse angle '" + std::string(whole) + "'");
    after.remove_prefix(1);
    divisor = parse_plain(after, whole);
    if (divisor == 0.0) throw InvalidArgument("division by zero in '" + std::string(whole) + "'");
  }
  return sign * factor * std::numbers::pi / divisor;
}

std::vector<double> parse_list(const std::vector<std::string>& items) {
  std::vector<double> out;
  for (const std::string& raw : items) {
    std::string_view item = strip(raw);
    const auto c1 = item.find(':');
    if (c1 == std::string_view::npos) {
      out.push_back(parse_value(item));
      continue;
    }
    const auto c2 = item.find(':', c1 + 1);
    if (c2 == std::string_view::npos)
      throw InvalidArgument("range '" + raw + "' must look like start:stop:count");
    const double a = parse_value(item.substr(0, c1));
    const double b = parse_value(item.substr(c1 + 1, c2 - c1 - 1));
    const double n = parse_plain(strip(item.substr(c2 + 1)), raw);
    if (n < 1 || n != std::floor(n)) throw InvalidArgument("range count must be a positive integer");
    const auto count = static_cast<int>(n);
    for (int i = 0; i < count; ++i)
      out.push_back(count == 1 ? a : a + (b - a) * i / (count - 1));
  }
  return out;
}

std::vector<double> half_open_grid(double a, double b, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(a + (b - a) * i / n);
  return out;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

}  // namespace sqd::cli
