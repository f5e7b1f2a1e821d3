#include "sqd/series.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "sqd/errors.hpp"

namespace sqd {
namespace {

std::string render(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view text, std::size_t line, std::string_view field) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ParseError(line, "field '" + std::string(field) + "' is not a number: '" +
                               std::string(text) + "'");
  if (!std::isfinite(v))
    throw ParseError(line, "field '" + std::string(field) + "' is not finite");
  return v;
}

std::uint64_t parse_index(std::string_view text, std::size_t line) {
  text = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw ParseError(line, "index is not a non-negative integer: '" + std::string(text) + "'");
  return v;
}

}  // namespace

void SeriesMetadata::validate() const {
  if (!(sample_rate > 0.0) || !std::isfinite(sample_rate))
    throw InvalidArgument("sample rate must be positive");
  if (!(shot_noise_variance_raw > 0.0) || !std::isfinite(shot_noise_variance_raw))
    throw InvalidArgument("shot-noise calibration variance must be positive");
  if (!std::isfinite(trigger_angle) || !std::isfinite(verify_angle))
    throw InvalidArgument("detector angles must be finite");
  if (description.find_first_of("\r\n") != std::string::npos)
    throw InvalidArgument("description must be a single line");
}

void save_series(std::span<const QuadratureRecord> records, const SeriesMetadata& metadata,
                 std::ostream& out) {
  metadata.validate();
  out << "# sample_rate_hz=" << render(metadata.sample_rate) << '\n'
      << "# trigger_angle_rad=" << render(metadata.trigger_angle) << '\n'
      << "# verify_angle_rad=" << render(metadata.verify_angle) << '\n'
      << "# shot_noise_variance_raw=" << render(metadata.shot_noise_variance_raw) << '\n'
      << "# description=" << metadata.description << '\n'
      << kSeriesColumns << '\n';
  for (std::size_t i = 0; i < records.size(); ++i) {
    const QuadratureRecord& r = records[i];
    if (!std::isfinite(r.q1) || !std::isfinite(r.q2))
      throw InvalidArgument("record " + std::to_string(r.index) + " has a non-finite value");
    if (i > 0 && r.index <= records[i - 1].index)
      throw InvalidArgument("record indices must be strictly increasing");
    out << r.index << ',' << render(r.q1) << ',' << render(r.q2) << '\n';
  }
  if (!out) throw std::runtime_error("failed writing series");
}

void save_series(std::span<const QuadratureRecord> records, const SeriesMetadata& metadata,
                 const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  save_series(records, metadata, out);
}

Series load_series(std::istream& in) {
  Series s;
  bool seen_rate = false, seen_trigger = false, seen_verify = false, seen_shot = false;
  bool in_data = false;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view text = raw;
    if (!text.empty() && text.back() == '\r') text.remove_suffix(1);
    if (!in_data) {
      if (text.starts_with('#')) {
        const std::string_view body = text.substr(1);
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) continue;
        const std::string_view key = trim(body.substr(0, eq));
        const std::string_view value = body.substr(eq + 1);
        if (key == "sample_rate_hz") {
          s.metadata.sample_rate = parse_double(value, line, key);
          seen_rate = true;
        } else if (key == "trigger_angle_rad") {
          s.metadata.trigger_angle = parse_double(value, line, key);
          seen_trigger = true;
        } else if (key == "verify_angle_rad") {
          s.metadata.verify_angle = parse_double(value, line, key);
          seen_verify = true;
        } else if (key == "shot_noise_variance_raw") {
          s.metadata.shot_noise_variance_raw = parse_double(value, line, key);
          seen_shot = true;
        } else if (key == "description") {
          s.metadata.description = std::string(value);
        }
        continue;
      }
      if (trim(text) != kSeriesColumns)
        throw ParseError(line, "expected column header '" + std::string(kSeriesColumns) + "'");
      if (!(seen_rate && seen_trigger && seen_verify && seen_shot))
        throw ParseError(line, "header is missing a required key (sample_rate_hz, "
                               "trigger_angle_rad, verify_angle_rad, shot_noise_variance_raw)");
      try {
        s.metadata.validate();
      } catch (const InvalidArgument& e) {
        throw ParseError(line, e.what());
      }
      in_data = true;
      continue;
    }
    if (trim(text).empty()) continue;
    const auto c1 = text.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : text.find(',', c1 + 1);
    if (c2 == std::string_view::npos || text.find(',', c2 + 1) != std::string_view::npos)
      throw ParseError(line, "expected three comma-separated fields");
    QuadratureRecord r;
    r.index = parse_index(text.substr(0, c1), line);
    r.q1 = parse_double(text.substr(c1 + 1, c2 - c1 - 1), line, "q1");
    r.q2 = parse_double(text.substr(c2 + 1), line, "q2");
    if (!s.records.empty() && r.index <= s.records.back().index)
      throw ParseError(line, "index " + std::to_string(r.index) + " is not increasing");
    s.records.push_back(r);
  }
  if (!in_data) throw ParseError(line, "missing column header line");
  return s;
}

Series load_series(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, "cannot open '" + path.string() + "'");
  return load_series(in);
}

std::vector<QuadratureRecord> calibrate(std::span<const QuadratureRecord> records,
                                        const SeriesMetadata& metadata) {
  if (!(metadata.shot_noise_variance_raw > 0.0))
    throw InvalidArgument("shot-noise calibration variance must be positive");
  const double scale = std::sqrt(metadata.shot_noise_variance_raw);
  std::vector<QuadratureRecord> out(records.begin(), records.end());
  for (QuadratureRecord& r : out) {
    r.q1 /= scale;
    r.q2 /= scale;
  }
  return out;
}

ConditionedSeries condition_series(std::span<const QuadratureRecord> records, double q_threshold,
                                   std::size_t n_qcp, std::uint64_t seed, std::size_t resamples) {
  if (n_qcp == 0) throw InvalidArgument("n_qcp must be >= 1");
  if (!(q_threshold > 0.0)) throw InvalidArgument("threshold Q must be > 0");
  if (records.size() < n_qcp)
    throw InvalidArgument("series has " + std::to_string(records.size()) +
                          " samples, fewer than n_qcp = " + std::to_string(n_qcp));
  std::vector<double> q1(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) q1[i] = records[i].q1;

  ConditionedSeries out;
  std::vector<double> accepted_q2;
  for (std::size_t k : sliding_acceptance(q1, q_threshold, n_qcp)) {
    out.accepted_indices.push_back(records[k].index);
    accepted_q2.push_back(records[k].q2);
  }
  out.estimate =
      estimate_from_accepted(accepted_q2, records.size() - n_qcp + 1, seed, resamples);
  return out;
}

}  // namespace sqd
