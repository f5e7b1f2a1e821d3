#pragma once

// Synchronized two-detector quadrature time series: text file format,
// shot-noise calibration and threshold conditioning.
//
// File layout (UTF-8, LF line endings):
//
//   # sample_rate_hz=100000
//   # trigger_angle_rad=0
//   # verify_angle_rad=0
//   # shot_noise_variance_raw=1
//   # description=free text
//   index,q1,q2
//   0,0.12345678901234567,-0.98765432109876543
//
// Numbers are written with 17 significant digits. Unknown header keys and
// '#' lines without '=' are ignored on load.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "sqd/estimator.hpp"

namespace sqd {

struct QuadratureRecord {
  std::uint64_t index = 0;
  double q1 = 0.0;  ///< trigger detector
  double q2 = 0.0;  ///< verification detector

  friend bool operator==(const QuadratureRecord&, const QuadratureRecord&) = default;
};

struct SeriesMetadata {
  double sample_rate = 100e3;
  double trigger_angle = 0.0;
  double verify_angle = 0.0;
  double shot_noise_variance_raw = 1.0;
  std::string description;

  void validate() const;
  friend bool operator==(const SeriesMetadata&, const SeriesMetadata&) = default;
};

struct Series {
  std::vector<QuadratureRecord> records;
  SeriesMetadata metadata;
};

/// Column header line following the metadata block.
inline constexpr const char* kSeriesColumns = "index,q1,q2";

void save_series(std::span<const QuadratureRecord> records, const SeriesMetadata& metadata,
                 std::ostream& out);
void save_series(std::span<const QuadratureRecord> records, const SeriesMetadata& metadata,
                 const std::filesystem::path& path);

/// Throws ParseError (with the 1-based line) on malformed input.
Series load_series(std::istream& in);
Series load_series(const std::filesystem::path& path);

/// Divides every quadrature by sqrt(shot_noise_variance_raw).
std::vector<QuadratureRecord> calibrate(std::span<const QuadratureRecord> records,
                                        const SeriesMetadata& metadata);

/// Threshold value meaning "accept everything".
inline constexpr double kNoThreshold = std::numeric_limits<double>::infinity();

struct ConditionedSeries {
  std::vector<std::uint64_t> accepted_indices;  ///< record indices of accepted samples
  DistillationEstimate estimate;
};

/// Sliding-window conditioning identical to the Monte Carlo path: record k is
/// accepted when |q1| < Q for it and the n_qcp - 1 records before it.
ConditionedSeries condition_series(std::span<const QuadratureRecord> records, double q_threshold,
                                   std::size_t n_qcp, std::uint64_t seed = 1,
                                   std::size_t resamples = kBootstrapResamples);

}  // namespace sqd
