#pragma once

// Phase-diffusion channel: zero-mean Gaussian phase distribution, i.i.d.
// sampling, and a band-limited correlated phase process.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "sqd/random.hpp"

namespace sqd {

struct PhaseDistribution {
  double sigma = 0.0;  ///< radians; 0 is the noiseless delta distribution

  void validate() const;
};

/// Gaussian density of the phase. Throws InvalidArgument when sigma == 0;
/// callers must take the noiseless branch themselves.
double density(const PhaseDistribution& dist, double phi);

/// n i.i.d. draws from N(0, sigma^2) using stream (seed, stream).
std::vector<double> sample_iid(const PhaseDistribution& dist, std::size_t n, std::uint64_t seed,
                               std::uint64_t stream = 0);

struct PhaseProcessConfig {
  double sample_rate = 100e3;  ///< Hz
  double band_low = 1e3;       ///< Hz
  double band_high = 5e3;      ///< Hz
  double sigma = 0.0;          ///< stationary standard deviation, radians
  std::uint64_t seed = 0;

  /// 0 < band_low < band_high < sample_rate / 2 and sigma >= 0.
  void validate() const;
};

/// Number of FIR taps of the band-pass filter; also the warm-up length.
inline constexpr std::size_t kBandpassTaps = 257;

/// Hamming-windowed sinc band-pass taps for [low, high] Hz at `sample_rate`,
/// normalized to unit gain at the band centre.
std::vector<double> design_bandpass(double sample_rate, double low, double high,
                                    std::size_t taps = kBandpassTaps);

/// Streaming band-limited Gaussian phase source: white noise through the
/// band-pass FIR, scaled so the stationary standard deviation equals sigma.
/// Warm-up samples are discarded on construction. Single-threaded; give
/// concurrent instances distinct stream indices.
class BandlimitedPhaseProcess {
 public:
  BandlimitedPhaseProcess(const PhaseProcessConfig& config, std::uint64_t stream = 0);

  double next();
  void fill(std::span<double> out);

  const std::vector<double>& taps() const { return taps_; }

 private:
  double filter_step();

  std::vector<double> taps_;
  std::vector<double> history_;  // circular, 2x length so a window is contiguous
  std::size_t head_ = 0;
  double scale_ = 0.0;
  Philox4x32 rng_;
  std::normal_distribution<double> normal_;
};

/// n samples of the band-limited process on stream (config.seed, stream).
std::vector<double> sample_bandlimited(const PhaseProcessConfig& config, std::size_t n,
                                       std::uint64_t stream = 0);

}  // namespace sqd
