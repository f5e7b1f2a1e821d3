#include "sqd/phase_noise.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "sqd/errors.hpp"

namespace sqd {

void PhaseDistribution::validate() const {
  if (!(sigma >= 0.0) || !std::isfinite(sigma))
    throw InvalidArgument("phase noise sigma must be finite and >= 0");
}

double density(const PhaseDistribution& dist, double phi) {
  dist.validate();
  if (dist.sigma == 0.0)
    throw InvalidArgument("density undefined for sigma = 0 (delta distribution)");
  const double var = dist.sigma * dist.sigma;
  return std::exp(-phi * phi / (2.0 * var)) / std::sqrt(2.0 * std::numbers::pi * var);
}

std::vector<double> sample_iid(const PhaseDistribution& dist, std::size_t n, std::uint64_t seed,
                               std::uint64_t stream) {
  dist.validate();
  if (n == 0) throw InvalidArgument("sample count must be >= 1");
  std::vector<double> out(n, 0.0);
  if (dist.sigma == 0.0) return out;
  Philox4x32 rng = make_stream(seed, stream);
  std::normal_distribution<double> normal(0.0, dist.sigma);
  for (double& v : out) v = normal(rng);
  return out;
}

void PhaseProcessConfig::validate() const {
  if (!(sample_rate > 0.0)) throw InvalidArgument("sample rate must be positive");
  if (!(band_low > 0.0) || !(band_high > band_low) || !(band_high < 0.5 * sample_rate))
    throw InvalidArgument("band must satisfy 0 < low < high < sample_rate/2");
  if (!(sigma >= 0.0) || !std::isfinite(sigma))
    throw InvalidArgument("phase noise sigma must be finite and >= 0");
}

std::vector<double> design_bandpass(double sample_rate, double low, double high, std::size_t taps) {
  if (taps % 2 == 0) throw InvalidArgument("band-pass tap count must be odd");
  const double f1 = low / sample_rate;
  const double f2 = high / sample_rate;
  const auto mid = static_cast<double>(taps - 1) / 2.0;
  const double pi = std::numbers::pi;
  std::vector<double> h(taps);
  for (std::size_t k = 0; k < taps; ++k) {
    const double n = static_cast<double>(k) - mid;
    const double ideal = n == 0.0 ? 2.0 * (f2 - f1)
                                  : (std::sin(2.0 * pi * f2 * n) - std::sin(2.0 * pi * f1 * n)) /
                                        (pi * n);
    const double window = 0.54 - 0.46 * std::cos(2.0 * pi * static_cast<double>(k) /
                                                 static_cast<double>(taps - 1));
    h[k] = ideal * window;
  }
  // Unit gain at the band centre.
  const double fc = 0.5 * (f1 + f2);
  double re = 0.0, im = 0.0;
  for (std::size_t k = 0; k < taps; ++k) {
    re += h[k] * std::cos(2.0 * pi * fc * static_cast<double>(k));
    im -= h[k] * std::sin(2.0 * pi * fc * static_cast<double>(k));
  }
  const double gain = std::hypot(re, im);
  for (double& v : h) v /= gain;
  return h;
}

BandlimitedPhaseProcess::BandlimitedPhaseProcess(const PhaseProcessConfig& config,
                                                 std::uint64_t stream)
    : rng_(make_stream(config.seed, stream)) {
  config.validate();
  taps_ = design_bandpass(config.sample_rate, config.band_low, config.band_high);
  const double energy = std::inner_product(taps_.begin(), taps_.end(), taps_.begin(), 0.0);
  scale_ = config.sigma / std::sqrt(energy);
  history_.assign(2 * taps_.size(), 0.0);
  for (std::size_t i = 0; i < kBandpassTaps; ++i) filter_step();
}

double BandlimitedPhaseProcess::filter_step() {
  const std::size_t n = taps_.size();
  const double w = normal_(rng_);
  head_ = head_ == 0 ? n - 1 : head_ - 1;
  history_[head_] = w;
  history_[head_ + n] = w;
  // history_[head_ + k] holds the input k steps in the past.
  return std::inner_product(taps_.begin(), taps_.end(), history_.begin() + head_, 0.0);
}

double BandlimitedPhaseProcess::next() { return scale_ * filter_step(); }

void BandlimitedPhaseProcess::fill(std::span<double> out) {
  for (double& v : out) v = next();
}

std::vector<double> sample_bandlimited(const PhaseProcessConfig& config, std::size_t n,
                                       std::uint64_t stream) {
  config.validate();
  if (n <= kBandpassTaps) throw InvalidArgument("sample count must exceed the filter warm-up");
  std::vector<double> out(n, 0.0);
  if (config.sigma == 0.0) return out;
  BandlimitedPhaseProcess process(config, stream);
  process.fill(out);
  return out;
}

}  // namespace sqd
