#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace sqd {

/// Bootstrap resamples used for the variance standard error.
inline constexpr std::size_t kBootstrapResamples = 200;
/// RNG stream reserved for bootstrap resampling.
inline constexpr std::uint64_t kBootstrapStream = 0xB0075742'00000000ull;

/// Conditioned-output statistics from simulated or recorded data.
///
/// `v_out_hat` and `se_v` are empty unless at least two samples were
/// accepted; zero acceptances is an empty estimate, never a zero variance.
struct DistillationEstimate {
  std::size_t n_trials = 0;    ///< candidate trigger windows
  std::size_t n_accepted = 0;
  double p_hat = 0.0;
  double se_p = 0.0;           ///< binomial sqrt(p(1-p)/n)
  std::optional<double> v_out_hat;
  std::optional<double> se_v;  ///< nonparametric bootstrap

  bool empty() const { return n_accepted == 0; }
};

/// Unbiased sample variance (n - 1); requires at least two values.
double sample_variance(std::span<const double> values);

/// Bootstrap standard error of sample_variance over `resamples` resamples
/// drawn from stream (seed, kBootstrapStream).
double bootstrap_variance_se(std::span<const double> values, std::uint64_t seed,
                             std::size_t resamples = kBootstrapResamples);

/// Builds the estimate from the verified-quadrature values of accepted trials.
DistillationEstimate estimate_from_accepted(std::span<const double> accepted_q2,
                                            std::size_t n_candidates, std::uint64_t seed,
                                            std::size_t resamples = kBootstrapResamples);

/// Sample indices k accepted by the sliding rule: |q1| < Q at k and at the
/// n_window - 1 preceding samples. Only k >= n_window - 1 are candidates.
/// An infinite Q accepts every candidate.
std::vector<std::size_t> sliding_acceptance(std::span<const double> q1, double q_threshold,
                                            std::size_t n_window);

}  // namespace sqd
