#include "sqd/estimator.hpp"

#include <cmath>

#include "sqd/errors.hpp"
#include "sqd/random.hpp"

namespace sqd {

double sample_variance(std::span<const double> values) {
  if (values.size() < 2) throw InvalidArgument("sample variance needs at least two values");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(values.size() - 1);
}

double bootstrap_variance_se(std::span<const double> values, std::uint64_t seed,
                             std::size_t resamples) {
  if (values.size() < 2) throw InvalidArgument("bootstrap needs at least two values");
  if (resamples < 2) throw InvalidArgument("bootstrap needs at least two resamples");
  const std::size_t n = values.size();
  double shift = 0.0;
  for (double v : values) shift += v;
  shift /= static_cast<double>(n);

  Philox4x32 rng = make_stream(seed, kBootstrapStream);
  double mean = 0.0, m2 = 0.0;
  for (std::size_t b = 0; b < resamples; ++b) {
    double s = 0.0, ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = values[uniform_index(rng, n)] - shift;
      s += d;
      ss += d * d;
    }
    const auto nd = static_cast<double>(n);
    const double var = (ss - s * s / nd) / (nd - 1.0);
    const double delta = var - mean;
    mean += delta / static_cast<double>(b + 1);
    m2 += delta * (var - mean);
  }
  return std::sqrt(m2 / static_cast<double>(resamples - 1));
}

DistillationEstimate estimate_from_accepted(std::span<const double> accepted_q2,
                                            std::size_t n_candidates, std::uint64_t seed,
                                            std::size_t resamples) {
  if (n_candidates == 0) throw InvalidArgument("no candidate trials");
  if (accepted_q2.size() > n_candidates)
    throw InvalidArgument("more accepted samples than candidates");
  DistillationEstimate e;
  e.n_trials = n_candidates;
  e.n_accepted = accepted_q2.size();
  e.p_hat = static_cast<double>(e.n_accepted) / static_cast<double>(n_candidates);
  e.se_p = std::sqrt(e.p_hat * (1.0 - e.p_hat) / static_cast<double>(n_candidates));
  if (e.n_accepted >= 2) {
    e.v_out_hat = sample_variance(accepted_q2);
    e.se_v = bootstrap_variance_se(accepted_q2, seed, resamples);
  }
  return e;
}

std::vector<std::size_t> sliding_acceptance(std::span<const double> q1, double q_threshold,
                                            std::size_t n_window) {
  if (n_window == 0) throw InvalidArgument("window length must be >= 1");
  std::vector<std::size_t> accepted;
  std::size_t run = 0;
  for (std::size_t k = 0; k < q1.size(); ++k) {
    run = std::abs(q1[k]) < q_threshold ? run + 1 : 0;
    if (run >= n_window) accepted.push_back(k);
  }
  return accepted;
}

}  // namespace sqd
