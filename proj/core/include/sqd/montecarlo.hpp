#pragma once

// Stochastic simulation of the distillation protocol: random phases, joint
// homodyne outcomes, threshold conditioning (optionally over several
// consecutive trigger samples).

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sqd/analytics.hpp"
#include "sqd/estimator.hpp"
#include "sqd/phase_noise.hpp"
#include "sqd/random.hpp"

namespace sqd {

enum class PhaseModel {
  iid,          ///< independent phases for every sample
  bandlimited,  ///< band-pass filtered Gaussian process (PhaseProcessConfig)
  held,         ///< phases constant across aligned blocks of n_qcp samples
};

enum class TriggerMode {
  fixed_angle,       ///< q1 measured at params.theta
  randomized_angle,  ///< theta uniform on [0, 2pi) for every sample
};

/// Monte Carlo run configuration.
///
/// For the iid and bandlimited models the stream holds `n_trials` samples and
/// every index k >= n_qcp - 1 of a shard is a candidate trigger window
/// (overlapping windows). For the held model each of the `n_trials` trials is
/// its own block of n_qcp samples sharing one pair of phases.
struct SimulationConfig {
  ProtocolParams params;
  std::size_t n_trials = 1'000'000;
  PhaseModel phase_model = PhaseModel::iid;
  /// Band and rate of the bandlimited model; its sigma and seed are ignored
  /// in favour of params.sigma and `seed`.
  PhaseProcessConfig process;
  TriggerMode trigger_mode = TriggerMode::fixed_angle;
  double verify_angle = 0.0;  ///< psi of the verified quadrature q2(psi)
  std::uint64_t seed = 1;
  std::size_t shards = 1;
  unsigned threads = 1;  ///< worker threads; 0 = hardware concurrency
  std::size_t bootstrap_resamples = kBootstrapResamples;

  void validate() const;
};

struct TrialOutcome {
  double q1 = 0.0;
  double q2 = 0.0;
  bool accepted = false;
};

/// One joint draw of (q1(theta), q2(psi)) at fixed phases; accepted iff |q1| < Q.
TrialOutcome simulate_trial(const ProtocolParams& params, double phi1, double phi2,
                            Philox4x32& rng, double psi = 0.0);

/// Raw samples of one shard, in time order.
struct QuadratureSamples {
  std::vector<double> q1;
  std::vector<double> q2;
};

/// Number of samples shard `shard` generates for `config`.
std::size_t shard_sample_count(const SimulationConfig& config, std::size_t shard);

/// Generates shard `shard`'s sample stream. Streams of different shards use
/// disjoint RNG stream indices.
QuadratureSamples simulate_samples(const SimulationConfig& config, std::size_t shard = 0);

/// Single-sample conditioning (requires params.n_qcp == 1).
DistillationEstimate run_protocol(const SimulationConfig& config);

/// Conditioning on params.n_qcp consecutive trigger samples.
DistillationEstimate run_qcp(const SimulationConfig& config);

}  // namespace sqd
