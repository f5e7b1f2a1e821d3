#include "sqd/montecarlo.hpp"

#include <cmath>
#include <future>
#include <numbers>
#include <optional>
#include <random>
#include <thread>

#include "sqd/errors.hpp"

namespace sqd {
namespace {

// Per-shard stream layout.
constexpr std::uint64_t kStreamsPerShard = 8;
constexpr std::uint64_t kPhase1Stream = 0;
constexpr std::uint64_t kPhase2Stream = 1;
constexpr std::uint64_t kHomodyneStream = 2;
constexpr std::uint64_t kAngleStream = 3;

std::uint64_t stream_index(std::size_t shard, std::uint64_t slot) {
  return static_cast<std::uint64_t>(shard) * kStreamsPerShard + slot;
}

std::size_t window_length(const SimulationConfig& c) {
  return static_cast<std::size_t>(c.params.n_qcp);
}

std::size_t shard_trials(const SimulationConfig& c, std::size_t shard) {
  const std::size_t begin = c.n_trials * shard / c.shards;
  const std::size_t end = c.n_trials * (shard + 1) / c.shards;
  return end - begin;
}

// Phase pairs for one shard.
class PhaseSource {
 public:
  PhaseSource(const SimulationConfig& c, std::size_t shard)
      : model_(c.phase_model), sigma_(c.params.sigma), block_(window_length(c)),
        rng1_(make_stream(c.seed, stream_index(shard, kPhase1Stream))),
        rng2_(make_stream(c.seed, stream_index(shard, kPhase2Stream))) {
    if (model_ == PhaseModel::bandlimited && sigma_ > 0.0) {
      PhaseProcessConfig pc = c.process;
      pc.sigma = sigma_;
      pc.seed = c.seed;
      proc1_.emplace(pc, stream_index(shard, kPhase1Stream));
      proc2_.emplace(pc, stream_index(shard, kPhase2Stream));
    }
  }

  void next(double& phi1, double& phi2) {
    if (sigma_ == 0.0) {
      phi1 = phi2 = 0.0;
      return;
    }
    switch (model_) {
      case PhaseModel::iid:
        phi1 = sigma_ * normal1_(rng1_);
        phi2 = sigma_ * normal2_(rng2_);
        break;
      case PhaseModel::bandlimited:
        phi1 = proc1_->next();
        phi2 = proc2_->next();
        break;
      case PhaseModel::held:
        if (count_ % block_ == 0) {
          held1_ = sigma_ * normal1_(rng1_);
          held2_ = sigma_ * normal2_(rng2_);
        }
        phi1 = held1_;
        phi2 = held2_;
        break;
    }
    ++count_;
  }

 private:
  PhaseModel model_;
  double sigma_;
  std::size_t block_;
  std::size_t count_ = 0;
  double held1_ = 0.0, held2_ = 0.0;
  Philox4x32 rng1_, rng2_;
  std::normal_distribution<double> normal1_, normal2_;
  std::optional<BandlimitedPhaseProcess> proc1_, proc2_;
};

struct ShardResult {
  std::vector<double> accepted_q2;
  std::size_t candidates = 0;
};

ShardResult condition_shard(const SimulationConfig& c, std::size_t shard) {
  const QuadratureSamples s = simulate_samples(c, shard);
  const std::size_t n = window_length(c);
  const double q = c.params.q_threshold;
  ShardResult r;
  if (c.phase_model == PhaseModel::held) {
    for (std::size_t start = 0; start + n <= s.q1.size(); start += n) {
      bool ok = true;
      for (std::size_t k = start; k < start + n && ok; ++k) ok = std::abs(s.q1[k]) < q;
      if (ok) r.accepted_q2.push_back(s.q2[start + n - 1]);
      ++r.candidates;
    }
  } else {
    for (std::size_t k : sliding_acceptance(s.q1, q, n)) r.accepted_q2.push_back(s.q2[k]);
    r.candidates = s.q1.size() >= n ? s.q1.size() - n + 1 : 0;
  }
  return r;
}

DistillationEstimate run(const SimulationConfig& c) {
  c.validate();
  std::vector<ShardResult> results(c.shards);
  unsigned threads = c.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : c.threads;
  if (threads <= 1 || c.shards == 1) {
    for (std::size_t s = 0; s < c.shards; ++s) results[s] = condition_shard(c, s);
  } else {
    // Shards are dispatched in waves of `threads`; results keep shard order.
    for (std::size_t first = 0; first < c.shards; first += threads) {
      std::vector<std::future<ShardResult>> wave;
      const std::size_t last = std::min<std::size_t>(c.shards, first + threads);
      for (std::size_t s = first; s < last; ++s)
        wave.push_back(std::async(std::launch::async, condition_shard, std::cref(c), s));
      for (std::size_t s = first; s < last; ++s) results[s] = wave[s - first].get();
    }
  }
  std::vector<double> accepted;
  std::size_t candidates = 0;
  for (auto& r : results) {
    accepted.insert(accepted.end(), r.accepted_q2.begin(), r.accepted_q2.end());
    candidates += r.candidates;
  }
  if (candidates == 0) throw InvalidArgument("no complete trigger windows in the simulated stream");
  return estimate_from_accepted(accepted, candidates, c.seed, c.bootstrap_resamples);
}

}  // namespace

void SimulationConfig::validate() const {
  params.validate();
  if (n_trials == 0) throw InvalidArgument("n_trials must be >= 1");
  if (shards == 0) throw InvalidArgument("shard count must be >= 1");
  if (shards > n_trials) throw InvalidArgument("more shards than trials");
  if (bootstrap_resamples < 2) throw InvalidArgument("bootstrap needs at least two resamples");
  if (!std::isfinite(verify_angle)) throw InvalidArgument("verify angle must be finite");
  if (phase_model == PhaseModel::bandlimited) {
    PhaseProcessConfig pc = process;
    pc.sigma = params.sigma;
    pc.validate();
  }
}

TrialOutcome simulate_trial(const ProtocolParams& params, double phi1, double phi2,
                            Philox4x32& rng, double psi) {
  const ConditionalMoments m =
      moments_at_phases(params.state, phi1, phi2, params.theta, psi, params.eta);
  std::normal_distribution<double> normal;
  const double z1 = normal(rng);
  const double z2 = normal(rng);
  const double sa = std::sqrt(m.a);
  TrialOutcome t;
  t.q1 = sa * z1;
  t.q2 = (m.c / sa) * z1 + std::sqrt(std::max(m.d(), 0.0) / m.a) * z2;
  t.accepted = std::abs(t.q1) < params.q_threshold;
  return t;
}

std::size_t shard_sample_count(const SimulationConfig& config, std::size_t shard) {
  const std::size_t trials = shard_trials(config, shard);
  return config.phase_model == PhaseModel::held ? trials * window_length(config) : trials;
}

QuadratureSamples simulate_samples(const SimulationConfig& config, std::size_t shard) {
  config.validate();
  if (shard >= config.shards) throw InvalidArgument("shard index out of range");
  const std::size_t count = shard_sample_count(config, shard);
  PhaseSource phases(config, shard);
  Philox4x32 homodyne = make_stream(config.seed, stream_index(shard, kHomodyneStream));
  Philox4x32 angles = make_stream(config.seed, stream_index(shard, kAngleStream));

  QuadratureSamples out;
  out.q1.resize(count);
  out.q2.resize(count);
  ProtocolParams params = config.params;
  for (std::size_t k = 0; k < count; ++k) {
    double phi1 = 0.0, phi2 = 0.0;
    phases.next(phi1, phi2);
    if (config.trigger_mode == TriggerMode::randomized_angle)
      params.theta = 2.0 * std::numbers::pi * uniform01(angles);
    const TrialOutcome t = simulate_trial(params, phi1, phi2, homodyne, config.verify_angle);
    out.q1[k] = t.q1;
    out.q2[k] = t.q2;
  }
  return out;
}

DistillationEstimate run_protocol(const SimulationConfig& config) {
  if (config.params.n_qcp != 1)
    throw InvalidArgument("run_protocol expects n_qcp == 1; use run_qcp");
  return run(config);
}

DistillationEstimate run_qcp(const SimulationConfig& config) { return run(config); }

}  // namespace sqd
