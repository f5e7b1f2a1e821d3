#pragma once

// Closed-form predictions of the two-copy distillation protocol evaluated by
// quadrature over the two random phases (see phase_rule).

#include <cstddef>
#include <vector>

#include "sqd/gaussian.hpp"

namespace sqd {

struct ProtocolParams {
  SqueezedModeParams state{0.32, 8.5};
  double sigma = 0.0;        ///< phase noise std, radians
  double theta = 0.0;        ///< trigger quadrature angle
  double q_threshold = 1.0;  ///< acceptance window half-width |q1| < Q
  double eta = 1.0;          ///< detection efficiency in (0, 1]
  int n_qcp = 1;             ///< number of consecutive trigger samples

  /// Throws InvalidArgument on any violated invariant.
  void validate() const;
};

struct AnalyticResult {
  double v_out = 0.0;
  double p_success = 0.0;
  double v_in = 0.0;
};

/// Default and doubled node counts of the convergence check.
inline constexpr std::size_t kDefaultHermiteNodes = 64;
/// Relative node-doubling disagreement above which NumericalFailure is thrown.
inline constexpr double kConvergenceTolerance = 1e-8;

/// Integrand of the output variance and success probability at fixed phases:
/// `weighted_variance` = B erf(Q/sqrt(2A)) - sqrt(2/pi) C^2 Q A^(-3/2) exp(-Q^2/2A),
/// `probability` = erf(Q/sqrt(2A)), with B, C taken for the verified quadrature psi.
struct PhaseIntegrand {
  double weighted_variance = 0.0;
  double probability = 0.0;
};
PhaseIntegrand evaluate_integrand(const ProtocolParams& params, double psi, double phi1,
                                  double phi2);

/// Phase-averaged x variance before distillation (closed form, efficiency included).
double v_in(const ProtocolParams& params);

/// The same average by phase quadrature; used to verify the closed form.
double v_in_quadrature(const ProtocolParams& params, std::size_t nodes = kDefaultHermiteNodes);

/// Output variance of x2 and success probability for a single trigger sample.
/// Requires params.n_qcp == 1.
AnalyticResult v_out(const ProtocolParams& params);

/// Channel-probing generalization with perfectly correlated phases over
/// n_qcp trigger samples. n_qcp == 1 reproduces v_out exactly.
AnalyticResult v_out_qcp(const ProtocolParams& params);

/// Output variance of the verified quadrature q2(psi) (honours n_qcp).
double v_out_general(const ProtocolParams& params, double psi);

/// sqrt(Var[x2] Var[p2]) of the conditioned output.
double uncertainty_product(const ProtocolParams& params);

/// Result when the trigger angle is uniformly random: each theta contributes
/// in proportion to its success probability. params.theta is ignored.
AnalyticResult v_out_randomized(const ProtocolParams& params, std::size_t theta_points = 64);

/// Result with an explicit node count and no doubling check.
AnalyticResult v_out_with_nodes(const ProtocolParams& params, double psi, std::size_t nodes);

/// Fock-diagonal coefficients P_0..P_n_max of the phase-averaged window POVM,
/// P_n = integral over [-Q, Q] of psi_n(x)^2 with psi_n the orthonormal Hermite
/// functions. Q is in the units where the vacuum variance is 1/2.
std::vector<double> povm_coefficients(double q_threshold, std::size_t n_max = 20);

}  // namespace sqd
