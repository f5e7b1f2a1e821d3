#include "sqd/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sqd/errors.hpp"
#include "sqd/quadrature.hpp"

namespace sqd {
namespace {

struct Integrals {
  double numerator = 0.0;
  double probability = 0.0;
};

Integrals integrate(const ProtocolParams& params, double psi, std::size_t nodes) {
  const auto accumulate = [&](double phi1, double phi2, double weight, Integrals& acc) {
    const PhaseIntegrand f = evaluate_integrand(params, psi, phi1, phi2);
    double extra = 1.0;
    for (int k = 1; k < params.n_qcp; ++k) extra *= f.probability;
    acc.numerator += weight * f.weighted_variance * extra;
    acc.probability += weight * f.probability * extra;
  };

  const PhaseRule rule = phase_rule(params.sigma, nodes);
  Integrals acc;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    Integrals row;
    for (std::size_t j = 0; j < rule.size(); ++j)
      accumulate(rule.phi[i], rule.phi[j], rule.weight[j], row);
    acc.numerator += rule.weight[i] * row.numerator;
    acc.probability += rule.weight[i] * row.probability;
  }
  return acc;
}

AnalyticResult finish(const ProtocolParams& params, const Integrals& in) {
  if (!(in.probability > 0.0))
    throw NumericalFailure("success probability underflowed to zero");
  return {in.numerator / in.probability, std::min(in.probability, 1.0), v_in(params)};
}

bool close(double a, double b) {
  return std::abs(a - b) <= kConvergenceTolerance * std::max(1.0, std::abs(b));
}

AnalyticResult converged(const ProtocolParams& params, double psi) {
  params.validate();
  const Integrals coarse = integrate(params, psi, kDefaultHermiteNodes);
  if (params.sigma == 0.0) return finish(params, coarse);
  const Integrals fine = integrate(params, psi, 2 * kDefaultHermiteNodes);
  const AnalyticResult a = finish(params, coarse);
  const AnalyticResult b = finish(params, fine);
  if (!close(a.v_out, b.v_out) || !close(a.p_success, b.p_success)) {
    std::ostringstream msg;
    msg << "quadrature did not converge (sigma=" << params.sigma << ", Q=" << params.q_threshold
        << ", theta=" << params.theta << "): v_out " << a.v_out << " vs " << b.v_out;
    throw NumericalFailure(msg.str());
  }
  return a;
}

}  // namespace

void ProtocolParams::validate() const {
  state.validate();
  if (!(sigma >= 0.0) || !std::isfinite(sigma))
    throw InvalidArgument("sigma must be finite and >= 0");
  if (!std::isfinite(theta)) throw InvalidArgument("theta must be finite");
  if (!(q_threshold > 0.0) || !std::isfinite(q_threshold))
    throw InvalidArgument("threshold Q must be finite and > 0");
  if (!(eta > 0.0) || eta > 1.0) throw InvalidArgument("detection efficiency must lie in (0, 1]");
  if (n_qcp < 1) throw InvalidArgument("n_qcp must be >= 1");
}

PhaseIntegrand evaluate_integrand(const ProtocolParams& params, double psi, double phi1,
                                  double phi2) {
  const ConditionalMoments m =
      moments_at_phases(params.state, phi1, phi2, params.theta, psi, params.eta);
  const double q = params.q_threshold;
  const double p = std::erf(q / std::sqrt(2.0 * m.a));
  const double tail = std::sqrt(2.0 / std::numbers::pi) * m.c * m.c * q * std::pow(m.a, -1.5) *
                      std::exp(-q * q / (2.0 * m.a));
  return {m.b * p - tail, p};
}

double v_in(const ProtocolParams& params) {
  params.state.validate();
  const double vx = params.state.v_x;
  const double vp = params.state.v_p;
  const double s2 = params.sigma * params.sigma;
  const double raw = 0.5 * (vx + vp) + 0.5 * (vx - vp) * std::exp(-2.0 * s2);
  return params.eta * raw + 1.0 - params.eta;
}

double v_in_quadrature(const ProtocolParams& params, std::size_t nodes) {
  params.validate();
  const auto x_variance = [&](double phi) {
    const ModeCovariance m = apply_detection_efficiency(
        rotate_covariance(ModeCovariance::from(params.state), phi), params.eta);
    return m.c_xx();
  };
  const PhaseRule rule = phase_rule(params.sigma, nodes);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) s += rule.weight[i] * x_variance(rule.phi[i]);
  return s;
}

AnalyticResult v_out(const ProtocolParams& params) {
  if (params.n_qcp != 1) throw InvalidArgument("v_out expects n_qcp == 1; use v_out_qcp");
  return converged(params, 0.0);
}

AnalyticResult v_out_qcp(const ProtocolParams& params) { return converged(params, 0.0); }

double v_out_general(const ProtocolParams& params, double psi) {
  return converged(params, psi).v_out;
}

double uncertainty_product(const ProtocolParams& params) {
  return std::sqrt(v_out_general(params, 0.0) * v_out_general(params, std::numbers::pi / 2.0));
}

AnalyticResult v_out_randomized(const ProtocolParams& params, std::size_t theta_points) {
  if (theta_points == 0) throw InvalidArgument("theta_points must be >= 1");
  // The integrand has period pi in theta, so the periodic trapezoid over [0, pi) is exact
  // up to spectral error.
  double numerator = 0.0;
  double probability = 0.0;
  for (std::size_t k = 0; k < theta_points; ++k) {
    ProtocolParams p = params;
    p.theta = std::numbers::pi * static_cast<double>(k) / static_cast<double>(theta_points);
    const AnalyticResult r = converged(p, 0.0);
    numerator += r.p_success * r.v_out;
    probability += r.p_success;
  }
  const auto m = static_cast<double>(theta_points);
  return {numerator / probability, probability / m, v_in(params)};
}

AnalyticResult v_out_with_nodes(const ProtocolParams& params, double psi, std::size_t nodes) {
  params.validate();
  return finish(params, integrate(params, psi, nodes));
}

std::vector<double> povm_coefficients(double q_threshold, std::size_t n_max) {
  if (!(q_threshold > 0.0) || std::isnan(q_threshold))
    throw InvalidArgument("POVM threshold Q must be > 0");
  // Beyond this the Hermite functions up to n_max are below double resolution.
  const double cutoff = std::sqrt(2.0 * static_cast<double>(n_max) + 1.0) + 40.0;
  const double upper = std::min(q_threshold, cutoff);
  const auto panels = static_cast<std::size_t>(std::ceil(upper / 0.25));
  const GaussLegendreRule& rule = legendre_rule(20);

  std::vector<double> p(n_max + 1, 0.0);
  std::vector<double> psi(n_max + 1);
  const double width = upper / static_cast<double>(panels);
  for (std::size_t panel = 0; panel < panels; ++panel) {
    const double mid = width * (static_cast<double>(panel) + 0.5);
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double x = mid + 0.5 * width * rule.nodes()[i];
      const double w = 0.5 * width * rule.weights()[i];
      psi[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
      if (n_max >= 1) psi[1] = std::numbers::sqrt2 * x * psi[0];
      for (std::size_t n = 2; n <= n_max; ++n) {
        const auto nn = static_cast<double>(n);
        psi[n] = std::sqrt(2.0 / nn) * x * psi[n - 1] - std::sqrt((nn - 1.0) / nn) * psi[n - 2];
      }
      for (std::size_t n = 0; n <= n_max; ++n) p[n] += 2.0 * w * psi[n] * psi[n];
    }
  }
  return p;
}

}  // namespace sqd
