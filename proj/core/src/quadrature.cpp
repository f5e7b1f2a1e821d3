#include "sqd/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "sqd/errors.hpp"

namespace sqd {
namespace {

// Orthonormal Hermite functions h_k(t) = H_k(t) / sqrt(2^k k! sqrt(pi)) without
// the Gaussian factor; returns h_n(t) and sets dh to h_n'(t).
double orthonormal_hermite(std::size_t n, double t, double& dh) {
  double p_prev = 0.0;
  double p = std::pow(std::numbers::pi, -0.25);
  for (std::size_t k = 1; k <= n; ++k) {
    const double kk = static_cast<double>(k);
    const double next = t * std::sqrt(2.0 / kk) * p - std::sqrt((kk - 1.0) / kk) * p_prev;
    p_prev = p;
    p = next;
  }
  dh = std::sqrt(2.0 * static_cast<double>(n)) * p_prev;
  return p;
}

// E[t^(2k)] under the normalized exp(-t^2) weight: (2k-1)!! / 2^k.
double even_moment(int k) {
  double m = 1.0;
  for (int j = 1; j <= k; ++j) m *= (2.0 * j - 1.0) / 2.0;
  return m;
}

}  // namespace

GaussHermiteRule::GaussHermiteRule(std::size_t n) {
  if (n == 0) throw InvalidArgument("quadrature rule needs at least one node");
  nodes_.assign(n, 0.0);
  weights_.assign(n, 0.0);
  const std::size_t half = (n + 1) / 2;
  const double nd = static_cast<double>(n);
  double z = 0.0;
  // Largest roots first; asymptotic starting guesses as in Numerical Recipes gauher.
  for (std::size_t i = 0; i < half; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * nd + 1.0) - 1.85575 * std::pow(2.0 * nd + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow(nd, 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * nodes_[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * nodes_[1];
    } else {
      z = 2.0 * z - nodes_[i - 2];
    }
    double dh = 0.0;
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
      const double h = orthonormal_hermite(n, z, dh);
      const double step = h / dh;
      z -= step;
      if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) {
        converged = true;
        break;
      }
    }
    if (!converged) throw NumericalFailure("Gauss-Hermite root iteration did not converge");
    orthonormal_hermite(n, z, dh);
    const double w = 2.0 / (dh * dh) / std::sqrt(std::numbers::pi);
    nodes_[i] = z;
    nodes_[n - 1 - i] = -z;
    weights_[i] = w;
    weights_[n - 1 - i] = w;
  }
  if (n % 2 == 1) nodes_[half - 1] = 0.0;

  const int max_k = static_cast<int>(std::min<std::size_t>(n - 1, 10));
  for (int k = 0; k <= max_k; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += weights_[i] * std::pow(nodes_[i], 2 * k);
    const double expected = even_moment(k);
    if (std::abs(s - expected) > 1e-12 * expected)
      throw NumericalFailure("Gauss-Hermite rule fails moment check at degree " +
                             std::to_string(2 * k));
  }
}

GaussLegendreRule::GaussLegendreRule(std::size_t n) {
  if (n == 0) throw InvalidArgument("quadrature rule needs at least one node");
  nodes_.assign(n, 0.0);
  weights_.assign(n, 0.0);
  const double nd = static_cast<double>(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nd + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (std::size_t k = 1; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * kk - 1.0) * z * p1 - (kk - 1.0) * p2) / kk;
      }
      dp = nd * (z * p0 - p1) / (z * z - 1.0);
      const double step = p0 / dp;
      z -= step;
      if (std::abs(step) <= 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    nodes_[i] = -z;
    nodes_[n - 1 - i] = z;
    weights_[i] = w;
    weights_[n - 1 - i] = w;
  }
}

PhaseRule phase_rule(double sigma, std::size_t nodes) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma))
    throw InvalidArgument("phase sigma must be finite and >= 0");
  if (nodes == 0) throw InvalidArgument("quadrature rule needs at least one node");
  PhaseRule rule;
  if (sigma == 0.0) {
    rule.phi = {0.0};
    rule.weight = {1.0};
    return rule;
  }
  if (sigma < kHermitePhaseLimit) {
    const GaussHermiteRule& gh = hermite_rule(nodes);
    rule.weight = gh.weights();
    rule.phi.reserve(nodes);
    for (double t : gh.nodes()) rule.phi.push_back(std::numbers::sqrt2 * sigma * t);
    return rule;
  }
  const double pi = std::numbers::pi;
  const double h = pi / static_cast<double>(nodes);
  const int images = static_cast<int>(std::ceil(10.0 * sigma / pi)) + 1;
  const double norm = 1.0 / std::sqrt(2.0 * pi * sigma * sigma);
  rule.phi.resize(nodes);
  rule.weight.resize(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    const double phi = -0.5 * pi + h * static_cast<double>(i);
    double density = 0.0;
    for (int k = -images; k <= images; ++k) {
      const double x = phi + pi * k;
      density += std::exp(-x * x / (2.0 * sigma * sigma));
    }
    rule.phi[i] = phi;
    rule.weight[i] = h * norm * density;
  }
  return rule;
}

const GaussHermiteRule& hermite_rule(std::size_t nodes) {
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<GaussHermiteRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[nodes];
  if (!slot) slot = std::make_unique<GaussHermiteRule>(nodes);
  return *slot;
}

const GaussLegendreRule& legendre_rule(std::size_t nodes) {
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<GaussLegendreRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[nodes];
  if (!slot) slot = std::make_unique<GaussLegendreRule>(nodes);
  return *slot;
}

}  // namespace sqd
