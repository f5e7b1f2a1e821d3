#pragma once

#include <cstddef>
#include <vector>

namespace sqd {

/// Gauss-Hermite rule for integrals of f(t) exp(-t^2), with weights scaled by
/// 1/sqrt(pi) so that sum(w) == 1: sum_i w_i f(t_i) ~ E[f(Z/sqrt2)], Z ~ N(0,1).
///
/// Nodes come from Newton iteration on the orthonormal Hermite recurrence.
/// The constructor checks that even moments up to degree min(2n-2, 20) are
/// reproduced and throws NumericalFailure otherwise.
class GaussHermiteRule {
 public:
  explicit GaussHermiteRule(std::size_t nodes);

  std::size_t size() const { return nodes_.size(); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// Gauss-Legendre rule on [-1, 1].
class GaussLegendreRule {
 public:
  explicit GaussLegendreRule(std::size_t nodes);

  std::size_t size() const { return nodes_.size(); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  /// Composite integral of f over [a, b] split into `panels` equal pieces.
  template <class F>
  double integrate(F&& f, double a, double b, std::size_t panels = 1) const {
    const double width = (b - a) / static_cast<double>(panels);
    double total = 0.0;
    for (std::size_t p = 0; p < panels; ++p) {
      const double lo = a + width * static_cast<double>(p);
      const double half = 0.5 * width;
      const double mid = lo + half;
      double s = 0.0;
      for (std::size_t i = 0; i < nodes_.size(); ++i) s += weights_[i] * f(mid + half * nodes_[i]);
      total += half * s;
    }
    return total;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// One-dimensional rule for averages over a zero-mean Gaussian phase,
/// sum_i weight[i] f(phi[i]) ~ E[f(phi)], phi ~ N(0, sigma^2), for integrands
/// with period pi in phi.
///
/// sigma == 0 gives the single node phi = 0. For sigma < kHermitePhaseLimit the
/// nodes are Gauss-Hermite, phi = sqrt2 sigma t. Wider distributions use the
/// periodic trapezoid rule on [-pi/2, pi/2) weighted by the wrapped normal
/// density; this stays geometrically convergent when the integrand has
/// singularities close to the real axis, where Gauss-Hermite stalls.
struct PhaseRule {
  std::vector<double> phi;
  std::vector<double> weight;

  std::size_t size() const { return phi.size(); }
};

inline constexpr double kHermitePhaseLimit = 0.1;

PhaseRule phase_rule(double sigma, std::size_t nodes);

/// Shared, lazily built rules (thread-safe construction).
const GaussHermiteRule& hermite_rule(std::size_t nodes);
const GaussLegendreRule& legendre_rule(std::size_t nodes);

}  // namespace sqd
