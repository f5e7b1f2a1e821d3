#pragma once

// Second-moment algebra for two single-mode Gaussian states that are phase
// rotated and interfered on a balanced beam splitter. Units: shot noise
// (vacuum quadrature variance = 1). Quadrature ordering is (x1, p1, x2, p2).

#include <Eigen/Core>

namespace sqd {

/// Tolerance used by physicality checks (eigenvalue / determinant slack).
inline constexpr double kPhysicalityTolerance = 1e-9;

/// Squeezed and anti-squeezed variances of one mode with no x-p correlation.
struct SqueezedModeParams {
  double v_x = 1.0;
  double v_p = 1.0;

  /// Throws InvalidArgument unless v_x > 0, v_p > 0 and v_x * v_p >= 1.
  void validate() const;
};

/// Symmetric 2x2 covariance of one mode's (x, p) quadratures.
class ModeCovariance {
 public:
  ModeCovariance() = default;
  ModeCovariance(double c_xx, double c_xp, double c_pp);

  static ModeCovariance vacuum() { return {1.0, 0.0, 1.0}; }
  static ModeCovariance diagonal(double v_x, double v_p) { return {v_x, 0.0, v_p}; }
  static ModeCovariance from(const SqueezedModeParams& s) { return diagonal(s.v_x, s.v_p); }

  double c_xx() const { return m_(0, 0); }
  double c_xp() const { return m_(0, 1); }
  double c_pp() const { return m_(1, 1); }
  double determinant() const { return m_.determinant(); }
  const Eigen::Matrix2d& matrix() const { return m_; }

  /// Positive diagonal and det >= 1 (within kPhysicalityTolerance).
  bool is_physical() const;

 private:
  Eigen::Matrix2d m_ = Eigen::Matrix2d::Identity();
};

/// Symmetric 4x4 covariance over (x1, p1, x2, p2).
class TwoModeCovariance {
 public:
  TwoModeCovariance() = default;
  explicit TwoModeCovariance(const Eigen::Matrix4d& m);

  static TwoModeCovariance block_diagonal(const ModeCovariance& a, const ModeCovariance& b);

  const Eigen::Matrix4d& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }
  double determinant() const { return m_.determinant(); }

  /// Symmetric, positive definite and satisfying the uncertainty principle
  /// (V + i Omega >= 0), all within kPhysicalityTolerance.
  bool is_physical() const;

 private:
  Eigen::Matrix4d m_ = Eigen::Matrix4d::Identity();
};

/// Second moments of the trigger quadrature q1(theta) and the verified
/// quadrature q2(psi) at fixed phase shifts.
struct ConditionalMoments {
  double a = 1.0;  ///< Var[q1(theta)]
  double b = 1.0;  ///< Var[q2(psi)]
  double c = 0.0;  ///< Cov[q1(theta), q2(psi)]

  double d() const { return a * b - c * c; }
};

/// R(phi) cov R(phi)^T with x' = x cos(phi) + p sin(phi), p' = -x sin(phi) + p cos(phi).
ModeCovariance rotate_covariance(const ModeCovariance& cov, double phi);

/// Balanced beam splitter q1' = (q1 + q2)/sqrt2, q2' = (q1 - q2)/sqrt2 acting on
/// two uncorrelated modes.
TwoModeCovariance beamsplitter_transform(const ModeCovariance& cov1, const ModeCovariance& cov2);

/// The same beam splitter applied to an arbitrary two-mode covariance. The map
/// is its own inverse.
TwoModeCovariance beamsplitter_transform(const TwoModeCovariance& tm);

/// Moments of q1(theta) = x1 cos + p1 sin (mode 1) and q2(psi) (mode 2).
ConditionalMoments conditional_moments(const TwoModeCovariance& tm, double theta, double psi);

/// Literal closed-form moments for identical diagonal inputs rotated by phi1,
/// phi2 with verified quadrature x2. Kept separate from the matrix path so each
/// can check the other.
ConditionalMoments closed_form_moments(const SqueezedModeParams& params, double phi1, double phi2,
                                       double theta);

/// Loss channel of transmissivity eta: V -> eta V + (1 - eta) on the diagonal,
/// off-diagonals scaled by eta. Requires 0 < eta <= 1.
ModeCovariance apply_detection_efficiency(const ModeCovariance& cov, double eta);

/// Convenience: rotate both copies, apply efficiency, interfere, read moments.
ConditionalMoments moments_at_phases(const SqueezedModeParams& params, double phi1, double phi2,
                                     double theta, double psi, double eta = 1.0);

}  // namespace sqd
