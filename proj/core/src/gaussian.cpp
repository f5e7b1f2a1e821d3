#include "sqd/gaussian.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "sqd/errors.hpp"

namespace sqd {
namespace {

Eigen::Matrix4d beamsplitter_matrix() {
  const double s = 1.0 / std::numbers::sqrt2;
  Eigen::Matrix4d bs;
  // clang-format off
  bs << s, 0,  s,  0,
        0, s,  0,  s,
        s, 0, -s,  0,
        0, s,  0, -s;
  // clang-format on
  return bs;
}

const Eigen::Matrix4d& bs_matrix() {
  static const Eigen::Matrix4d bs = beamsplitter_matrix();
  return bs;
}

}  // namespace

void SqueezedModeParams::validate() const {
  if (!(v_x > 0.0) || !(v_p > 0.0)) throw InvalidArgument("quadrature variances must be positive");
  if (v_x * v_p < 1.0 - kPhysicalityTolerance)
    throw InvalidArgument("v_x * v_p < 1 violates the uncertainty relation");
}

ModeCovariance::ModeCovariance(double c_xx, double c_xp, double c_pp) {
  m_ << c_xx, c_xp, c_xp, c_pp;
}

bool ModeCovariance::is_physical() const {
  return c_xx() > 0.0 && c_pp() > 0.0 && determinant() >= 1.0 - kPhysicalityTolerance;
}

TwoModeCovariance::TwoModeCovariance(const Eigen::Matrix4d& m) : m_(0.5 * (m + m.transpose())) {}

TwoModeCovariance TwoModeCovariance::block_diagonal(const ModeCovariance& a,
                                                    const ModeCovariance& b) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m.topLeftCorner<2, 2>() = a.matrix();
  m.bottomRightCorner<2, 2>() = b.matrix();
  return TwoModeCovariance(m);
}

bool TwoModeCovariance::is_physical() const {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> real_solver(m_, Eigen::EigenvaluesOnly);
  if (real_solver.eigenvalues().minCoeff() <= 0.0) return false;
  // V + i Omega must be positive semidefinite (vacuum = identity convention).
  Eigen::Matrix4cd h = m_.cast<std::complex<double>>();
  const std::complex<double> i(0.0, 1.0);
  for (int mode = 0; mode < 2; ++mode) {
    h(2 * mode, 2 * mode + 1) += i;
    h(2 * mode + 1, 2 * mode) -= i;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff() >= -kPhysicalityTolerance;
}

ModeCovariance rotate_covariance(const ModeCovariance& cov, double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  Eigen::Matrix2d r;
  r << c, s, -s, c;
  const Eigen::Matrix2d out = r * cov.matrix() * r.transpose();
  return {out(0, 0), 0.5 * (out(0, 1) + out(1, 0)), out(1, 1)};
}

TwoModeCovariance beamsplitter_transform(const ModeCovariance& cov1, const ModeCovariance& cov2) {
  return beamsplitter_transform(TwoModeCovariance::block_diagonal(cov1, cov2));
}

TwoModeCovariance beamsplitter_transform(const TwoModeCovariance& tm) {
  const Eigen::Matrix4d& bs = bs_matrix();
  return TwoModeCovariance(bs * tm.matrix() * bs.transpose());
}

ConditionalMoments conditional_moments(const TwoModeCovariance& tm, double theta, double psi) {
  Eigen::Vector4d u(std::cos(theta), std::sin(theta), 0.0, 0.0);
  Eigen::Vector4d v(0.0, 0.0, std::cos(psi), std::sin(psi));
  const Eigen::Matrix4d& m = tm.matrix();
  return {u.dot(m * u), v.dot(m * v), u.dot(m * v)};
}

ConditionalMoments closed_form_moments(const SqueezedModeParams& params, double phi1, double phi2,
                                       double theta) {
  const double vx = params.v_x;
  const double vp = params.v_p;
  const double c1 = std::cos(phi1), s1 = std::sin(phi1);
  const double c2 = std::cos(phi2), s2 = std::sin(phi2);
  const double vx1 = vx * c1 * c1 + vp * s1 * s1;
  const double vx2 = vx * c2 * c2 + vp * s2 * s2;
  const double vp1 = vp * c1 * c1 + vx * s1 * s1;
  const double vp2 = vp * c2 * c2 + vx * s2 * s2;
  const double ct = std::cos(theta), st = std::sin(theta);
  const double sin2a = std::sin(2.0 * phi1), sin2b = std::sin(2.0 * phi2);

  ConditionalMoments m;
  m.a = 0.5 * (vx1 + vx2) * ct * ct + 0.5 * (vp1 + vp2) * st * st +
        0.25 * (vp - vx) * (sin2a + sin2b) * std::sin(2.0 * theta);
  m.b = 0.5 * (vx1 + vx2);
  m.c = 0.5 * (vx1 - vx2) * ct + 0.25 * (vp - vx) * (sin2a - sin2b) * st;
  return m;
}

ModeCovariance apply_detection_efficiency(const ModeCovariance& cov, double eta) {
  if (!(eta > 0.0) || eta > 1.0) throw InvalidArgument("detection efficiency must lie in (0, 1]");
  return {eta * cov.c_xx() + 1.0 - eta, eta * cov.c_xp(), eta * cov.c_pp() + 1.0 - eta};
}

ConditionalMoments moments_at_phases(const SqueezedModeParams& params, double phi1, double phi2,
                                     double theta, double psi, double eta) {
  const ModeCovariance base = ModeCovariance::from(params);
  ModeCovariance m1 = rotate_covariance(base, phi1);
  ModeCovariance m2 = rotate_covariance(base, phi2);
  if (eta != 1.0) {
    m1 = apply_detection_efficiency(m1, eta);
    m2 = apply_detection_efficiency(m2, eta);
  }
  return conditional_moments(beamsplitter_transform(m1, m2), theta, psi);
}

}  // namespace sqd
