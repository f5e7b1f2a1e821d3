#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "sqd/analytics.hpp"
#include "sqd/errors.hpp"
#include "sqd/quadrature.hpp"

namespace sqd {
namespace {

constexpr double kPi = std::numbers::pi;

ProtocolParams fig2(double sigma, double q, double theta, int n = 1) {
  ProtocolParams p;
  p.state = {0.32, 8.5};
  p.sigma = sigma;
  p.q_threshold = q;
  p.theta = theta;
  p.n_qcp = n;
  return p;
}

TEST(Erf, MatchesSeriesAndContinuedFractionOracles) {
  for (long double x : {0.05L, 0.3L, 0.7L, 1.0L, 1.25L, 2.0L}) {
    const long double ref = oracle::erf_series(x);
    EXPECT_LE(std::fabs(std::erf(static_cast<double>(x)) - ref) / ref, 1e-15L) << x;
  }
  EXPECT_NEAR(std::erf(0.7), 0.6778011938374184, 1e-16);
  for (long double x : {2.0L, 3.0L, 4.5L}) {
    const long double ref = oracle::erfc_continued_fraction(x);
    EXPECT_LE(std::fabs(std::erfc(static_cast<double>(x)) - ref) / ref, 1e-14L) << x;
  }
  // Both oracles must agree where their ranges overlap.
  EXPECT_NEAR(static_cast<double>(1.0L - oracle::erf_series(2.5L)),
              static_cast<double>(oracle::erfc_continued_fraction(2.5L)), 1e-15);
}

TEST(ProtocolParams, Validation) {
  EXPECT_NO_THROW(fig2(0.28, 1.0, 0.0).validate());
  EXPECT_THROW(fig2(-0.1, 1.0, 0.0).validate(), InvalidArgument);
  EXPECT_THROW(fig2(0.1, 0.0, 0.0).validate(), InvalidArgument);
  EXPECT_THROW(fig2(0.1, 1.0, 0.0, 0).validate(), InvalidArgument);
  auto p = fig2(0.1, 1.0, 0.0);
  p.eta = 0.0;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = fig2(0.1, 1.0, 0.0);
  p.state = {0.3, 2.0};
  EXPECT_THROW(p.validate(), InvalidArgument);
}

TEST(VIn, Limits) {
  EXPECT_NEAR(v_in(fig2(0.0, 1.0, 0.0)), 0.32, 1e-15);
  EXPECT_NEAR(v_in(fig2(50.0, 1.0, 0.0)), 4.41, 1e-12);
}

TEST(VIn, ClosedFormMatchesAdaptiveQuadrature) {
  // Adaptive Gauss-Kronrod of the rotated variance against the Gaussian phase density.
  const double sigma = 0.28;
  const double ref = oracle::integrate(
      [&](double phi) {
        const double c = std::cos(phi), s = std::sin(phi);
        return (0.32 * c * c + 8.5 * s * s) * std::exp(-phi * phi / (2 * sigma * sigma)) /
               std::sqrt(2 * kPi * sigma * sigma);
      },
      -12 * sigma, 12 * sigma);
  EXPECT_NEAR(ref, 0.913561181596102, 1e-12);
  EXPECT_NEAR(v_in(fig2(sigma, 1.0, 0.0)), ref, 1e-10);
  for (double s : {0.01, 0.1, 0.17, 0.4, 0.6, 1.5}) {
    auto p = fig2(s, 1.0, 0.0);
    EXPECT_NEAR(v_in(p), v_in_quadrature(p), 1e-10) << s;
    p.eta = 0.8;
    EXPECT_NEAR(v_in(p), v_in_quadrature(p), 1e-10) << s;
  }
}

TEST(Integrand, MatchesBruteForceConditionedMoment) {
  for (auto [phi1, phi2, theta, q] : {std::tuple{0.1, -0.3, 0.0, 1.0},
                                      std::tuple{0.4, 0.2, kPi / 2, 0.7},
                                      std::tuple{-0.2, 0.5, 1.0, 0.2}}) {
    const auto p = fig2(0.28, q, theta);
    const auto got = evaluate_integrand(p, 0.0, phi1, phi2);
    const auto m = closed_form_moments(p.state, phi1, phi2, theta);
    const auto ref = oracle::conditioned_bruteforce(m.a, m.b, m.c, q);
    EXPECT_NEAR(got.weighted_variance, ref.weighted_variance, 1e-13);
    EXPECT_NEAR(got.probability, ref.probability, 1e-13);
  }
}

TEST(VOut, NoiselessMatchesErf) {
  for (double q : {0.3, 1.0, 2.5}) {
    const auto r = v_out(fig2(0.0, q, 0.0));
    EXPECT_NEAR(r.v_out, 0.32, 1e-14);
    EXPECT_NEAR(r.p_success, std::erf(q / std::sqrt(0.64)), 1e-15);
  }
}

TEST(VOut, WideWindowRecoversInputVariance) {
  for (double sigma : {0.17, 0.28, 0.4}) {
    const auto r = v_out(fig2(sigma, 1e3, 0.0));
    EXPECT_NEAR(r.v_out, r.v_in, 1e-6);
    EXPECT_NEAR(r.p_success, 1.0, 1e-6);
  }
}

TEST(VOut, ConjugateTriggerWinsBelowCrossover) {
  const auto x = v_out(fig2(0.28, 1.0, 0.0));
  const auto p = v_out(fig2(0.28, 1.0, kPi / 2));
  EXPECT_LT(p.v_out, x.v_out);
  EXPECT_LT(x.v_out, x.v_in);
}

// Reference values from scipy.integrate.dblquad of the same double integral
// (epsrel 1e-12), i.e. an independent adaptive quadrature.
TEST(VOut, MatchesAdaptiveDoubleIntegral) {
  struct Case {
    double sigma, q, theta;
    int n;
    double v, p;
  };
  for (const Case& c : {Case{0.28, 1.0, 0.0, 1, 0.700983801335279, 0.737172152537805},
                        Case{0.28, 1.0, kPi / 2, 1, 0.675685926500696, 0.278406336033187},
                        Case{0.17, 0.4, 0.0, 1, 0.473562594457982, 0.426767697007856},
                        Case{0.40, 1.5, kPi / 2, 1, 1.08442242406652, 0.421777021905172},
                        Case{0.28, 1.0, 0.0, 2, 0.652066628909367, 0.558530044492141},
                        Case{0.28, 1.0, 0.0, 4, 0.57789103591591, 0.34278007354036},
                        Case{0.202, 0.7, 0.0, 1, 0.533838368429314, 0.642421402276253},
                        Case{0.202, 0.7, kPi / 2, 1, 0.49947776159063, 0.193460406958807}}) {
    const auto r = v_out_qcp(fig2(c.sigma, c.q, c.theta, c.n));
    EXPECT_NEAR(r.v_out, c.v, 1e-9) << c.sigma << " " << c.q << " " << c.theta << " " << c.n;
    EXPECT_NEAR(r.p_success, c.p, 1e-9);
  }
}

TEST(VOut, RejectsQcpDepth) { EXPECT_THROW(v_out(fig2(0.2, 1.0, 0.0, 2)), InvalidArgument); }

TEST(VOut, NodeDoublingConverges) {
  for (double sigma : {0.02, 0.1, 0.2, 0.3, 0.45, 0.6})
    for (double q : {0.1, 0.5, 1.0, 2.0, 3.0})
      for (double theta : {0.0, 0.7, kPi / 2}) {
        const auto p = fig2(sigma, q, theta);
        const auto a = v_out_with_nodes(p, 0.0, 64);
        const auto b = v_out_with_nodes(p, 0.0, 128);
        EXPECT_LT(std::abs(a.v_out - b.v_out), 1e-8) << sigma << " " << q << " " << theta;
        EXPECT_LT(std::abs(a.p_success - b.p_success), 1e-8);
      }
}

TEST(VOut, SuccessProbabilityIncreasesWithThreshold) {
  for (double sigma : {0.0, 0.17, 0.4})
    for (double theta : {0.0, kPi / 2}) {
      double prev = 0.0;
      for (double q = 0.1; q <= 3.0; q += 0.1) {
        const double p = v_out(fig2(sigma, q, theta)).p_success;
        EXPECT_GT(p, prev);
        prev = p;
      }
    }
}

TEST(VOut, NeverBelowLossyInputVariance) {
  for (double eta : {1.0, 0.85, 0.5})
    for (double sigma : {0.0, 0.17, 0.28, 0.4})
      for (double q : {0.1, 0.7, 1.5})
        for (double theta : {0.0, 0.8, kPi / 2}) {
          auto p = fig2(sigma, q, theta);
          p.eta = eta;
          EXPECT_GE(v_out(p).v_out, eta * 0.32 + 1 - eta - 1e-12);
        }
}

TEST(VOut, EfficiencyEntersThroughTheVariances) {
  // With sigma = 0 and theta = 0 the output is the lossy squeezed variance.
  auto p = fig2(0.0, 1.0, 0.0);
  p.eta = 0.9;
  const auto r = v_out(p);
  EXPECT_NEAR(r.v_out, 0.388, 1e-14);
  EXPECT_NEAR(r.p_success, std::erf(1.0 / std::sqrt(2 * 0.388)), 1e-15);
  EXPECT_NEAR(r.v_in, 0.388, 1e-14);
}

TEST(VOut, SymmetricUnderPhaseNegation) {
  for (double sigma : {0.05, 0.28}) {
    const auto p = fig2(sigma, 0.8, 0.6);
    const PhaseRule rule = phase_rule(sigma, 64);
    double full = 0.0, mirrored = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i)
      for (std::size_t j = 0; j < rule.size(); ++j) {
        const double w = rule.weight[i] * rule.weight[j];
        full += w * evaluate_integrand(p, 0.0, rule.phi[i], rule.phi[j]).weighted_variance;
        mirrored += w * evaluate_integrand(p, 0.0, -rule.phi[i], -rule.phi[j]).weighted_variance;
      }
    EXPECT_NEAR(full, mirrored, 1e-10);
  }
}

TEST(VOutQcp, DepthOneIsBitIdentical) {
  for (double theta : {0.0, 1.1}) {
    const auto a = v_out(fig2(0.28, 0.9, theta));
    const auto b = v_out_qcp(fig2(0.28, 0.9, theta, 1));
    EXPECT_EQ(a.v_out, b.v_out);
    EXPECT_EQ(a.p_success, b.p_success);
  }
}

TEST(VOutQcp, NoiselessFactorizes) {
  for (int n : {1, 2, 4}) {
    const auto r = v_out_qcp(fig2(0.0, 1.0, 0.0, n));
    EXPECT_NEAR(r.v_out, 0.32, 1e-14);
    EXPECT_NEAR(r.p_success, std::pow(std::erf(1.0 / std::sqrt(0.64)), n), 1e-14);
  }
}

TEST(VOutQcp, DeeperProbingHelpsOnSqueezedTrigger) {
  for (double q : {0.3, 0.7, 1.0, 1.5, 2.0}) {
    const auto r1 = v_out_qcp(fig2(0.28, q, 0.0, 1));
    const auto r2 = v_out_qcp(fig2(0.28, q, 0.0, 2));
    const auto r4 = v_out_qcp(fig2(0.28, q, 0.0, 4));
    EXPECT_LE(r2.v_out, r1.v_out);
    EXPECT_LE(r4.v_out, r2.v_out);
    EXPECT_GT(r1.p_success, r2.p_success);
    EXPECT_GT(r2.p_success, r4.p_success);
  }
}

TEST(VOutGeneral, PsiZeroIsVOut) {
  const auto p = fig2(0.28, 1.0, 0.4);
  EXPECT_NEAR(v_out_general(p, 0.0), v_out(p).v_out, 1e-12);
}

TEST(VOutGeneral, NoiselessConjugateQuadratureUntouched) {
  EXPECT_NEAR(v_out_general(fig2(0.0, 1.0, 0.0), kPi / 2), 8.5, 1e-13);
}

TEST(UncertaintyProduct, TighterWindowPurifiesMore) {
  EXPECT_LT(uncertainty_product(fig2(0.28, 0.5, 0.0)), uncertainty_product(fig2(0.28, 2.0, 0.0)));
  // Unconditioned noiseless product is sqrt(Vx Vp).
  EXPECT_NEAR(uncertainty_product(fig2(0.0, 1e3, 0.0)), std::sqrt(0.32 * 8.5), 1e-12);
}

TEST(VOutRandomized, BeatsInputVariance) {
  const auto r = v_out_randomized(fig2(0.202, 0.7, 0.0));
  EXPECT_LT(r.v_out, r.v_in);
  // The mixture lies between the best and worst fixed-angle results.
  EXPECT_GT(r.v_out, v_out(fig2(0.202, 0.7, kPi / 2)).v_out);
  EXPECT_LT(r.v_out, 0.5551);
}

TEST(Povm, VacuumCoefficientIsErf) {
  for (double q : {0.1, 0.7, 1.0, 2.0}) EXPECT_NEAR(povm_coefficients(q, 0)[0], std::erf(q), 1e-12);
  EXPECT_NEAR(povm_coefficients(0.7, 0)[0], 0.6778011938374184, 1e-12);
}

TEST(Povm, MatchesBoostHermiteOracle) {
  for (double q : {0.3, 0.7, 1.0, 2.5}) {
    const auto p = povm_coefficients(q, 20);
    for (unsigned n = 0; n <= 20; ++n) EXPECT_NEAR(p[n], oracle::povm_coefficient(n, q), 1e-12);
  }
  // mpmath reference at Q = 0.7.
  const auto p = povm_coefficients(0.7, 20);
  EXPECT_NEAR(p[1], 0.19390879155004144, 1e-14);
  EXPECT_NEAR(p[2], 0.19874771557291524, 1e-14);
  EXPECT_NEAR(p[5], 0.16499438107705213, 1e-14);
  EXPECT_NEAR(p[10], 0.09940129374253469, 1e-14);
  EXPECT_NEAR(p[20], 0.07331109809215530, 1e-14);
}

TEST(Povm, RangeMonotonicityAndLimit) {
  std::vector<double> prev(21, 0.0);
  for (double q = 0.1; q <= 4.0; q += 0.1) {
    const auto p = povm_coefficients(q, 20);
    for (std::size_t n = 0; n <= 20; ++n) {
      EXPECT_GT(p[n], 0.0);
      EXPECT_LT(p[n], 1.0);
      EXPECT_GT(p[n], prev[n]);
    }
    prev = p;
  }
  for (double v : povm_coefficients(10.0, 20)) EXPECT_NEAR(v, 1.0, 1e-8);
}

TEST(Povm, RejectsNonPositiveThreshold) {
  EXPECT_THROW(povm_coefficients(-0.5, 3), InvalidArgument);
  EXPECT_THROW(povm_coefficients(0.0, 3), InvalidArgument);
}

}  // namespace
}  // namespace sqd
