#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lattika/quadrature.hpp"
#include "lattika/special.hpp"

using namespace lattika;

TEST(Gamma, ReferenceValues) {
  EXPECT_EQ(lattika::gamma(1.0).value, 1.0);
  EXPECT_EQ(lattika::gamma(10.0).value, 362880.0);
  EXPECT_NEAR(lattika::gamma(0.5).value, std::sqrt(std::numbers::pi), 1e-14);
  EXPECT_THROW(lattika::gamma(0.0), Error);
  EXPECT_THROW(lattika::gamma(-1.5), Error);
}

TEST(Gamma, AgreesWithQuadratureOracle) {
  // Gamma(s) = 2 int_0^inf u^{2s-1} e^{-u^2} du, integrated on [0, 12].
  for (double s : {0.5, 0.75, 1.3, 2.5, 4.2}) {
    auto const f = [s](double u) { return 2.0 * std::pow(u, 2.0 * s - 1.0) * std::exp(-u * u); };
    QuadratureOptions options;
    options.abs_tol = 1e-13;
    double const oracle = integrate(f, 0.0, 12.0, options, {1.0, 3.0}).value;
    EXPECT_NEAR(lattika::gamma(s).value, oracle, 1e-11 * std::max(1.0, oracle)) << s;
  }
}

TEST(Zeta, ReferenceValues) {
  double const pi = std::numbers::pi;
  auto const z2 = riemann_zeta(2.0);
  EXPECT_NEAR(z2.value, pi * pi / 6.0, 1e-13);
  EXPECT_LE(z2.error, 1e-13);
  EXPECT_NEAR(riemann_zeta(4.0).value, std::pow(pi, 4) / 90.0, 1e-13);
  EXPECT_NEAR(riemann_zeta(0.5, 1e-12).value, -1.4603545088095868, 1e-12);
  EXPECT_THROW(riemann_zeta(1.0), Error);
  EXPECT_THROW(riemann_zeta(0.0), Error);
  try {
    riemann_zeta(1.0);
  } catch (Error const& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PoleAtOne);
  }
}

TEST(Zeta, EulerMaclaurinAgreesWithEtaRoute) {
  // For s > 1 the alternating series also converges: zeta = eta / (1 - 2^{1-s}).
  for (double s : {1.5, 2.0, 3.7}) {
    auto const eta = dirichlet_eta(s, 1e-13);
    double const via_eta = eta.value / (1.0 - std::pow(2.0, 1.0 - s));
    EXPECT_NEAR(riemann_zeta(s).value, via_eta, 1e-12) << s;
  }
}

TEST(Zeta, DecreasingAboveOne) {
  double previous = std::numeric_limits<double>::infinity();
  for (double s = 1.1; s < 12.0; s += 0.37) {
    double const v = riemann_zeta(s).value;
    EXPECT_LT(v, previous);
    previous = v;
  }
}

TEST(CompleteZeta, FunctionalEquation) {
  for (double s : {0.3, 0.4}) {
    auto const a = complete_zeta(s, 1e-10);
    auto const b = complete_zeta(1.0 - s, 1e-10);
    EXPECT_NEAR(a.value, b.value, 1e-8);
    EXPECT_LE(a.error, 1e-10);
  }
  EXPECT_NEAR(complete_zeta(2.0).value, std::numbers::pi / 3.0, 1e-12);
}

TEST(Quadrature, KnownIntegralsAndFailure) {
  auto const r = integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
  EXPECT_NEAR(r.value, 2.0, 1e-12);
  EXPECT_LE(r.error, 1e-12);
  QuadratureOptions stingy;
  stingy.abs_tol = 1e-15;
  stingy.max_evaluations = 60;
  EXPECT_THROW(integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, stingy), Error);
}

TEST(BallVolume, ClosedForms) {
  EXPECT_DOUBLE_EQ(ball_volume(1, 0.3), 0.6);
  EXPECT_DOUBLE_EQ(ball_volume(2, 0.5), std::numbers::pi * 0.25);
  EXPECT_NEAR(ball_volume(3, 1.0), 4.0 * std::numbers::pi / 3.0, 1e-14);
}
