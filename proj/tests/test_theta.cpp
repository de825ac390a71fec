#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lattika/selftest.hpp"
#include "lattika/special.hpp"
#include "lattika/theta.hpp"

using namespace lattika;

namespace {

// Direct summation over a coordinate box, the reference for small lattices.
double box_theta(Lattice const& l, double t, int bound) {
  std::size_t const n = l.rank();
  std::vector<std::int64_t> x(n, -bound);
  double sum = 0.0;
  for (;;) {
    sum += std::exp(-std::numbers::pi * t * norm_sq(l, LatticeVector{x}).get_d());
    std::size_t i = 0;
    while (i < n && x[i] == bound) x[i++] = -bound;
    if (i == n) break;
    ++x[i];
  }
  return sum;
}

}  // namespace

TEST(Theta, IntegersAtOne) {
  auto const theta = theta_series(standard_lattice(1), 1.0, 1e-12);
  EXPECT_NEAR(theta.value, 1.086434811213308, 1e-12);
  EXPECT_NEAR(theta.value, box_theta(standard_lattice(1), 1.0, 8), 1e-14);
  double const closed = std::pow(std::numbers::pi, 0.25) / std::tgamma(0.75);
  EXPECT_NEAR(theta.value, closed, 1e-13);
  EXPECT_LE(theta.tail + theta.rounding, 1e-12);
}

TEST(Theta, LargeTLeavesOnlyOrigin) {
  auto const l = make_lattice(GramMatrix{{2, 1}, {1, 2}});
  EXPECT_NEAR(theta_series(l, 1e6, 1e-9).value, 1.0, 1e-9);
}

TEST(Theta, ScalingMatchesLargerT) {
  auto const l = make_lattice(GramMatrix{{2, 1}, {1, 3}});
  Rational const c(3, 2);
  auto const a = theta_series(scale(l, c), 1.0, 1e-13);
  auto const b = theta_series(l, 2.25, 1e-13);
  EXPECT_NEAR(a.value, b.value, 1e-12);
}

TEST(Theta, H0Theta) {
  EXPECT_NEAR(h0_theta(standard_lattice(1), 1e-13).estimate, std::log(1.086434811213308), 1e-12);
  EXPECT_NEAR(h0_theta(standard_lattice(1), 1e-13).estimate, 0.0829015, 1e-7);
  auto const tight = h0_theta(make_lattice(GramMatrix{{1000000}}), 1e-12);
  EXPECT_NEAR(tight.estimate, 0.0, 1e-12);
  EXPECT_GE(tight.estimate, 0.0);
}

TEST(Theta, RiemannRochSmallCases) {
  for (std::size_t n = 1; n <= 3; ++n) {
    auto const check = rr_defect(standard_lattice(n), 1e-12);
    EXPECT_TRUE(check.verified());
    EXPECT_LE(std::abs(check.defect.estimate), 1e-12);
  }
  auto const four = make_lattice(GramMatrix{{4}});
  double const oracle = std::log(box_theta(four, 1.0, 10)) - std::log(box_theta(dual(four), 1.0, 40));
  EXPECT_NEAR(oracle, -std::log(2.0), 1e-12);
  auto const check = rr_defect(four, 1e-12);
  EXPECT_TRUE(check.verified());
  EXPECT_LE(std::abs(check.defect.estimate), 1e-9);
  auto const hex = make_lattice(GramMatrix{{2, 1}, {1, 2}});
  double const hex_oracle = std::log(box_theta(hex, 1.0, 8)) - std::log(box_theta(dual(hex), 1.0, 12)) +
                            0.5 * std::log(3.0);
  EXPECT_NEAR(hex_oracle, 0.0, 1e-12);
  EXPECT_LE(std::abs(rr_defect(hex, 1e-12).defect.estimate), 1e-9);
}

TEST(Theta, RiemannRochRandomLattices) {
  std::mt19937_64 rng(99);
  for (int k = 0; k < 25; ++k) {
    auto const l = random_rational_lattice(rng, 1 + k % 4, 10);
    auto const check = rr_defect(l, 1e-12);
    EXPECT_TRUE(check.verified()) << l.gram().to_string();
    EXPECT_LE(check.defect.bound, 1e-9);
  }
}

TEST(Theta, PerturbedNormalisationBreaksRiemannRoch) {
  // Evaluating theta at t = 1.01 instead of 1 must be caught by the defect bound.
  auto const l = make_lattice(GramMatrix{{2, 1}, {1, 3}});
  auto const good = rr_defect(l, 1e-12);
  auto const h = detail::log_theta(theta_series(l, 1.01, 1e-12));
  auto const hd = detail::log_theta(theta_series(dual(l), 1.01, 1e-12));
  auto const defect = h - hd - arithmetic_degree(l);
  EXPECT_GT(std::abs(defect.estimate), 1e3 * good.defect.bound);
}

TEST(Theta, StrictlyDecreasingInT) {
  auto const l = make_lattice(GramMatrix{{1, Rational(1, 3)}, {Rational(1, 3), 2}});
  double previous = std::numeric_limits<double>::infinity();
  for (double t = 0.25; t <= 4.0; t *= 1.5) {
    double const v = theta_series(l, t, 1e-12).value;
    EXPECT_LT(v, previous);
    previous = v;
  }
}

TEST(Theta, TailBoundIsSound) {
  auto const l = make_lattice(GramMatrix{{1, Rational(1, 2)}, {Rational(1, 2), 1}});
  for (double t : {0.3, 1.0, 2.0}) {
    auto const base = theta_series(l, t, 1e-6);
    Rational const doubled = base.radius_sq_used * 4;
    auto const wide = theta_series_with_radius(l, t, doubled);
    EXPECT_LE(std::abs(wide.value - base.value), base.tail + base.rounding + wide.rounding);
  }
}

TEST(Theta, RealGramMatchesExact) {
  auto const l = make_lattice(GramMatrix{{2, 1}, {1, 3}});
  auto const exact = theta_series(l, 1.0, 1e-12);
  auto const real = theta_series(RealLattice::from(l), 1.0, 1e-12);
  EXPECT_NEAR(exact.value, real.value, exact.tail + real.tail + 1e-14);
}

TEST(Theta, ArgumentErrors) {
  EXPECT_THROW(theta_series(standard_lattice(1), 0.0, 1e-9), Error);
  EXPECT_THROW(theta_series(standard_lattice(1), 1.0, 0.0), Error);
}
