#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lattika/arakelov.hpp"

using namespace lattika;

TEST(Factorize, SmallAndLargePrimes) {
  auto const f = factorize(Integer(360));
  EXPECT_EQ(f.at(Integer(2)), 3);
  EXPECT_EQ(f.at(Integer(3)), 2);
  EXPECT_EQ(f.at(Integer(5)), 1);
  auto const big = factorize(Integer(1000003) * Integer(1000033));
  EXPECT_EQ(big.size(), 2u);
  EXPECT_EQ(big.at(Integer(1000033)), 1);
  EXPECT_TRUE(factorize(Integer(1)).empty());
}

TEST(Divisor, DegreeAndNorm) {
  ArakelovDivisor const zero;
  EXPECT_EQ(degree(zero), 0.0);
  EXPECT_EQ(norm(zero), 1.0);
  ArakelovDivisor const two({{Integer(2), 1}}, 0.0);
  EXPECT_NEAR(degree(two), std::log(2.0), 1e-15);
  EXPECT_NEAR(norm(two), 2.0, 1e-14);
  ArakelovDivisor const cancel({{Integer(3), -1}}, std::log(3.0));
  EXPECT_NEAR(degree(cancel), 0.0, 1e-15);
  EXPECT_THROW(ArakelovDivisor({{Integer(4), 1}}, 0.0), Error);
  ArakelovDivisor const dropped({{Integer(7), 0}}, 0.0);
  EXPECT_TRUE(dropped.finite().empty());
}

TEST(Divisor, PrincipalDivisors) {
  auto const one = principal_divisor(Rational(1));
  EXPECT_TRUE(one.finite().empty());
  EXPECT_EQ(one.lambda(), 0.0);
  auto const d = principal_divisor(Rational(3, 2));
  EXPECT_EQ(d.order_at(Integer(2)), -1);
  EXPECT_EQ(d.order_at(Integer(3)), 1);
  EXPECT_NEAR(d.lambda(), -std::log(1.5), 1e-15);
  for (auto const& f : {Rational(7), Rational(-5, 9), Rational(1000003)}) {
    EXPECT_NEAR(degree(principal_divisor(f)), 0.0, 1e-14) << f.get_str();
  }
  EXPECT_THROW(principal_divisor(Rational(0)), Error);
}

TEST(Divisor, Additivity) {
  ArakelovDivisor const a({{Integer(2), 3}, {Integer(5), -1}}, 0.7);
  ArakelovDivisor const b({{Integer(5), 1}, {Integer(11), 2}}, -0.2);
  auto const sum = a + b;
  EXPECT_EQ(sum.order_at(Integer(5)), 0);
  EXPECT_EQ(sum.finite().count(Integer(5)), 0u);
  EXPECT_NEAR(degree(sum), degree(a) + degree(b), 1e-13);

  Rational const f(12, 35);
  Rational const g(-49, 6);
  auto const lhs = principal_divisor(f * g);
  auto const rhs = principal_divisor(f) + principal_divisor(g);
  EXPECT_EQ(lhs.finite(), rhs.finite());
  EXPECT_EQ(*lhs.exp_lambda(), *rhs.exp_lambda());
  EXPECT_NEAR(degree(lhs), 0.0, 1e-14);
}

TEST(Effectivity, Examples) {
  auto const gs = gauss_schoof_effectivity();
  EXPECT_NEAR(effectivity(ArakelovDivisor{}, gs), std::exp(-std::numbers::pi), 1e-16);
  EXPECT_EQ(effectivity(ArakelovDivisor({{Integer(5), -1}}, 0.0), gs), 0.0);
  auto const sym = symmetric_exponential_effectivity();
  EXPECT_NEAR(effectivity(ArakelovDivisor{}, sym), 1.0, 1e-14);
}

TEST(Effectivity, RangeAndMonotonicity) {
  auto const gs = gauss_schoof_effectivity();
  auto const sym = symmetric_exponential_effectivity();
  double previous = -1.0;
  for (double lambda = -1.5; lambda <= 3.0; lambda += 0.25) {
    ArakelovDivisor const d({{Integer(3), 1}}, lambda);
    double const e = effectivity(d, gs);
    EXPECT_GE(e, 0.0);
    EXPECT_LE(e, 1.0);
    EXPECT_GT(e, previous);
    previous = e;
    double const s = effectivity(d, sym);
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0 + 1e-12);
  }
  MellinEnvelopes env;
  EXPECT_THROW(general_effectivity("bad", [](double x) { return x; }, 1.0, env), Error);
  EXPECT_THROW(general_effectivity("neg", [](double) { return -0.1; }, 1.0, env), Error);
}

TEST(LineBundle, RankOneLattices) {
  auto const zero = line_bundle_lattice(ArakelovDivisor{});
  ASSERT_TRUE(zero.exact.has_value());
  EXPECT_EQ(zero.exact->gram(), GramMatrix{{1}});
  EXPECT_EQ(h0_ar(zero).count, 3u);

  auto const two = line_bundle_lattice(ArakelovDivisor({{Integer(2), 1}}, 0.0));
  EXPECT_EQ(two.generator, Rational(1, 2));
  EXPECT_EQ(two.exact->gram(), GramMatrix{{Rational(1, 4)}});
  EXPECT_EQ(h0_ar(two).count, 5u);
  EXPECT_NEAR(h0_ar(two).value.estimate, std::log(5.0), 1e-15);

  auto const metric = line_bundle_lattice(ArakelovDivisor::with_exact_lambda({}, Rational(2)));
  EXPECT_EQ(metric.exact->gram(), GramMatrix{{Rational(1, 4)}});
  EXPECT_EQ(h0_ar(metric).count, 5u);
  EXPECT_NEAR(h0_theta(two, 1e-12).estimate, h0_theta(metric, 1e-12).estimate, 1e-15);
}

TEST(LineBundle, InexactMetric) {
  // lambda = log 2 given only as a double: the points +-2 sit on the sphere.
  auto const ambiguous = line_bundle_lattice(ArakelovDivisor({}, std::log(2.0)));
  EXPECT_FALSE(ambiguous.exact.has_value());
  EXPECT_THROW(h0_ar(ambiguous), Error);
  auto const clear = line_bundle_lattice(ArakelovDivisor({}, 0.9));
  EXPECT_EQ(h0_ar(clear).count, 5u);
  auto const exact = line_bundle_lattice(ArakelovDivisor::with_exact_lambda({}, Rational(2)));
  auto const approx = h0_theta(ambiguous, 1e-12);
  auto const reference = h0_theta(exact, 1e-12);
  EXPECT_LE(std::abs(approx.estimate - reference.estimate), approx.bound + reference.bound + 1e-14);
}

TEST(Chi, DegreeAndThetaDifference) {
  for (std::size_t n = 1; n <= 3; ++n) {
    auto const r = chi(standard_lattice(n), 1e-12);
    EXPECT_EQ(r.degree.estimate, 0.0);
    EXPECT_TRUE(r.consistent());
  }
  auto const four = chi(make_lattice(GramMatrix{{4}}), 1e-12);
  EXPECT_NEAR(four.degree.estimate, -std::log(2.0), 1e-15);
  EXPECT_NEAR(four.theta_difference.estimate, -std::log(2.0), 1e-9);
  auto const a = make_lattice(GramMatrix{{2, 1}, {1, 3}});
  auto const b = make_lattice(GramMatrix{{Rational(1, 3)}});
  auto const sum = chi(direct_sum(a, b), 1e-12);
  EXPECT_NEAR(sum.degree.estimate, chi(a, 1e-12).degree.estimate + chi(b, 1e-12).degree.estimate, 1e-14);
  EXPECT_TRUE(sum.consistent());
}
