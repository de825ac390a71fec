#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "lattika/measures.hpp"
#include "lattika/quadrature.hpp"

using namespace lattika;

namespace {

Lattice const& integers() {
  static Lattice const z = standard_lattice(1);
  return z;
}

// Mass of N(v, 1/(2 pi t)) in [-r, r] by plain adaptive quadrature.
double rank_one_mass(double v, double t, double r) {
  QuadratureOptions options;
  options.abs_tol = 1e-13;
  double const peak = std::clamp(v, -r, r);
  return integrate([&](double x) { return std::sqrt(t) * std::exp(-std::numbers::pi * t * (x - v) * (x - v)); },
                   -r, r, options, {peak})
      .value;
}

}  // namespace

TEST(MuTheta, Examples) {
  EXPECT_DOUBLE_EQ(mu_theta(standard_lattice(3), LatticeVector{{0, 0, 0}}, 1.0), 1.0);
  EXPECT_NEAR(mu_theta(integers(), LatticeVector{{1}}, 1.0), std::exp(-std::numbers::pi), 1e-16);
  EXPECT_NEAR(mu_theta(integers(), LatticeVector{{1}}, 1.0), 0.0432139, 1e-7);
  EXPECT_DOUBLE_EQ(mu_theta(standard_lattice(2), LatticeVector{{0, 0}}, 4.0), 4.0);
  EXPECT_THROW(mu_theta(standard_lattice(2), LatticeVector{{1}}, 1.0), Error);
}

TEST(MuQuantum, Examples) {
  auto const total = mu_quantum(integers(), LatticeVector{{0}}, 1.0, 100.0, 1e-12);
  EXPECT_NEAR(total.estimate, 1.0, 1e-10);
  auto const unit = mu_quantum(integers(), LatticeVector{{0}}, 1.0, 1.0, 1e-13);
  EXPECT_NEAR(unit.estimate, rank_one_mass(0.0, 1.0, 1.0), 1e-12);
  EXPECT_NEAR(unit.estimate, std::erf(std::sqrt(std::numbers::pi)), 1e-15);
  auto const far = mu_quantum(integers(), LatticeVector{{2}}, 1e6, 1.0, 1e-12);
  EXPECT_LE(far.estimate, 1e-6);
  EXPECT_LE(far.estimate, std::exp(-std::numbers::pi * 1e6) + far.bound);
}

TEST(MuQuantum, AgreesWithOneDimensionalOracle) {
  for (double v : {0.0, 0.3, 1.0, 2.5})
    for (double t : {0.5, 1.0, 3.0})
      for (double r : {0.5, 1.0, 2.0}) {
        auto const gram = GramMatrix{{rational_from_double(v * v == 0.0 ? 1.0 : v * v)}};
        auto const l = make_lattice(gram);
        LatticeVector const x{{v == 0.0 ? 0 : 1}};
        auto const q = mu_quantum(l, x, t, r, 1e-12);
        EXPECT_NEAR(q.estimate, rank_one_mass(v, t, r), 2e-12) << v << ' ' << t << ' ' << r;
      }
}

TEST(MuQuantum, RankTwoAgainstSliceIntegral) {
  // The Gaussian is rotation invariant; compare against a square quadrature grid.
  auto const z2 = standard_lattice(2);
  double const t = 1.0;
  double const r = 1.0;
  QuadratureOptions options;
  options.abs_tol = 1e-12;
  auto const inner = [&](double x) {
    double const h = std::sqrt(std::max(0.0, r * r - x * x));
    double const s = std::sqrt(std::numbers::pi * t);
    return std::sqrt(t) * std::exp(-std::numbers::pi * t * (x - 1.0) * (x - 1.0)) * std::erf(s * h);
  };
  double const oracle = integrate(inner, -r, r, options).value;
  EXPECT_NEAR(mu_quantum(z2, LatticeVector{{1, 0}}, t, r, 1e-12).estimate, oracle, 1e-10);
}

TEST(MuQuantum, BoundedAndRadiallyDecreasing) {
  auto const z2 = standard_lattice(2);
  for (double t : {0.3, 1.0, 5.0}) {
    double previous = 2.0;
    for (int k = 0; k <= 4; ++k) {
      double const q = mu_quantum(z2, LatticeVector{{k, 0}}, t, 1.0, 1e-12).estimate;
      EXPECT_GE(q, 0.0);
      EXPECT_LE(q, 1.0);
      EXPECT_LT(q, previous);
      previous = q;
    }
  }
}

TEST(MuClassical, Examples) {
  auto const z2 = standard_lattice(2);
  EXPECT_EQ(mu_classical(z2, LatticeVector{{1, 0}}, 1.0), 1);
  EXPECT_EQ(mu_classical(z2, LatticeVector{{1, 1}}, 1.0), 0);
  EXPECT_EQ(mu_classical(z2, LatticeVector{{0, 0}}, 0.01), 1);
}

TEST(PropMeanValue, ErrorsShrinkAsRadiusHalves) {
  std::vector<double> const radii = {0.4, 0.2, 0.1, 0.05};
  auto const check = [&](Lattice const& l, LatticeVector const& v) {
    auto const rows = check_prop_2_1(l, v, 1.0, radii, 1e-12);
    ASSERT_EQ(rows.size(), radii.size());
    for (std::size_t i = 1; i < rows.size(); ++i) {
      double const before = std::abs(rows[i - 1].lhs.estimate - rows[i - 1].reference);
      double const after = std::abs(rows[i].lhs.estimate - rows[i].reference);
      EXPECT_LE(after, 0.7 * before);
    }
  };
  check(integers(), LatticeVector{{0}});
  check(make_lattice(GramMatrix{{Rational(9, 100)}}), LatticeVector{{1}});
  EXPECT_THROW(check_prop_2_1(integers(), LatticeVector{{0}}, 1.0, {0.1, 0.2}, 1e-12), Error);
}

TEST(PropDirac, ConvergesOffTheBoundary) {
  auto const half = make_lattice(GramMatrix{{Rational(1, 4)}});
  auto const inside = check_prop_2_2(half, LatticeVector{{1}}, {1.0, 100.0, 1e4}, 1.0, 1e-12);
  EXPECT_NEAR(inside.back().lhs.estimate, 1.0, 1e-3);
  auto const outside = check_prop_2_2(half, LatticeVector{{3}}, {1.0, 100.0, 1e4}, 1.0, 1e-12);
  EXPECT_NEAR(outside.back().lhs.estimate, 0.0, 1e-3);
  auto const early = check_prop_2_2(half, LatticeVector{{3}}, {0.5, 1.0, 2.0, 4.0}, 1.0, 1e-12);
  for (std::size_t i = 1; i < early.size(); ++i) EXPECT_LT(early[i].lhs.estimate, early[i - 1].lhs.estimate);
  try {
    check_prop_2_2(integers(), LatticeVector{{1}}, {1.0}, 1.0, 1e-12);
    FAIL();
  } catch (Error const& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BoundaryVector);
  }
}

TEST(Poisson, IntegersAtUnitParameters) {
  auto const check = poisson_identity(integers(), 1.0, 1.0, 1e-10);
  EXPECT_NEAR(check.rhs.estimate, 2.0, 1e-9);
  EXPECT_NEAR(check.lhs.estimate, 2.0, 1e-8);
  EXPECT_TRUE(check.verified());
}

TEST(Poisson, GridOnIntegersAndHexagonal) {
  auto const hex = make_lattice(GramMatrix{{2, 1}, {1, 2}});
  for (double t : {0.5, 1.0, 2.0})
    for (double r : {0.5, 1.0}) {
      auto const a = poisson_identity(integers(), t, r, 1e-9);
      EXPECT_LE(std::abs(a.lhs.estimate - a.rhs.estimate), a.lhs.bound + a.rhs.bound) << t << ' ' << r;
      auto const b = poisson_identity(hex, t, r, 1e-8);
      EXPECT_LE(std::abs(b.lhs.estimate - b.rhs.estimate), b.lhs.bound + b.rhs.bound) << t << ' ' << r;
    }
}

TEST(Poisson, LargeTEndpoint) {
  // +-1 lie on the unit sphere and each keep half their mass, so the sum is 2.
  auto const boundary = poisson_identity(integers(), 1e4, 1.0, 1e-8);
  EXPECT_NEAR(boundary.lhs.estimate, 2.0, 1e-3);
  // A radius strictly between 1 and 2 captures three whole points.
  auto const interior = poisson_identity(integers(), 1e4, 1.2, 1e-8);
  EXPECT_NEAR(interior.lhs.estimate, 3.0, 1e-3);
  EXPECT_EQ(count_ball(integers(), Rational(36, 25)), 3u);
}

TEST(Poisson, SmallTCrossEvaluation) {
  auto const check = poisson_identity(integers(), 1e-4, 1.0, 1e-8);
  EXPECT_TRUE(check.verified());
  EXPECT_NEAR(check.rhs.estimate, 2.0, 1e-6);
  EXPECT_THROW(poisson_identity(standard_lattice(3), 1.0, 1.0, 1e-8), Error);
}

TEST(Uncertainty, RowsAndEndpoints) {
  std::vector<double> const grid = {1e-2, 0.1, 1.0, 10.0, 1e4};
  auto const rows = uncertainty_report(integers(), 1.2, grid);
  ASSERT_EQ(rows.size(), grid.size());
  for (auto const& row : rows) {
    EXPECT_EQ(row.count_primal, 3u);
    EXPECT_GE(row.lhs.estimate, 0.0);
    EXPECT_LE(row.lhs.estimate, 3.0 + row.lhs.bound);
  }
  EXPECT_NEAR(rows.back().lhs.estimate, 3.0, 1e-3);
  // For small t the Gaussians spread out and the sum tends to 2r / covol.
  EXPECT_NEAR(rows.front().lhs.estimate, 2.4, 1e-6);
  std::ostringstream csv;
  write_uncertainty_csv(csv, rows);
  std::string const text = csv.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 6);
}
