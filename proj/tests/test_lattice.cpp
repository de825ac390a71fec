#include <gtest/gtest.h>

#include <cmath>

#include "lattika/lattice.hpp"

using namespace lattika;

TEST(Lattice, RejectsBadGrams) {
  EXPECT_THROW(make_lattice(GramMatrix{{1, 2}, {3, 4}}), Error);
  try {
    make_lattice(GramMatrix{{1, 2}, {2, 1}});
    FAIL() << "expected NotPositiveDefinite";
  } catch (NotPositiveDefiniteError const& e) {
    EXPECT_EQ(e.index(), 2u);
  }
  EXPECT_THROW(make_lattice(GramMatrix{{-1}}), Error);
}

TEST(Lattice, NormAndInnerProductExact) {
  auto const l = make_lattice(GramMatrix{{1, Rational(1, 2)}, {Rational(1, 2), 1}});
  EXPECT_EQ(norm_sq(l, LatticeVector{{1, -1}}), Rational(1));
  EXPECT_EQ(norm_sq(l, LatticeVector{{1, 1}}), Rational(3));
  EXPECT_EQ(inner_product(l, LatticeVector{{1, 0}}, LatticeVector{{0, 1}}), Rational(1, 2));
  EXPECT_THROW(norm_sq(l, LatticeVector{{1}}), Error);
}

TEST(Lattice, DualHasInverseGram) {
  auto const l = make_lattice(GramMatrix{{2, 1}, {1, 12}});
  auto const d = dual(l);
  EXPECT_EQ(l.gram() * d.gram(), RationalMatrix::identity(2));
  EXPECT_EQ(d.determinant(), Rational(1, 23));
  EXPECT_EQ(dual(d).gram(), l.gram());
}

TEST(Lattice, CovolumeAndDegree) {
  auto const l = make_lattice(GramMatrix{{4}});
  auto const cov = covolume(l);
  EXPECT_EQ(cov.estimate, 2.0);
  EXPECT_EQ(cov.bound, 0.0);
  EXPECT_NEAR(arithmetic_degree(l).estimate, -std::log(2.0), 1e-15);
  EXPECT_EQ(arithmetic_degree(standard_lattice(5)).estimate, 0.0);
  auto const hex = make_lattice(GramMatrix{{1, Rational(1, 2)}, {Rational(1, 2), 1}});
  EXPECT_TRUE(covolume(hex).contains(std::sqrt(3.0) / 2.0));
}

TEST(Lattice, DegreeIsAdditiveUnderDirectSum) {
  auto const a = make_lattice(GramMatrix{{2, 1}, {1, 3}});
  auto const b = make_lattice(GramMatrix{{Rational(1, 3)}});
  auto const s = direct_sum(a, b);
  EXPECT_EQ(s.rank(), 3u);
  EXPECT_NEAR(arithmetic_degree(s).estimate, arithmetic_degree(a).estimate + arithmetic_degree(b).estimate, 1e-14);
}

TEST(Lattice, ScaleMultipliesGram) {
  auto const l = scale(standard_lattice(2), Rational(3, 2));
  EXPECT_EQ(l.gram()(0, 0), Rational(9, 4));
  EXPECT_NEAR(arithmetic_degree(l).estimate, -2.0 * std::log(1.5), 1e-15);
  EXPECT_THROW(scale(l, Rational(0)), Error);
  EXPECT_THROW(scale(l, Rational(-1)), Error);
}

TEST(Lattice, CachedIntegerGram) {
  auto const l = make_lattice(GramMatrix{{Rational(1, 2), Rational(1, 3)}, {Rational(1, 3), 1}});
  EXPECT_EQ(l.common_denominator(), Integer(6));
  EXPECT_EQ(l.integer_gram()[1], Integer(2));
}

TEST(Lattice, ReferenceExamples) {
  auto const hex = make_lattice(GramMatrix{{2, 1}, {1, 2}});
  EXPECT_EQ(norm_sq(hex, LatticeVector{{1, -1}}), Rational(2));
  EXPECT_EQ(norm_sq(make_lattice(GramMatrix{{4}}), LatticeVector{{3}}), Rational(36));
  EXPECT_EQ(norm_sq(standard_lattice(2), LatticeVector{{0, 0}}), Rational(0));
  EXPECT_EQ(dual(hex).gram(), (GramMatrix{{Rational(2, 3), Rational(-1, 3)}, {Rational(-1, 3), Rational(2, 3)}}));
  EXPECT_EQ(dual(make_lattice(GramMatrix{{4}})).gram(), GramMatrix{{Rational(1, 4)}});
  EXPECT_TRUE(covolume(hex).contains(std::sqrt(3.0)));
  EXPECT_EQ(covolume(standard_lattice(3)).estimate, 1.0);
  EXPECT_NEAR(arithmetic_degree(dual(hex)).estimate, -arithmetic_degree(hex).estimate, 1e-15);
  EXPECT_EQ(scale(standard_lattice(1), Rational(2)).gram(), GramMatrix{{4}});
  EXPECT_EQ(direct_sum(standard_lattice(1), make_lattice(GramMatrix{{4}})).gram(), (GramMatrix{{1, 0}, {0, 4}}));
}

TEST(Lattice, CovolumeOfDualIsReciprocal) {
  auto const l = make_lattice(GramMatrix{{3, 1, 0}, {1, 5, 2}, {0, 2, 7}});
  auto const product = covolume(l) * covolume(dual(l));
  EXPECT_TRUE(product.contains(1.0));
}

TEST(Lattice, DegreeUnderScaling) {
  auto const l = make_lattice(GramMatrix{{2, 1}, {1, 3}});
  Rational const c(5, 2);
  double const expected = arithmetic_degree(l).estimate - 2.0 * std::log(2.5);
  EXPECT_NEAR(arithmetic_degree(scale(l, c)).estimate, expected, 1e-14);
}
