#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "lattika/enumeration.hpp"
#include "lattika/lattice.hpp"

using namespace lattika;

namespace {

// Brute force over the box |x_i| <= bound, comparing norms exactly.
std::vector<LatticeVector> box_search(Lattice const& l, Rational const& radius_sq, std::int64_t bound) {
  std::size_t const n = l.rank();
  std::vector<LatticeVector> out;
  std::vector<std::int64_t> x(n, -bound);
  for (;;) {
    LatticeVector v{x};
    if (norm_sq(l, v) <= radius_sq) out.push_back(v);
    std::size_t i = 0;
    while (i < n && x[i] == bound) x[i++] = -bound;
    if (i == n) break;
    ++x[i];
  }
  return out;
}

std::int64_t box_bound(Lattice const& l, Rational const& radius_sq) {
  auto const inv = inverse(l.gram());
  double worst = 0.0;
  for (std::size_t i = 0; i < l.rank(); ++i) worst = std::max(worst, inv(i, i).get_d());
  return static_cast<std::int64_t>(std::ceil(std::sqrt(radius_sq.get_d() * worst))) + 1;
}

}  // namespace

TEST(Enumeration, SmallBalls) {
  EXPECT_EQ(count_ball(standard_lattice(1), Rational(1)), 3u);
  EXPECT_EQ(count_ball(standard_lattice(2), Rational(1)), 5u);
  auto const ball = enumerate_ball(standard_lattice(1), Rational(1));
  ASSERT_EQ(ball.vectors.size(), 3u);
}

TEST(Enumeration, HexagonalShellMatchesBoxSearch) {
  auto const hex = make_lattice(GramMatrix{{2, 1}, {1, 2}});
  auto const oracle = box_search(hex, Rational(2), 2);
  EXPECT_EQ(oracle.size(), 7u);
  EXPECT_EQ(count_ball(hex, Rational(2)), 7u);
}

TEST(Enumeration, ClosedBallCountsBoundary) {
  // Gram [1/4]: points k with k^2/4 <= 1, i.e. |k| <= 2.
  auto const h = h0_ar(make_lattice(GramMatrix{{Rational(1, 4)}}));
  EXPECT_EQ(h.count, 5u);
  EXPECT_NEAR(h.value.estimate, std::log(5.0), 1e-15);
  EXPECT_EQ(h0_ar(make_lattice(GramMatrix{{4}})).count, 1u);
  EXPECT_EQ(h0_ar(make_lattice(GramMatrix{{4}})).value.estimate, 0.0);
}

TEST(Enumeration, H0ArOfStandardLattices) {
  for (std::size_t n = 1; n <= 4; ++n) {
    auto const h = h0_ar(standard_lattice(n));
    EXPECT_EQ(h.count, 2 * n + 1);
    EXPECT_EQ(h.value.estimate, std::log(2.0 * n + 1.0));
  }
}

TEST(Enumeration, MinimumAndShortVectors) {
  auto const z2 = minimum_and_short_vectors(standard_lattice(2));
  EXPECT_EQ(z2.minimum, Rational(1));
  EXPECT_EQ(z2.vectors.size(), 4u);
  auto const a = make_lattice(GramMatrix{{2, 1}, {1, 12}});
  auto const b = make_lattice(GramMatrix{{4, 1}, {1, 6}});
  auto brute_min = [](Lattice const& l) {
    Rational best = -1;
    for (auto const& v : box_search(l, Rational(100), 4))
      if (!v.is_zero() && (best < 0 || norm_sq(l, v) < best)) best = norm_sq(l, v);
    return best;
  };
  EXPECT_EQ(minimum_and_short_vectors(a).minimum, brute_min(a));
  EXPECT_EQ(minimum_and_short_vectors(a).minimum, Rational(2));
  EXPECT_EQ(minimum_and_short_vectors(b).minimum, brute_min(b));
  EXPECT_EQ(minimum_and_short_vectors(b).minimum, Rational(4));
}

TEST(Enumeration, AgreesWithBoxSearchOnRandomForms) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> entry(-3, 3);
  std::uniform_int_distribution<int> den(1, 3);
  int checked = 0;
  while (checked < 40) {
    std::size_t const n = 1 + checked % 3;
    GramMatrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        Rational q = make_rational(entry(rng), den(rng));
        if (i == j) q = abs(q) + 1;
        g(i, j) = q;
        g(j, i) = q;
      }
    if (!is_positive_definite(g)) continue;
    auto const l = make_lattice(g);
    Rational const r2 = make_rational(1 + checked % 10, 1);
    auto const oracle = box_search(l, r2, box_bound(l, r2));
    auto const ball = enumerate_ball(l, r2);
    std::set<LatticeVector> a(oracle.begin(), oracle.end());
    std::set<LatticeVector> b(ball.vectors.begin(), ball.vectors.end());
    EXPECT_EQ(a, b) << g.to_string();
    ++checked;
  }
}

TEST(Enumeration, NegationSymmetryAndMonotonicity) {
  auto const l = make_lattice(GramMatrix{{3, 1, 1}, {1, 4, Rational(1, 2)}, {1, Rational(1, 2), 5}});
  auto const ball = enumerate_ball(l, Rational(20));
  std::set<LatticeVector> s(ball.vectors.begin(), ball.vectors.end());
  for (auto const& v : ball.vectors) EXPECT_TRUE(s.count(-v));
  std::uint64_t previous = 0;
  for (int r2 = 0; r2 <= 20; ++r2) {
    auto const c = count_ball(l, Rational(r2));
    EXPECT_GE(c, previous);
    previous = c;
  }
}

TEST(Enumeration, H0ArNonIncreasingUnderScaling) {
  auto const l = make_lattice(GramMatrix{{Rational(1, 9), 0}, {0, Rational(1, 4)}});
  std::uint64_t previous = std::numeric_limits<std::uint64_t>::max();
  for (int k = 2; k <= 8; ++k) {
    auto const c = h0_ar(scale(l, make_rational(k, 2))).count;
    EXPECT_LE(c, previous);
    previous = c;
  }
}

TEST(Enumeration, DeterministicOrder) {
  auto const l = make_lattice(GramMatrix{{2, 1}, {1, 2}});
  auto const a = enumerate_ball(l, Rational(6));
  auto const b = enumerate_ball(l, Rational(6));
  EXPECT_EQ(a.vectors, b.vectors);
}

TEST(Enumeration, ErrorsAndBudget) {
  EXPECT_THROW(enumerate_ball(standard_lattice(2), Rational(-1)), Error);
  EnumerationOptions tight;
  tight.budget = 100;
  try {
    count_ball(standard_lattice(3), Rational(100), tight);
    FAIL() << "expected BudgetExceeded";
  } catch (Error const& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BudgetExceeded);
  }
  try {
    count_ball(standard_lattice(25), Rational(1));
    FAIL() << "expected RankUnsupported";
  } catch (Error const& e) {
    EXPECT_EQ(e.kind(), ErrorKind::RankUnsupported);
  }
}
