#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "lattika/bounded_real.hpp"
#include "lattika/error.hpp"
#include "lattika/lattice.hpp"
#include "lattika/rational.hpp"

namespace lattika {

struct EnumerationOptions {
  std::uint64_t budget = 10'000'000;  // cap on (estimated and actual) point count
  std::size_t max_rank = 24;
};

/// Lattice points of the closed ball {v : norm_sq(v) <= radius_sq}.
struct BallEnumeration {
  Rational radius_sq;
  std::vector<LatticeVector> vectors;
  std::uint64_t exact_count = 0;
};

namespace detail {

using int128 = __int128;

inline double ball_volume_estimate(std::size_t n, double radius) {
  double const half = 0.5 * static_cast<double>(n);
  return std::exp(half * std::log(std::numbers::pi) + static_cast<double>(n) * std::log(radius) -
                  std::lgamma(half + 1.0));
}

/// Floating LDL^T data for Fincke-Pohst: norm = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2.
inline std::vector<double> pohst_form(std::size_t n, std::vector<double> const& gram) {
  std::vector<double> q(gram);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double s = gram[i * n + j];
      for (std::size_t k = 0; k < i; ++k) s -= q[k * n + k] * q[k * n + i] * q[k * n + j];
      if (j == i) {
        if (!(s > 0.0)) {
          throw Error(ErrorKind::NotPositiveDefinite,
                      "floating Cholesky breakdown; Gram matrix too ill-conditioned");
        }
        q[i * n + i] = s;
      } else {
        q[i * n + j] = s / q[i * n + i];
      }
    }
  }
  return q;
}

/// Decides norm_sq(v) <= radius_sq exactly, using 128-bit integers when they
/// suffice and GMP otherwise.
class ExactBallTest {
 public:
  ExactBallTest(Lattice const& lattice, Rational const& radius_sq)
      : n_(lattice.rank()), lattice_(&lattice) {
    // q_int <= D * a / b  <=>  q_int <= floor(D * a / b) for integer q_int.
    threshold_ = floor_of(radius_sq * Rational(lattice.common_denominator()));
    denominator_d_ = Rational(lattice.common_denominator()).get_d();
    fast_ = threshold_.fits_slong_p();
    for (auto const& m : lattice.integer_gram()) {
      if (!m.fits_slong_p()) fast_ = false;
    }
    if (fast_) {
      threshold128_ = threshold_.get_si();
      for (auto const& m : lattice.integer_gram()) gram64_.push_back(m.get_si());
    }
  }

  /// Returns true when inside; `norm` receives the double value of norm_sq.
  bool inside(std::span<std::int64_t const> x, double& norm) const {
    if (fast_) {
      int128 acc = 0;
      bool overflow = false;
      for (std::size_t i = 0; i < n_ && !overflow; ++i) {
        if (x[i] == 0) continue;
        int128 row = 0;
        for (std::size_t j = 0; j < n_; ++j) {
          int128 term;
          overflow |= __builtin_mul_overflow(static_cast<int128>(gram64_[i * n_ + j]),
                                             static_cast<int128>(x[j]), &term);
          overflow |= __builtin_add_overflow(row, term, &row);
        }
        int128 contribution;
        overflow |= __builtin_mul_overflow(row, static_cast<int128>(x[i]), &contribution);
        overflow |= __builtin_add_overflow(acc, contribution, &acc);
      }
      if (!overflow) {
        norm = static_cast<double>(static_cast<long double>(acc) /
                                   static_cast<long double>(denominator_d_));
        return acc <= threshold128_;
      }
    }
    Integer acc = 0;
    auto const& m = lattice_->integer_gram();
    for (std::size_t i = 0; i < n_; ++i) {
      if (x[i] == 0) continue;
      Integer row = 0;
      for (std::size_t j = 0; j < n_; ++j) row += m[i * n_ + j] * static_cast<long>(x[j]);
      acc += row * static_cast<long>(x[i]);
    }
    norm = make_rational(acc, lattice_->common_denominator()).get_d();
    return acc <= threshold_;
  }

 private:
  std::size_t n_;
  Lattice const* lattice_;
  Integer threshold_;
  double denominator_d_ = 1.0;
  bool fast_ = false;
  int128 threshold128_ = 0;
  std::vector<std::int64_t> gram64_;
};

}  // namespace detail

/// Calls `visit(coords, norm_sq_as_double)` for every lattice point in the
/// closed ball, in lexicographic order from the last coordinate. Floating
/// pruning is relaxed by 1e-9 * radius_sq and every leaf is decided exactly.
inline void for_each_in_ball(
    Lattice const& lattice, Rational const& radius_sq, EnumerationOptions const& options,
    std::function<void(std::span<std::int64_t const>, double)> const& visit) {
  if (radius_sq < 0) {
    throw Error(ErrorKind::RadiusNegative, "radius_sq = " + radius_sq.get_str());
  }
  std::size_t const n = lattice.rank();
  if (n > options.max_rank) {
    throw Error(ErrorKind::RankUnsupported,
                "rank " + std::to_string(n) + " exceeds enumeration cap " +
                    std::to_string(options.max_rank));
  }
  double const r2 = radius_sq.get_d();
  double const covol = std::sqrt(lattice.determinant().get_d());
  double const estimate = detail::ball_volume_estimate(n, std::sqrt(r2)) / covol;
  if (estimate > static_cast<double>(options.budget)) {
    throw Error(ErrorKind::BudgetExceeded,
                "estimated " + std::to_string(estimate) + " points exceeds budget " +
                    std::to_string(options.budget));
  }

  std::vector<double> const q = detail::pohst_form(n, lattice.float_gram());
  detail::ExactBallTest const exact(lattice, radius_sq);
  double const bound = r2 + std::max(1e-9 * r2, 1e-300);

  std::vector<std::int64_t> x(n, 0);
  std::vector<double> partial(n + 1, 0.0);
  std::uint64_t count = 0;
  std::uint64_t nodes = 0;
  std::uint64_t const node_cap = 64 * options.budget + 1'000'000;

  std::function<void(std::size_t)> descend = [&](std::size_t level) {
    double center = 0.0;
    for (std::size_t j = level + 1; j < n; ++j) center -= q[level * n + j] * x[j];
    double const remaining = bound - partial[level + 1];
    if (remaining < 0.0) return;
    double const half = std::sqrt(remaining / q[level * n + level]);
    auto const lo = static_cast<std::int64_t>(std::ceil(center - half));
    auto const hi = static_cast<std::int64_t>(std::floor(center + half));
    for (std::int64_t value = lo; value <= hi; ++value) {
      if (++nodes > node_cap) {
        throw Error(ErrorKind::BudgetExceeded, "enumeration tree exceeds node cap");
      }
      x[level] = value;
      double const offset = static_cast<double>(value) - center;
      partial[level] = partial[level + 1] + q[level * n + level] * offset * offset;
      if (partial[level] > bound) continue;
      if (level == 0) {
        double norm = 0.0;
        if (exact.inside(x, norm)) {
          if (++count > options.budget) {
            throw Error(ErrorKind::BudgetExceeded,
                        "more than " + std::to_string(options.budget) + " points");
          }
          visit(x, norm);
        }
      } else {
        descend(level - 1);
      }
    }
    x[level] = 0;
  };
  descend(n - 1);
}

inline BallEnumeration enumerate_ball(Lattice const& lattice, Rational const& radius_sq,
                                      EnumerationOptions const& options = {}) {
  BallEnumeration result;
  result.radius_sq = radius_sq;
  for_each_in_ball(lattice, radius_sq, options,
                   [&](std::span<std::int64_t const> x, double) {
                     result.vectors.push_back(LatticeVector{{x.begin(), x.end()}});
                   });
  result.exact_count = result.vectors.size();
  return result;
}

inline std::uint64_t count_ball(Lattice const& lattice, Rational const& radius_sq,
                                EnumerationOptions const& options = {}) {
  std::uint64_t count = 0;
  for_each_in_ball(lattice, radius_sq, options,
                   [&](std::span<std::int64_t const>, double) { ++count; });
  return count;
}

struct ArakelovH0 {
  BoundedReal value;  // log of the count
  std::uint64_t count = 0;
};

/// log |E cap B_1| over the closed unit ball.
inline ArakelovH0 h0_ar(Lattice const& lattice, EnumerationOptions const& options = {}) {
  std::uint64_t const count = count_ball(lattice, Rational(1), options);
  double const value = std::log(static_cast<double>(count));
  return {{value, BoundedReal::kUlp * value}, count};
}

struct ShortVectors {
  Rational minimum;
  std::vector<LatticeVector> vectors;
};

/// Exact minimum nonzero norm and every vector attaining it.
inline ShortVectors minimum_and_short_vectors(Lattice const& lattice,
                                              EnumerationOptions const& options = {}) {
  std::size_t const n = lattice.rank();
  Rational radius = lattice.gram()(0, 0);
  for (std::size_t i = 1; i < n; ++i) radius = std::min(radius, Rational(lattice.gram()(i, i)));
  auto const ball = enumerate_ball(lattice, radius, options);
  ShortVectors result;
  result.minimum = radius;
  for (auto const& v : ball.vectors) {
    if (v.is_zero()) continue;
    Rational const norm = norm_sq(lattice, v);
    if (norm < result.minimum) {
      result.minimum = norm;
      result.vectors.clear();
    }
    if (norm == result.minimum) result.vectors.push_back(v);
  }
  return result;
}

}  // namespace lattika
