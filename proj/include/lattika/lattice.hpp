#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lattika/bounded_real.hpp"
#include "lattika/error.hpp"
#include "lattika/matrix.hpp"
#include "lattika/rational.hpp"

namespace lattika {

using GramMatrix = RationalMatrix;

/// Integer coordinates of a lattice vector in the implicit basis.
struct LatticeVector {
  std::vector<std::int64_t> coords;

  std::size_t size() const { return coords.size(); }
  bool is_zero() const {
    for (auto c : coords)
      if (c != 0) return false;
    return true;
  }
  LatticeVector operator-() const {
    LatticeVector v = *this;
    for (auto& c : v.coords) c = -c;
    return v;
  }
  friend auto operator<=>(LatticeVector const&, LatticeVector const&) = default;
};

/// A Euclidean lattice given by its Gram matrix. Immutable; validated on
/// construction by make_lattice().
class Lattice {
 public:
  std::size_t rank() const { return gram_.rows(); }
  GramMatrix const& gram() const { return gram_; }
  std::optional<std::string> const& label() const { return label_; }

  /// Exact determinant of the Gram matrix (> 0).
  Rational const& determinant() const { return det_; }

  /// gram = integer_gram / common_denominator, entrywise.
  Integer const& common_denominator() const { return denominator_; }
  std::vector<Integer> const& integer_gram() const { return integer_gram_; }
  /// Floating copy of the Gram matrix, row-major.
  std::vector<double> const& float_gram() const { return float_gram_; }

  Lattice with_label(std::optional<std::string> label) const {
    Lattice copy = *this;
    copy.label_ = std::move(label);
    return copy;
  }

 private:
  friend Lattice make_lattice(GramMatrix gram, std::optional<std::string> label);

  Lattice(GramMatrix gram, Rational det, std::optional<std::string> label)
      : gram_(std::move(gram)), det_(std::move(det)), label_(std::move(label)) {
    std::size_t const n = gram_.rows();
    denominator_ = 1;
    for (std::size_t i = 0; i < n * n; ++i) {
      Integer const& d = gram_(i / n, i % n).get_den();
      mpz_lcm(denominator_.get_mpz_t(), denominator_.get_mpz_t(), d.get_mpz_t());
    }
    integer_gram_.reserve(n * n);
    float_gram_.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Rational const scaled = gram_(i, j) * Rational(denominator_);
        integer_gram_.push_back(scaled.get_num());
        float_gram_.push_back(gram_(i, j).get_d());
      }
  }

  GramMatrix gram_;
  Rational det_;
  std::optional<std::string> label_;
  Integer denominator_;
  std::vector<Integer> integer_gram_;
  std::vector<double> float_gram_;
};

/// Validates symmetry and positive definiteness (exact leading minors).
inline Lattice make_lattice(GramMatrix gram, std::optional<std::string> label = std::nullopt) {
  if (!gram.square()) {
    throw Error(ErrorKind::DimensionMismatch, "Gram matrix must be square");
  }
  if (gram.rows() == 0) {
    throw Error(ErrorKind::DimensionMismatch, "rank must be at least 1");
  }
  if (!gram.is_symmetric()) {
    throw Error(ErrorKind::NotSymmetric, "Gram matrix " + gram.to_string());
  }
  auto const pivots = symmetric_pivots(gram);
  Rational minor = 1;
  for (std::size_t k = 0; k < pivots.size(); ++k) {
    minor *= pivots[k];
    if (minor <= 0) throw NotPositiveDefiniteError(k + 1, minor.get_str());
  }
  return Lattice(std::move(gram), minor, std::move(label));
}

inline Lattice standard_lattice(std::size_t n) {
  return make_lattice(RationalMatrix::identity(n), "Z^" + std::to_string(n));
}

inline void check_dimension(Lattice const& lattice, LatticeVector const& v) {
  if (v.size() != lattice.rank()) {
    throw Error(ErrorKind::DimensionMismatch,
                "vector of length " + std::to_string(v.size()) + " in rank " +
                    std::to_string(lattice.rank()) + " lattice");
  }
}

/// Exact squared norm v^T G v.
inline Rational norm_sq(Lattice const& lattice, LatticeVector const& v) {
  check_dimension(lattice, v);
  std::size_t const n = lattice.rank();
  Integer acc = 0;
  auto const& m = lattice.integer_gram();
  for (std::size_t i = 0; i < n; ++i) {
    if (v.coords[i] == 0) continue;
    Integer row = 0;
    for (std::size_t j = 0; j < n; ++j) row += m[i * n + j] * static_cast<long>(v.coords[j]);
    acc += row * static_cast<long>(v.coords[i]);
  }
  return make_rational(acc, lattice.common_denominator());
}

/// Exact inner product u^T G v.
inline Rational inner_product(Lattice const& lattice, LatticeVector const& u,
                              LatticeVector const& v) {
  check_dimension(lattice, u);
  check_dimension(lattice, v);
  std::size_t const n = lattice.rank();
  Integer acc = 0;
  auto const& m = lattice.integer_gram();
  for (std::size_t i = 0; i < n; ++i) {
    if (u.coords[i] == 0) continue;
    Integer row = 0;
    for (std::size_t j = 0; j < n; ++j) row += m[i * n + j] * static_cast<long>(v.coords[j]);
    acc += row * static_cast<long>(u.coords[i]);
  }
  return make_rational(acc, lattice.common_denominator());
}

/// The dual lattice: Gram matrix inverted exactly.
inline Lattice dual(Lattice const& lattice) {
  std::optional<std::string> label;
  if (lattice.label()) label = *lattice.label() + "^dual";
  return make_lattice(inverse(lattice.gram()), label);
}

/// sqrt(det G). Exact (zero bound) when det is a square of a rational.
inline BoundedReal covolume(Lattice const& lattice) {
  Rational const& det = lattice.determinant();
  Integer const num = det.get_num();
  Integer const den = det.get_den();
  if (is_perfect_square(num) && is_perfect_square(den)) {
    Rational root(isqrt(num), isqrt(den));
    double const e = root.get_d();
    Rational const back = rational_from_double(e);
    return {e, back == root ? 0.0 : std::abs(e) * BoundedReal::kUlp};
  }
  double const e = std::exp(0.5 * log_of(det));
  return {e, 4 * BoundedReal::kUlp * e};
}

/// deg = -log covol = -(1/2) log det G.
inline BoundedReal arithmetic_degree(Lattice const& lattice) {
  Rational const& det = lattice.determinant();
  if (det == 1) return {0.0, 0.0};
  double const e = -0.5 * log_of(det);
  return {e, 4 * BoundedReal::kUlp * std::max(1.0, std::abs(e))};
}

/// Multiplies all lengths by c, i.e. the Gram matrix by c^2.
inline Lattice scale(Lattice const& lattice, Rational const& c) {
  if (c <= 0) {
    throw Error(ErrorKind::NonPositiveScale, "scale factor " + c.get_str());
  }
  Rational const c2 = c * c;
  GramMatrix g = lattice.gram();
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) g(i, j) *= c2;
  return make_lattice(std::move(g));
}

/// Orthogonal direct sum: block-diagonal Gram matrix.
inline Lattice direct_sum(Lattice const& a, Lattice const& b) {
  std::size_t const n = a.rank();
  std::size_t const m = b.rank();
  GramMatrix g(n + m, n + m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g(i, j) = a.gram()(i, j);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) g(n + i, n + j) = b.gram()(i, j);
  return make_lattice(std::move(g));
}

/// A lattice whose Gram entries are only known to within an absolute error,
/// e.g. the metric e^{-2 lambda} of an Arakelov line bundle.
struct RealLattice {
  std::size_t rank = 0;
  std::vector<double> gram;  // row-major
  double entry_bound = 0.0;  // |true entry - gram entry| <= entry_bound

  static RealLattice from(Lattice const& lattice) {
    RealLattice r;
    r.rank = lattice.rank();
    r.gram = lattice.float_gram();
    double worst = 0.0;
    for (double x : r.gram) worst = std::max(worst, std::abs(x));
    r.entry_bound = worst * BoundedReal::kUlp;
    return r;
  }
};

}  // namespace lattika
