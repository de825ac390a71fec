#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "lattika/error.hpp"
#include "lattika/rational.hpp"

namespace lattika {

/// Dense row-major matrix of exact rationals.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

  /// Square matrix from nested integer rows, handy for literals in tests.
  RationalMatrix(std::initializer_list<std::initializer_list<Rational>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (auto const& row : rows) {
      if (row.size() != cols_) {
        throw Error(ErrorKind::DimensionMismatch, "ragged matrix literal");
      }
      for (auto const& x : row) data_.push_back(x);
    }
  }

  static RationalMatrix identity(std::size_t n) {
    RationalMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  Rational const& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  RationalMatrix transposed() const {
    RationalMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend RationalMatrix operator*(RationalMatrix const& a, RationalMatrix const& b) {
    if (a.cols_ != b.rows_) {
      throw Error(ErrorKind::DimensionMismatch, "matrix product shape");
    }
    RationalMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }

  friend bool operator==(RationalMatrix const& a, RationalMatrix const& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  bool is_symmetric() const {
    if (!square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i + 1; j < cols_; ++j)
        if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
  }

  std::string to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < rows_; ++i) {
      s += i ? ", [" : "[";
      for (std::size_t j = 0; j < cols_; ++j) {
        if (j) s += ", ";
        s += (*this)(i, j).get_str();
      }
      s += "]";
    }
    return s + "]";
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Pivots d_1..d_k of symmetric Gaussian elimination without row exchanges.
/// The k-th leading principal minor equals d_1 * ... * d_k. Elimination stops
/// after the first non-positive pivot, which is still reported.
inline std::vector<Rational> symmetric_pivots(RationalMatrix a) {
  std::size_t const n = a.rows();
  std::vector<Rational> pivots;
  pivots.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    Rational const pivot = a(k, k);
    pivots.push_back(pivot);
    if (pivot <= 0) break;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k) == 0) continue;
      Rational const factor = a(i, k) / pivot;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= factor * a(k, j);
    }
  }
  return pivots;
}

/// True when every leading principal minor is strictly positive.
inline bool is_positive_definite(RationalMatrix const& a) {
  auto const pivots = symmetric_pivots(a);
  if (pivots.size() != a.rows()) return false;
  for (auto const& p : pivots)
    if (p <= 0) return false;
  return true;
}

inline Rational determinant(RationalMatrix a) {
  if (!a.square()) throw Error(ErrorKind::DimensionMismatch, "determinant of non-square");
  std::size_t const n = a.rows();
  Rational det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, k) == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(k, j));
      det = -det;
    }
    det *= a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k) == 0) continue;
      Rational const factor = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= factor * a(k, j);
    }
  }
  return det;
}

/// Exact Gauss-Jordan inverse; throws DomainError on a singular input.
inline RationalMatrix inverse(RationalMatrix a) {
  if (!a.square()) throw Error(ErrorKind::DimensionMismatch, "inverse of non-square");
  std::size_t const n = a.rows();
  RationalMatrix inv = RationalMatrix::identity(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, k) == 0) ++p;
    if (p == n) throw Error(ErrorKind::DomainError, "singular matrix");
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(p, j), a(k, j));
        std::swap(inv(p, j), inv(k, j));
      }
    }
    Rational const scale = 1 / a(k, k);
    for (std::size_t j = 0; j < n; ++j) {
      a(k, j) *= scale;
      inv(k, j) *= scale;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || a(i, k) == 0) continue;
      Rational const factor = a(i, k);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= factor * a(k, j);
        inv(i, j) -= factor * inv(k, j);
      }
    }
  }
  return inv;
}

/// Square matrix with integer entries, used for unimodular transforms.
using IntegerMatrix = std::vector<std::vector<std::int64_t>>;

inline RationalMatrix to_rational(IntegerMatrix const& m) {
  std::size_t const rows = m.size();
  std::size_t const cols = rows ? m[0].size() : 0;
  RationalMatrix r(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) r(i, j) = Rational(static_cast<long>(m[i][j]));
  return r;
}

/// Converts an integral rational matrix; throws NotIntegral otherwise.
inline IntegerMatrix to_integer(RationalMatrix const& m) {
  IntegerMatrix r(m.rows(), std::vector<std::int64_t>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      Rational const& x = m(i, j);
      if (!is_integer(x) || !x.get_num().fits_slong_p()) {
        throw Error(ErrorKind::NotIntegral, "entry " + x.get_str() + " is not a small integer");
      }
      r[i][j] = x.get_num().get_si();
    }
  return r;
}

}  // namespace lattika
