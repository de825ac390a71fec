#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "lattika/error.hpp"

namespace lattika {

/// A real estimate together with an absolute error bound. Propagation is
/// first-order and conservative: every operation also charges a few ulps of
/// its own rounding.
struct BoundedReal {
  double estimate = 0.0;
  double bound = 0.0;

  constexpr BoundedReal() = default;
  constexpr BoundedReal(double e, double b = 0.0) : estimate(e), bound(b) {}

  static constexpr double kUlp = std::numeric_limits<double>::epsilon();

  double lower() const { return estimate - bound; }
  double upper() const { return estimate + bound; }

  bool contains(double x) const { return std::abs(x - estimate) <= bound; }

  /// True when the two enclosures overlap, i.e. the values may be equal.
  bool consistent_with(BoundedReal const& other) const {
    return std::abs(estimate - other.estimate) <= bound + other.bound;
  }

  friend BoundedReal operator+(BoundedReal a, BoundedReal b) {
    double const e = a.estimate + b.estimate;
    return {e, a.bound + b.bound + kUlp * std::abs(e)};
  }
  friend BoundedReal operator-(BoundedReal a, BoundedReal b) {
    double const e = a.estimate - b.estimate;
    return {e, a.bound + b.bound + kUlp * std::abs(e)};
  }
  friend BoundedReal operator-(BoundedReal a) { return {-a.estimate, a.bound}; }
  friend BoundedReal operator*(BoundedReal a, BoundedReal b) {
    double const e = a.estimate * b.estimate;
    return {e, std::abs(a.estimate) * b.bound + std::abs(b.estimate) * a.bound +
                   a.bound * b.bound + kUlp * std::abs(e)};
  }
  friend BoundedReal operator/(BoundedReal a, BoundedReal b) {
    double const denominator = std::abs(b.estimate) - b.bound;
    if (!(denominator > 0.0)) {
      throw Error(ErrorKind::DomainError, "division by an enclosure containing 0");
    }
    double const e = a.estimate / b.estimate;
    return {e, (a.bound + std::abs(e) * b.bound) / denominator +
                   kUlp * std::abs(e)};
  }

  BoundedReal& operator+=(BoundedReal other) { return *this = *this + other; }
  BoundedReal& operator-=(BoundedReal other) { return *this = *this - other; }
  BoundedReal& operator*=(BoundedReal other) { return *this = *this * other; }
};

inline BoundedReal log(BoundedReal x) {
  double const lo = x.estimate - x.bound;
  if (!(lo > 0.0)) {
    throw Error(ErrorKind::DomainError, "log of an enclosure reaching 0");
  }
  double const e = std::log(x.estimate);
  // |log(x+d) - log(x)| <= d / (x - |d|)
  return {e, x.bound / lo + 2 * BoundedReal::kUlp * std::max(1.0, std::abs(e))};
}

inline BoundedReal exp(BoundedReal x) {
  double const e = std::exp(x.estimate);
  return {e, e * std::expm1(x.bound) + 2 * BoundedReal::kUlp * e};
}

inline BoundedReal sqrt(BoundedReal x) {
  double const lo = x.estimate - x.bound;
  if (x.estimate < 0.0) {
    throw Error(ErrorKind::DomainError, "sqrt of a negative estimate");
  }
  double const e = std::sqrt(x.estimate);
  double const b = lo > 0.0 ? x.bound / (std::sqrt(lo) + e) : std::sqrt(x.bound);
  return {e, b + BoundedReal::kUlp * e};
}

inline std::ostream& operator<<(std::ostream& os, BoundedReal const& x) {
  return os << x.estimate << " +/- " << x.bound;
}

}  // namespace lattika
