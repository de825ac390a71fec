#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "lattika/bounded_real.hpp"
#include "lattika/enumeration.hpp"
#include "lattika/error.hpp"
#include "lattika/lattice.hpp"

namespace lattika {

/// Truncated theta series sum_{v} exp(-pi t |v|^2). The exact sum lies in
/// [value - rounding, value + tail + rounding].
struct ThetaValue {
  double t = 1.0;
  double value = 1.0;
  double tail = 0.0;      // certified bound on the omitted terms
  double rounding = 0.0;  // floating-point error of the retained terms
  Rational radius_sq_used;

  BoundedReal enclosure() const { return {value + 0.5 * tail, 0.5 * tail + rounding}; }
};

/// Rational mu > 0 with G - mu*I positive definite, checked exactly; a
/// certified lower bound for the smallest eigenvalue of the Gram matrix.
inline Rational certified_eigenvalue_floor(Lattice const& lattice) {
  std::size_t const n = lattice.rank();
  Eigen::MatrixXd g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g(i, j) = lattice.float_gram()[i * n + j];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g, Eigen::EigenvaluesOnly);
  double guess = solver.eigenvalues().minCoeff() * 0.9;
  if (!(guess > 0.0)) guess = 1e-12;
  for (int attempt = 0; attempt < 200; ++attempt, guess *= 0.5) {
    Rational const mu = rational_from_double(guess);
    GramMatrix shifted = lattice.gram();
    for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= mu;
    if (is_positive_definite(shifted)) return mu;
  }
  throw Error(ErrorKind::NotPositiveDefinite, "could not certify an eigenvalue floor");
}

/// Bound on sum_{x in Z^n, |v|^2 > radius_sq} exp(-pi t |v|^2) for a form
/// with eigenvalues >= eig_floor:
///   exp(-pi t r^2/2) * prod_i sum_k exp(-pi t eig_floor k^2 / 2),
/// where each one-dimensional sum is at most min(1 + sqrt(pi/a), 1 + 2/(e^a - 1)).
inline double theta_tail_bound(std::size_t rank, double eig_floor, double t, double radius_sq) {
  double const a = std::numbers::pi * t * eig_floor / 2.0;
  double const per_axis = std::min(1.0 + std::sqrt(std::numbers::pi / a), 1.0 + 2.0 / std::expm1(a));
  return std::exp(-std::numbers::pi * t * radius_sq / 2.0 +
                  static_cast<double>(rank) * std::log(per_axis));
}

/// Smallest radius_sq for which theta_tail_bound <= eps.
inline double theta_cutoff_radius_sq(std::size_t rank, double eig_floor, double t, double eps) {
  double const a = std::numbers::pi * t * eig_floor / 2.0;
  double const per_axis = std::min(1.0 + std::sqrt(std::numbers::pi / a), 1.0 + 2.0 / std::expm1(a));
  double const r2 =
      2.0 / (std::numbers::pi * t) * (static_cast<double>(rank) * std::log(per_axis) - std::log(eps));
  return std::max(0.0, r2) * (1.0 + 1e-12);
}

namespace detail {

inline void check_theta_args(double t, double eps) {
  if (!(t > 0.0) || !std::isfinite(t)) throw Error(ErrorKind::DomainError, "theta needs t > 0");
  if (!(eps > 0.0)) throw Error(ErrorKind::DomainError, "theta needs eps > 0");
}

/// Sums ascending magnitudes; returns the sum and a rounding allowance.
inline std::pair<double, double> careful_sum(std::vector<double>& terms) {
  std::sort(terms.begin(), terms.end());
  double sum = 0.0;
  for (double x : terms) sum += x;
  return {sum, static_cast<double>(terms.size() + 1) * std::numeric_limits<double>::epsilon() * sum};
}

}  // namespace detail

/// Theta series over all lattice points with norm_sq <= radius_sq, tail
/// certified for everything beyond.
inline ThetaValue theta_series_with_radius(Lattice const& lattice, double t, Rational const& radius_sq,
                                           EnumerationOptions const& options = {}) {
  detail::check_theta_args(t, 1.0);
  double const eig_floor = certified_eigenvalue_floor(lattice).get_d();
  std::vector<double> terms;
  double term_error = 0.0;
  double const eps_mach = std::numeric_limits<double>::epsilon();
  for_each_in_ball(lattice, radius_sq, options, [&](std::span<std::int64_t const>, double norm) {
    double const exponent = std::numbers::pi * t * norm;
    double const term = std::exp(-exponent);
    terms.push_back(term);
    term_error += term * (4.0 * eps_mach * exponent + 2.0 * eps_mach);
  });
  auto const [sum, summation_error] = detail::careful_sum(terms);
  ThetaValue result;
  result.t = t;
  result.value = sum;
  result.rounding = summation_error + term_error;
  result.tail = theta_tail_bound(lattice.rank(), eig_floor, t, radius_sq.get_d());
  result.radius_sq_used = radius_sq;
  return result;
}

/// sum_{v in E} exp(-pi t |v|^2); the tail is cut at eps/2 so tail plus rounding stays near eps. No t^{n/2} prefactor.
inline ThetaValue theta_series(Lattice const& lattice, double t, double eps,
                               EnumerationOptions const& options = {}) {
  detail::check_theta_args(t, eps);
  double const eig_floor = certified_eigenvalue_floor(lattice).get_d();
  double const r2 = theta_cutoff_radius_sq(lattice.rank(), eig_floor, t, 0.5 * eps);
  return theta_series_with_radius(lattice, t, rational_from_double(r2), options);
}

/// Theta series of a lattice with inexact Gram entries; the entry error is
/// folded into `rounding` and into the enumeration margin.
inline ThetaValue theta_series(RealLattice const& lattice, double t, double eps,
                               EnumerationOptions const& options = {}) {
  detail::check_theta_args(t, eps);
  std::size_t const n = lattice.rank;
  if (n == 0 || lattice.gram.size() != n * n) {
    throw Error(ErrorKind::DimensionMismatch, "malformed real Gram matrix");
  }
  Eigen::MatrixXd g(n, n);
  double norm_inf = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      g(i, j) = lattice.gram[i * n + j];
      norm_inf = std::max(norm_inf, std::abs(g(i, j)));
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g, Eigen::EigenvaluesOnly);
  double const eig_floor = solver.eigenvalues().minCoeff() - static_cast<double>(n) * lattice.entry_bound -
                           1e-12 * norm_inf * static_cast<double>(n);
  if (!(eig_floor > 0.0)) {
    throw Error(ErrorKind::NotPositiveDefinite, "real Gram matrix not certifiably positive definite");
  }
  double const r2 = theta_cutoff_radius_sq(n, eig_floor, t, 0.5 * eps);
  // |x|_1^2 <= n |x|^2 <= n r2 / eig_floor bounds the entry-error effect.
  double const margin = lattice.entry_bound * static_cast<double>(n) * r2 / eig_floor + 1e-9 * r2 + 1e-300;
  double const bound = r2 + margin;
  std::vector<double> const q = detail::pohst_form(n, lattice.gram);

  double const eps_mach = std::numeric_limits<double>::epsilon();
  std::vector<double> terms;
  double term_error = 0.0;
  std::vector<std::int64_t> x(n, 0);
  std::vector<double> partial(n + 1, 0.0);
  std::function<void(std::size_t)> descend = [&](std::size_t level) {
    double center = 0.0;
    for (std::size_t j = level + 1; j < n; ++j) center -= q[level * n + j] * x[j];
    double const remaining = bound - partial[level + 1];
    if (remaining < 0.0) return;
    double const half = std::sqrt(remaining / q[level * n + level]);
    auto const lo = static_cast<std::int64_t>(std::ceil(center - half));
    auto const hi = static_cast<std::int64_t>(std::floor(center + half));
    for (std::int64_t value = lo; value <= hi; ++value) {
      x[level] = value;
      double const offset = static_cast<double>(value) - center;
      partial[level] = partial[level + 1] + q[level * n + level] * offset * offset;
      if (partial[level] > bound) continue;
      if (level > 0) {
        descend(level - 1);
        continue;
      }
      double norm = 0.0;
      double magnitude = 0.0;
      double l1 = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        l1 += std::abs(static_cast<double>(x[i]));
        for (std::size_t j = 0; j < n; ++j) {
          double const c = lattice.gram[i * n + j] * static_cast<double>(x[i]) * static_cast<double>(x[j]);
          norm += c;
          magnitude += std::abs(c);
        }
      }
      if (terms.size() >= options.budget) {
        throw Error(ErrorKind::BudgetExceeded, "theta point budget exceeded");
      }
      double const exponent = std::numbers::pi * t * norm;
      double const term = std::exp(-exponent);
      double const norm_error = lattice.entry_bound * l1 * l1 + 4.0 * eps_mach * magnitude * n;
      terms.push_back(term);
      term_error += term * (std::expm1(std::numbers::pi * t * norm_error) + 2.0 * eps_mach);
    }
    x[level] = 0;
  };
  descend(n - 1);
  auto const [sum, summation_error] = detail::careful_sum(terms);
  ThetaValue result;
  result.t = t;
  result.value = sum;
  result.tail = theta_tail_bound(n, eig_floor, t, r2);
  result.rounding = summation_error + term_error;
  result.radius_sq_used = rational_from_double(r2);
  return result;
}

namespace detail {
inline BoundedReal log_theta(ThetaValue const& theta) {
  double const total_error = theta.tail + theta.rounding;
  return {std::log(theta.value), 2.0 * total_error / theta.value +
                                     2.0 * std::numeric_limits<double>::epsilon() *
                                         std::max(1.0, std::abs(std::log(theta.value)))};
}
}  // namespace detail

/// h0_theta = log sum_{v} exp(-pi |v|^2).
inline BoundedReal h0_theta(Lattice const& lattice, double eps, EnumerationOptions const& options = {}) {
  return detail::log_theta(theta_series(lattice, 1.0, eps, options));
}

inline BoundedReal h0_theta(RealLattice const& lattice, double eps, EnumerationOptions const& options = {}) {
  return detail::log_theta(theta_series(lattice, 1.0, eps, options));
}

struct RiemannRochCheck {
  BoundedReal h0_theta;
  BoundedReal h0_theta_dual;
  BoundedReal degree;
  BoundedReal defect;  // h0_theta - h0_theta_dual - degree; zero by Poisson summation

  bool verified() const { return std::abs(defect.estimate) <= defect.bound; }
};

inline RiemannRochCheck rr_defect(Lattice const& lattice, double eps,
                                  EnumerationOptions const& options = {}) {
  RiemannRochCheck check;
  check.h0_theta = h0_theta(lattice, eps, options);
  check.h0_theta_dual = h0_theta(dual(lattice), eps, options);
  check.degree = arithmetic_degree(lattice);
  check.defect = check.h0_theta - check.h0_theta_dual - check.degree;
  return check;
}

}  // namespace lattika
