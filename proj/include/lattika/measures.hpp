#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "lattika/bounded_real.hpp"
#include "lattika/enumeration.hpp"
#include "lattika/error.hpp"
#include "lattika/lattice.hpp"
#include "lattika/quadrature.hpp"
#include "lattika/special.hpp"
#include "lattika/theta.hpp"

namespace lattika {

/// Gaussian concentration t and ball radius r. The Gaussian attached to a
/// lattice point v is t^{n/2} exp(-pi t |x - v|^2), which has unit mass in
/// every rank n.
struct MeasureParams {
  double t = 1.0;
  double r = 1.0;
  static constexpr char const* normalization = "t^{n/2}";

  MeasureParams(double t_, double r_) : t(t_), r(r_) {
    if (!(t > 0.0) || !(r > 0.0)) {
      throw Error(ErrorKind::DomainError, "measure parameters need t > 0 and r > 0");
    }
  }
};

struct SweepRow {
  double parameter = 0.0;
  BoundedReal lhs;
  BoundedReal rhs;
  double reference = 0.0;
};

/// theta-measure of v: t^{n/2} exp(-pi t |v|^2).
inline double mu_theta(Lattice const& lattice, LatticeVector const& v, double t) {
  if (!(t > 0.0)) throw Error(ErrorKind::DomainError, "mu_theta needs t > 0");
  double const norm = norm_sq(lattice, v).get_d();
  return std::pow(t, 0.5 * static_cast<double>(lattice.rank())) * std::exp(-std::numbers::pi * t * norm);
}

/// Classical measure: indicator of the closed ball, decided exactly.
inline int mu_classical(Lattice const& lattice, LatticeVector const& v, double r) {
  if (!(r >= 0.0)) throw Error(ErrorKind::DomainError, "mu_classical needs r >= 0");
  Rational const radius = rational_from_double(r);
  return norm_sq(lattice, v) <= radius * radius ? 1 : 0;
}

namespace detail {

/// Regularized lower incomplete gamma P(m/2, y) for a positive integer m,
/// by the upward recursion P(a+1, y) = P(a, y) - y^a e^{-y} / Gamma(a+1).
inline double lower_gamma_half_integer(int m, double y) {
  if (y <= 0.0) return 0.0;
  double a = (m % 2 == 1) ? 0.5 : 1.0;
  double p = (m % 2 == 1) ? std::erf(std::sqrt(y)) : -std::expm1(-y);
  while (2.0 * a < m) {
    p -= std::exp(a * std::log(y) - y - std::lgamma(a + 1.0));
    a += 1.0;
  }
  return std::min(1.0, std::max(0.0, p));
}

}  // namespace detail

/// Mass inside B_r(0) of the unit-mass isotropic Gaussian t^{n/2} e^{-pi t |x - c|^2}
/// with |c| = distance. Rank 1 is closed form; higher rank integrates the
/// first coordinate against the chi-square CDF of the remaining n - 1.
inline BoundedReal gaussian_ball_mass(std::size_t n, double distance, double t, double r, double tol) {
  if (!(t > 0.0) || !(r > 0.0) || !(tol > 0.0)) {
    throw Error(ErrorKind::DomainError, "gaussian_ball_mass needs t, r, tol > 0");
  }
  double const scale = std::sqrt(std::numbers::pi * t);
  if (n == 1) {
    double const value = 0.5 * (std::erf(scale * (r - distance)) + std::erf(scale * (r + distance)));
    return {std::min(1.0, std::max(0.0, value)), 4.0 * std::numeric_limits<double>::epsilon()};
  }
  int const rest = static_cast<int>(n) - 1;
  double const sqrt_t = std::sqrt(t);
  // x = r sin(phi) removes the square-root endpoint behaviour.
  auto integrand = [&](double phi) {
    double const x = r * std::sin(phi);
    double const c = r * std::cos(phi);
    double const density = sqrt_t * std::exp(-std::numbers::pi * t * (x - distance) * (x - distance));
    return density * detail::lower_gamma_half_integer(rest, std::numbers::pi * t * c * c) * c;
  };
  double const sigma = 1.0 / std::sqrt(2.0 * std::numbers::pi * t);
  std::vector<double> breaks;
  for (double k : {-12.0, -6.0, -3.0, -1.0, 0.0, 1.0, 3.0, 6.0, 12.0}) {
    double const x = distance + k * sigma;
    if (x > -r && x < r) breaks.push_back(std::asin(x / r));
  }
  QuadratureOptions options;
  options.abs_tol = tol;
  auto const q = integrate(integrand, -std::numbers::pi / 2, std::numbers::pi / 2, options, breaks);
  return {std::min(1.0, std::max(0.0, q.value)), q.error};
}

/// Quantum measure of v: probability that the Gaussian centred at v lands in B_r.
inline BoundedReal mu_quantum(Lattice const& lattice, LatticeVector const& v, double t, double r,
                              double tol) {
  MeasureParams const params(t, r);
  double const distance = std::sqrt(norm_sq(lattice, v).get_d());
  return gaussian_ball_mass(lattice.rank(), distance, params.t, params.r, tol);
}

/// Rows (r, mu_quantum / vol(B_r), mu_theta) for a decreasing list of radii.
inline std::vector<SweepRow> check_prop_2_1(Lattice const& lattice, LatticeVector const& v, double t,
                                            std::vector<double> const& r_list, double tol) {
  for (std::size_t i = 0; i < r_list.size(); ++i) {
    if (!(r_list[i] > 0.0) || (i > 0 && !(r_list[i] < r_list[i - 1]))) {
      throw Error(ErrorKind::DomainError, "radii must be positive and strictly decreasing");
    }
  }
  double const reference = mu_theta(lattice, v, t);
  std::vector<SweepRow> rows;
  for (double r : r_list) {
    double const volume = ball_volume(lattice.rank(), r);
    auto const mass = mu_quantum(lattice, v, t, r, tol * volume);
    rows.push_back({r, {mass.estimate / volume, mass.bound / volume}, {reference, 0.0}, reference});
  }
  return rows;
}

/// Rows (t, mu_quantum, indicator) for an increasing list of concentrations.
/// Boundary vectors are rejected: there the limit is 1/2.
inline std::vector<SweepRow> check_prop_2_2(Lattice const& lattice, LatticeVector const& v,
                                            std::vector<double> const& t_list, double r, double tol) {
  for (std::size_t i = 0; i < t_list.size(); ++i) {
    if (!(t_list[i] > 0.0) || (i > 0 && !(t_list[i] > t_list[i - 1]))) {
      throw Error(ErrorKind::DomainError, "t values must be positive and strictly increasing");
    }
  }
  Rational const radius = rational_from_double(r);
  if (norm_sq(lattice, v) == radius * radius) {
    throw Error(ErrorKind::BoundaryVector, "|v| = r exactly; the t -> infinity limit is 1/2");
  }
  double const reference = mu_classical(lattice, v, r);
  std::vector<SweepRow> rows;
  for (double t : t_list) {
    rows.push_back({t, mu_quantum(lattice, v, t, r, tol), {reference, 0.0}, reference});
  }
  return rows;
}

/// Fourier transform of the indicator of B_r at a frequency of length xi:
/// sin(2 pi r xi)/(pi xi) in rank 1, r J_1(2 pi r xi)/xi in rank 2 with J_1
/// from its integral representation.
inline BoundedReal ball_indicator_fourier(std::size_t n, double r, double xi, double tol = 1e-15) {
  if (n == 1) {
    if (xi == 0.0) return {2.0 * r, 0.0};
    double const value = std::sin(2.0 * std::numbers::pi * r * xi) / (std::numbers::pi * xi);
    return {value, 8.0 * std::numeric_limits<double>::epsilon() * (2.0 * r + std::abs(value))};
  }
  if (n == 2) {
    if (xi == 0.0) return {std::numbers::pi * r * r, 0.0};
    double const z = 2.0 * std::numbers::pi * r * xi;
    QuadratureOptions options;
    options.abs_tol = tol * std::numbers::pi * xi / r;
    auto const j1 = integrate([z](double theta) { return std::cos(theta - z * std::sin(theta)); }, 0.0,
                              std::numbers::pi, options);
    double const factor = r / (std::numbers::pi * xi);
    return {factor * j1.value, factor * j1.error};
  }
  throw Error(ErrorKind::RankUnsupported, "ball transform implemented for rank 1 and 2");
}

struct PoissonCheck {
  BoundedReal lhs;  // sum_v mu_quantum(v)
  BoundedReal rhs;  // covol^{-1} sum_xi F(1_B)(xi) exp(-pi |xi|^2 / t)
  bool verified() const { return lhs.consistent_with(rhs); }
};

/// Both sides of Poisson summation applied to the smoothed ball indicator
/// f_{t,r} = 1_{B_r} * g_t, whose transform is F(1_{B_r}) * exp(-pi |xi|^2 / t).
inline PoissonCheck poisson_identity(Lattice const& lattice, double t, double r, double eps,
                                     EnumerationOptions const& options = {}) {
  std::size_t const n = lattice.rank();
  if (n > 2) throw Error(ErrorKind::RankUnsupported, "Poisson check supports rank <= 2");
  MeasureParams const params(t, r);
  if (!(eps > 0.0)) throw Error(ErrorKind::DomainError, "eps must be positive");

  PoissonCheck check;
  {
    // For |v| >= R >= 2r, mu_quantum(v) <= exp(-pi t (|v| - r)^2) <= exp(-pi (t/4) |v|^2).
    double const floor = certified_eigenvalue_floor(lattice).get_d();
    double const r2 = std::max(theta_cutoff_radius_sq(n, floor, t / 4.0, eps / 2.0), 4.0 * r * r);
    Rational const radius_sq = rational_from_double(r2);
    std::map<double, std::uint64_t> shells;
    std::uint64_t points = 0;
    for_each_in_ball(lattice, radius_sq, options, [&](std::span<std::int64_t const>, double norm) {
      ++shells[norm];
      ++points;
    });
    double const per_point_tol = eps / (4.0 * static_cast<double>(points));
    std::vector<double> terms;
    double error = theta_tail_bound(n, floor, t / 4.0, radius_sq.get_d());
    for (auto const& [norm, count] : shells) {
      auto const mass = gaussian_ball_mass(n, std::sqrt(norm), t, r, per_point_tol);
      terms.push_back(static_cast<double>(count) * mass.estimate);
      error += static_cast<double>(count) * mass.bound;
    }
    auto const [sum, rounding] = detail::careful_sum(terms);
    check.lhs = {sum, error + rounding};
  }
  {
    Lattice const dual_lattice = dual(lattice);
    BoundedReal const covol = covolume(lattice);
    double const inv_covol = 1.0 / covol.estimate;
    double const volume = ball_volume(n, r);
    double const floor = certified_eigenvalue_floor(dual_lattice).get_d();
    double const r2 = theta_cutoff_radius_sq(n, floor, 1.0 / t, eps / (2.0 * volume * inv_covol));
    Rational const radius_sq = rational_from_double(r2);
    std::map<double, std::uint64_t> shells;
    std::uint64_t points = 0;
    for_each_in_ball(dual_lattice, radius_sq, options, [&](std::span<std::int64_t const>, double norm) {
      ++shells[norm];
      ++points;
    });
    std::vector<double> terms;
    double error = volume * theta_tail_bound(n, floor, 1.0 / t, radius_sq.get_d());
    double const per_point_tol = eps / (8.0 * static_cast<double>(points) * volume);
    for (auto const& [norm, count] : shells) {
      double const xi = std::sqrt(norm);
      auto const transform = ball_indicator_fourier(n, r, xi, per_point_tol);
      double const gauss = std::exp(-std::numbers::pi * norm / t);
      terms.push_back(static_cast<double>(count) * transform.estimate * gauss);
      error += static_cast<double>(count) * (transform.bound * gauss +
                                             volume * gauss * 4.0 * std::numeric_limits<double>::epsilon() *
                                                 (1.0 + std::numbers::pi * norm / t));
    }
    // Terms alternate in sign: sum plainly and charge rounding on magnitudes.
    double sum = 0.0;
    double magnitude = 0.0;
    for (double x : terms) {
      sum += x;
      magnitude += std::abs(x);
    }
    error += static_cast<double>(terms.size() + 1) * std::numeric_limits<double>::epsilon() * magnitude;
    BoundedReal const inverse_covolume = BoundedReal(1.0) / covol;
    check.rhs = inverse_covolume * BoundedReal(sum, error);
  }
  return check;
}

struct UncertaintyRow {
  double t = 0.0;
  BoundedReal lhs;
  BoundedReal rhs;
  std::uint64_t count_primal = 0;  // |E cap B_r|
  double count_dual = 0.0;         // covol^{-1} |E^dual cap B_r|
};

/// Sweeps t to show the two degenerations of the Poisson identity: as
/// t -> infinity the primal side tends to a count of E cap B_r, as t -> 0
/// the dual side is governed by E^dual near the origin.
inline std::vector<UncertaintyRow> uncertainty_report(Lattice const& lattice, double r,
                                                      std::vector<double> const& t_grid, double eps = 1e-10,
                                                      EnumerationOptions const& options = {}) {
  if (lattice.rank() > 2) throw Error(ErrorKind::RankUnsupported, "uncertainty report supports rank <= 2");
  Rational const radius = rational_from_double(r);
  std::uint64_t const primal = count_ball(lattice, radius * radius, options);
  std::uint64_t const dual_count = count_ball(dual(lattice), radius * radius, options);
  double const inv_covol = 1.0 / covolume(lattice).estimate;
  std::vector<UncertaintyRow> rows;
  for (double t : t_grid) {
    auto const check = poisson_identity(lattice, t, r, eps, options);
    rows.push_back({t, check.lhs, check.rhs, primal, inv_covol * static_cast<double>(dual_count)});
  }
  return rows;
}

inline void write_uncertainty_csv(std::ostream& out, std::vector<UncertaintyRow> const& rows) {
  out << "t,lhs,lhs_bound,rhs,rhs_bound,count_primal,count_dual\n";
  out.precision(17);
  for (auto const& row : rows) {
    out << row.t << ',' << row.lhs.estimate << ',' << row.lhs.bound << ',' << row.rhs.estimate << ','
        << row.rhs.bound << ',' << row.count_primal << ',' << row.count_dual << '\n';
  }
}

}  // namespace lattika
