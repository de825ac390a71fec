#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "lattika/error.hpp"
#include "lattika/quadrature.hpp"

namespace lattika {

namespace detail {

// Lanczos approximation, g = 7, nine terms; relative accuracy about 1e-15
// on the positive axis.
inline constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

inline double lanczos_gamma(double s) {
  // Gamma(s) = Gamma(s + 1) / s keeps the series argument >= 1.
  if (s < 1.0) return lanczos_gamma(s + 1.0) / s;
  double const z = s - 1.0;
  double sum = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) sum += kLanczos[i] / (z + static_cast<double>(i));
  double const t = z + 7.5;
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, z + 0.5) * std::exp(-t) * sum;
}

// B_2, B_4, ..., B_24.
inline constexpr std::array<double, 12> kBernoulli = {
    1.0 / 6.0,         -1.0 / 30.0,          1.0 / 42.0,           -1.0 / 30.0,
    5.0 / 66.0,        -691.0 / 2730.0,      7.0 / 6.0,            -3617.0 / 510.0,
    43867.0 / 798.0,   -174611.0 / 330.0,    854513.0 / 138.0,     -236364091.0 / 2730.0};

}  // namespace detail

/// Gamma(s) for real s > 0. Integer arguments up to 20 are exact; otherwise
/// the Lanczos series is used with a declared relative error of 2e-15.
/// `tol` is absolute for |Gamma| <= 1 and relative above.
inline QuadratureResult gamma(double s, double tol = 1e-12) {
  if (!(s > 0.0)) {
    throw Error(ErrorKind::DomainError, "gamma requires s > 0, got " + std::to_string(s));
  }
  QuadratureResult r;
  r.evaluations = 1;
  if (s == std::floor(s) && s <= 20.0) {
    double f = 1.0;
    for (int k = 2; k < static_cast<int>(s); ++k) f *= k;
    r.value = f;
    return r;
  }
  r.value = detail::lanczos_gamma(s);
  r.error = 2e-15 * std::abs(r.value);
  if (r.error > tol * std::max(1.0, std::abs(r.value))) {
    throw Error(ErrorKind::QuadratureFailure, "gamma cannot meet tol " + std::to_string(tol));
  }
  return r;
}

/// zeta(s) for s > 1 by Euler-Maclaurin summation with an explicit
/// remainder bound (twice the first omitted term).
inline QuadratureResult zeta_euler_maclaurin(double s, double tol) {
  constexpr int kTerms = 11;
  for (int n = 10; n <= 1 << 20; n *= 2) {
    double const N = n;
    double sum = 0.0;
    for (int k = n - 1; k >= 1; --k) sum += std::pow(static_cast<double>(k), -s);
    sum += std::pow(N, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(N, -s);
    // term_k = B_{2k}/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}
    double rising = s;       // s(s+1)...(s+2k-2)
    double factorial = 2.0;  // (2k)!
    double power = std::pow(N, -s - 1.0);
    double omitted = 0.0;
    for (int k = 1; k <= kTerms; ++k) {
      double const term = detail::kBernoulli[k - 1] / factorial * rising * power;
      if (k == kTerms) {
        omitted = std::abs(term);
      } else {
        sum += term;
      }
      rising *= (s + 2 * k - 1) * (s + 2 * k);
      factorial *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
      power /= N * N;
    }
    double const error = 2.0 * omitted + 8 * std::numeric_limits<double>::epsilon() * sum;
    if (error <= tol) return {sum, error, static_cast<std::uint64_t>(n + kTerms)};
  }
  throw Error(ErrorKind::QuadratureFailure, "Euler-Maclaurin tolerance unreachable");
}

/// eta(s) = sum (-1)^k (k+1)^{-s} accelerated by the Cohen-Rodriguez
/// Villegas-Zagier weights. For s > 0 the terms are moments of a positive
/// measure on [0,1], so |eta - S_n| <= 2 eta / (3 + sqrt 8)^n.
inline QuadratureResult dirichlet_eta(double s, double tol) {
  if (!(s > 0.0)) throw Error(ErrorKind::DomainError, "eta needs s > 0");
  double const rate = 3.0 + std::sqrt(8.0);
  int n = 1;
  while (2.0 * std::pow(rate, -n) > 0.25 * tol && n < 60) ++n;
  double d = std::pow(rate, n);
  d = 0.5 * (d + 1.0 / d);
  double b = -1.0;
  double c = -d;
  double sum = 0.0;
  double magnitude = 0.0;
  for (int k = 0; k < n; ++k) {
    c = b - c;
    double const term = c * std::pow(k + 1.0, -s);
    sum += term;
    magnitude += std::abs(term);
    b = (k + n) * (k - n) * b / ((k + 0.5) * (k + 1.0));
  }
  double const value = sum / d;
  double const error = 2.0 * std::pow(rate, -n) +
                       4 * n * std::numeric_limits<double>::epsilon() * magnitude / d;
  if (error > tol) throw Error(ErrorKind::QuadratureFailure, "eta tolerance unreachable");
  return {value, error, static_cast<std::uint64_t>(n)};
}

/// Riemann zeta on (0,1) and (1,inf).
inline QuadratureResult riemann_zeta(double s, double tol = 1e-13) {
  if (!(s > 0.0)) throw Error(ErrorKind::DomainError, "zeta requires s > 0");
  if (s == 1.0) throw Error(ErrorKind::PoleAtOne, "zeta has a pole at s = 1");
  if (s > 1.0) return zeta_euler_maclaurin(s, tol);
  double const factor = 1.0 - std::pow(2.0, 1.0 - s);  // negative on (0,1)
  auto const eta = dirichlet_eta(s, tol * std::abs(factor) * 0.5);
  double const value = eta.value / factor;
  double const error = eta.error / std::abs(factor) + 4 * std::numeric_limits<double>::epsilon() * std::abs(value);
  if (error > tol) throw Error(ErrorKind::QuadratureFailure, "zeta tolerance unreachable");
  return {value, error, eta.evaluations};
}

/// Z(s) = 2 pi^{-s/2} Gamma(s/2) zeta(s).
inline QuadratureResult complete_zeta(double s, double tol = 1e-12) {
  if (!(s > 0.0)) throw Error(ErrorKind::DomainError, "complete zeta requires s > 0");
  auto const g = gamma(0.5 * s, 1e-12);
  double const prefactor = 2.0 * std::pow(std::numbers::pi, -0.5 * s);
  auto const z = riemann_zeta(s, 0.5 * tol / (prefactor * g.value));
  double const value = prefactor * g.value * z.value;
  double const error = prefactor * (g.error * std::abs(z.value) + g.value * z.error) +
                       8 * std::numeric_limits<double>::epsilon() * std::abs(value);
  if (error > tol) throw Error(ErrorKind::QuadratureFailure, "complete zeta tolerance unreachable");
  return {value, error, g.evaluations + z.evaluations};
}

/// Volume of the n-dimensional Euclidean ball of radius r.
inline double ball_volume(std::size_t n, double r) {
  if (n == 1) return 2.0 * r;
  if (n == 2) return std::numbers::pi * r * r;
  double const half = 0.5 * static_cast<double>(n);
  return std::pow(std::numbers::pi, half) * std::pow(r, static_cast<double>(n)) /
         gamma(half + 1.0).value;
}

}  // namespace lattika
