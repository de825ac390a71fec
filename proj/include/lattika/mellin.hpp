#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "lattika/arakelov.hpp"
#include "lattika/envelope.hpp"
#include "lattika/error.hpp"
#include "lattika/quadrature.hpp"
#include "lattika/special.hpp"

namespace lattika {

namespace detail {

inline constexpr double kMaxTruncation = 400.0;

/// Checks g(+-u) <= envelope on a grid of [threshold, limit].
inline void check_envelope(std::function<double(double)> const& g, DecayEnvelope const& env, int side,
                           double limit, std::string const& where) {
  double const start = std::max(env.threshold, 0.0);
  int const steps = 400;
  for (int k = 0; k <= steps; ++k) {
    double const u = start + (limit - start) * k / steps;
    double const value = g(side * u);
    double const cap = env.at(u);
    if (!(value <= cap * (1.0 + 1e-9) + std::numeric_limits<double>::min())) {
      throw Error(ErrorKind::EnvelopeViolation,
                  where + " envelope violated at u = " + std::to_string(side * u));
    }
  }
}

/// Smallest U >= max(threshold, 1) on a 0.25 grid with env.tail(sigma, U) <= target.
inline double truncation_point(DecayEnvelope const& env, double sigma, double target) {
  for (double U = std::max(env.threshold, 1.0); U <= kMaxTruncation; U += 0.25) {
    if (env.tail(sigma, U) <= target) return U;
  }
  throw Error(ErrorKind::QuadratureFailure, "decay envelope too weak to truncate the integral");
}

inline std::vector<double> unit_breakpoints(double lo, double hi) {
  std::vector<double> points;
  for (double u = std::ceil(lo); u < hi; u += 1.0) points.push_back(u);
  return points;
}

}  // namespace detail

/// M(f)(s) = int_0^inf x^{s-1} f(x) dx for real s, integrated in u = log x.
/// The declared envelopes bound the truncated tails and are spot-checked.
inline QuadratureResult mellin(std::function<double(double)> const& f, double s, double tol,
                               MellinBand const& band, MellinEnvelopes const& envelopes) {
  if (!band.contains(s)) {
    throw Error(ErrorKind::OutOfBand, "s = " + std::to_string(s) + " outside the Mellin band");
  }
  if (!(tol > 0.0)) throw Error(ErrorKind::DomainError, "tolerance must be positive");
  auto const g = [&](double u) { return f(std::exp(u)); };
  double const right = detail::truncation_point(envelopes.right, s, 0.25 * tol);
  double const left = detail::truncation_point(envelopes.left, -s, 0.25 * tol);
  detail::check_envelope(g, envelopes.right, +1, right, "right");
  detail::check_envelope(g, envelopes.left, -1, left, "left");

  auto const integrand = [&](double u) { return std::exp(s * u) * g(u); };
  QuadratureOptions options;
  options.abs_tol = 0.4 * tol;
  auto result = integrate(integrand, -left, right, options, detail::unit_breakpoints(-left, right));
  result.error += envelopes.right.tail(s, right) + envelopes.left.tail(-s, left);
  return result;
}

inline QuadratureResult mellin(EffectivityFn const& fn, double s, double tol) {
  return mellin(fn.f, s, tol, fn.envelopes.band(), fn.envelopes);
}

/// int over Arakelov divisors of e(D) N(D)^{-s}
///   = zeta(s) * int_R (1/c) f(e^{-2 lambda}) e^{-s lambda} d lambda,
/// with the lambda integral done directly in lambda.
inline QuadratureResult divisor_integral(EffectivityFn const& fn, double s, double tol) {
  if (!(s > 1.0)) throw Error(ErrorKind::DomainError, "divisor integral needs s > 1");
  if (!(tol > 0.0)) throw Error(ErrorKind::DomainError, "tolerance must be positive");
  auto const zeta = riemann_zeta(s, 1e-14);
  double const target = 0.25 * tol / zeta.value;

  // lambda -> +inf is x -> 0 (left envelope at |u| = 2 lambda); lambda -> -inf is x -> inf.
  double const sigma = 0.5 * s;
  double const scale = 0.5 / fn.c;
  double const upper = 0.5 * detail::truncation_point(fn.envelopes.left, -sigma, target / scale);
  double const lower = 0.5 * detail::truncation_point(fn.envelopes.right, sigma, target / scale);
  auto const integrand = [&](double lambda) { return fn(std::exp(-2.0 * lambda)) * std::exp(-s * lambda); };
  QuadratureOptions options;
  options.abs_tol = 0.4 * tol / zeta.value;
  std::vector<double> breaks;
  for (double l = -lower + 0.3; l < upper; l += 0.3) breaks.push_back(l);
  auto inner = integrate(integrand, -lower, upper, options, breaks);
  inner.error += scale * (fn.envelopes.left.tail(-sigma, 2.0 * upper) + fn.envelopes.right.tail(sigma, 2.0 * lower));

  QuadratureResult result;
  result.value = zeta.value * inner.value;
  result.error = zeta.value * inner.error + zeta.error * std::abs(inner.value) +
                 2 * std::numeric_limits<double>::epsilon() * std::abs(result.value);
  result.evaluations = inner.evaluations + zeta.evaluations;
  return result;
}

struct TheoremRow {
  double s = 0.0;
  QuadratureResult mellin;
  QuadratureResult divisor_side;  // 2c / zeta(2s) * divisor_integral(2s)
  double difference = 0.0;
  bool pass = false;
};

/// M(f)(s) against (2c / zeta(2s)) * divisor_integral(fn, 2s) with
/// e(D) = f(|1|_D^2) / c. Passes when the two sides agree within tol.
inline std::vector<TheoremRow> verify_theorem_4_1(EffectivityFn const& fn, std::vector<double> const& s_list,
                                                  double tol) {
  std::vector<TheoremRow> rows;
  MellinBand const band = fn.envelopes.band();
  for (double s : s_list) {
    if (!band.contains(s)) throw Error(ErrorKind::OutOfBand, "s = " + std::to_string(s) + " outside the band");
    if (!(2.0 * s > 1.0)) throw Error(ErrorKind::DomainError, "need 2s > 1");
    TheoremRow row;
    row.s = s;
    row.mellin = mellin(fn, s, 0.05 * tol);
    auto const zeta = riemann_zeta(2.0 * s, 1e-14);
    double const factor = 2.0 * fn.c / zeta.value;
    auto const di = divisor_integral(fn, 2.0 * s, 0.05 * tol / factor);
    row.divisor_side.value = factor * di.value;
    row.divisor_side.error = factor * di.error + factor * std::abs(di.value) * zeta.error / zeta.value;
    row.divisor_side.evaluations = di.evaluations;
    row.difference = row.mellin.value - row.divisor_side.value;
    row.pass = std::abs(row.difference) <= tol;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace lattika
