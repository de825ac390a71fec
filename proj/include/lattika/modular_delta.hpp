#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "lattika/arakelov.hpp"
#include "lattika/error.hpp"
#include "lattika/mellin.hpp"
#include "lattika/rational.hpp"
#include "lattika/special.hpp"

namespace lattika {

using Int128 = __int128;

/// tau(1..n_max); tau[0] is unused and stored as 0.
struct TauTable {
  std::size_t n_max = 0;
  std::vector<Integer> tau;
  std::vector<double> tau_double;

  double operator[](std::size_t n) const { return tau_double[n]; }
};

inline constexpr std::size_t kTauTableLimit = 100'000;

namespace detail {

/// prod_{n>=1} (1 - q^n) mod q^{len} by Euler's pentagonal theorem, as a sparse list.
inline std::vector<std::pair<std::size_t, int>> euler_product_terms(std::size_t len) {
  std::vector<std::pair<std::size_t, int>> terms{{0, 1}};
  for (std::size_t k = 1;; ++k) {
    std::size_t const a = k * (3 * k - 1) / 2;
    if (a >= len) break;
    int const sign = (k % 2 == 1) ? -1 : 1;
    terms.emplace_back(a, sign);
    std::size_t const b = k * (3 * k + 1) / 2;
    if (b < len) terms.emplace_back(b, sign);
  }
  std::sort(terms.begin(), terms.end());
  return terms;
}

inline std::string int128_to_string(Int128 v) {
  if (v == 0) return "0";
  bool const negative = v < 0;
  std::string out;
  while (v != 0) {
    int digit = static_cast<int>(v % 10);
    out.push_back(static_cast<char>('0' + (digit < 0 ? -digit : digit)));
    v /= 10;
  }
  if (negative) out.push_back('-');
  std::reverse(out.begin(), out.end());
  return out;
}

inline TauTable finish_table(std::vector<Integer> coeffs, std::size_t n_max) {
  TauTable table;
  table.n_max = n_max;
  table.tau.assign(n_max + 1, 0);
  table.tau_double.assign(n_max + 1, 0.0);
  // Delta = q * P^24, so tau(n) is the coefficient of q^{n-1} in P^24.
  for (std::size_t n = 1; n <= n_max; ++n) {
    table.tau[n] = coeffs[n - 1];
    table.tau_double[n] = coeffs[n - 1].get_d();
  }
  return table;
}

inline std::vector<Integer> dense_multiply(std::vector<Integer> const& a, std::vector<Integer> const& b,
                                           std::size_t len) {
  std::vector<Integer> c(len, 0);
  for (std::size_t i = 0; i < len && i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; i + j < len && j < b.size(); ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

}  // namespace detail

/// Exact tau(1..n_max) from q * prod (1 - q^n)^24: the product series is
/// expanded once and multiplied into the running power 24 times, in 128-bit
/// integers with overflow checks.
inline TauTable tau_coefficients(std::size_t n_max) {
  if (n_max < 1) throw Error(ErrorKind::DomainError, "n_max must be at least 1");
  if (n_max > kTauTableLimit) {
    throw Error(ErrorKind::BudgetExceeded, "tau table limited to " + std::to_string(kTauTableLimit));
  }
  std::size_t const len = n_max;
  auto const euler = detail::euler_product_terms(len);
  std::vector<Int128> power(len, 0);
  power[0] = 1;
  std::vector<Int128> next(len);
  for (int round = 0; round < 24; ++round) {
    std::fill(next.begin(), next.end(), 0);
    for (auto const& [shift, sign] : euler) {
      for (std::size_t i = 0; i + shift < len; ++i) {
        Int128 const term = power[i];
        Int128& slot = next[i + shift];
        bool const overflow = sign > 0 ? __builtin_add_overflow(slot, term, &slot)
                                       : __builtin_sub_overflow(slot, term, &slot);
        if (overflow) throw Error(ErrorKind::BudgetExceeded, "tau coefficient overflow");
      }
    }
    std::swap(power, next);
  }
  std::vector<Integer> coeffs(len);
  for (std::size_t i = 0; i < len; ++i) coeffs[i] = Integer(detail::int128_to_string(power[i]));
  return detail::finish_table(std::move(coeffs), n_max);
}

/// Second expansion route: prod (1 - q^n) built factor by factor in dense
/// big-integer arithmetic, cubed, then squared three times. Quadratic cost;
/// intended for small n_max.
inline TauTable tau_coefficients_by_squaring(std::size_t n_max) {
  if (n_max < 1) throw Error(ErrorKind::DomainError, "n_max must be at least 1");
  if (n_max > 2000) throw Error(ErrorKind::BudgetExceeded, "squaring route limited to n_max <= 2000");
  std::size_t const len = n_max;
  std::vector<Integer> p(len, 0);
  p[0] = 1;
  for (std::size_t n = 1; n < len; ++n) {
    for (std::size_t i = len - 1; i >= n; --i) p[i] -= p[i - n];
  }
  auto cube = detail::dense_multiply(detail::dense_multiply(p, p, len), p, len);
  for (int k = 0; k < 3; ++k) cube = detail::dense_multiply(cube, cube, len);
  return detail::finish_table(std::move(cube), n_max);
}

/// Checks |tau(n)| <= n^6 on the whole table.
inline bool crude_bound_holds(TauTable const& table) {
  for (std::size_t n = 1; n <= table.n_max; ++n) {
    Integer bound;
    mpz_ui_pow_ui(bound.get_mpz_t(), n, 6);
    if (abs(table.tau[n]) > bound) return false;
  }
  return true;
}

/// Shared table, grown on demand. Superseded tables stay alive so references
/// handed out earlier remain valid.
inline TauTable const& shared_tau_table(std::size_t n_max) {
  static std::mutex mutex;
  static std::vector<std::unique_ptr<TauTable>> tables;
  std::lock_guard<std::mutex> lock(mutex);
  if (tables.empty() || tables.back()->n_max < n_max) {
    std::size_t size = 1000;
    while (size < n_max) size *= 4;
    size = std::min(size, kTauTableLimit);
    if (size < n_max) size = n_max;
    auto fresh = std::make_unique<TauTable>(tau_coefficients(size));
    if (!crude_bound_holds(*fresh)) throw Error(ErrorKind::DomainError, "|tau(n)| <= n^6 fails on table");
    tables.push_back(std::move(fresh));
  }
  return *tables.back();
}

namespace detail {

/// Sum_{n>N} n^k q^n for 0 < q < 1 via the ratio bound, or +inf.
inline double power_geometric_tail(std::size_t N, double q, int k) {
  double const n1 = static_cast<double>(N + 1);
  double const ratio = std::pow((n1 + 1.0) / n1, k) * q;
  if (!(ratio < 1.0)) return std::numeric_limits<double>::infinity();
  return std::pow(n1, k) * std::pow(q, n1) / (1.0 - ratio);
}

/// Sum_{n>=1} c_n tau(n) e^{-2 pi n x} with |c_n| <= n^k, divided by
/// e^{-2 pi x}; tail below `eps` in the same scaled units.
template <class Coefficient>
QuadratureResult scaled_delta_series(double x, double eps, TauTable const& table, int k, Coefficient coefficient) {
  double const q = std::exp(-2.0 * std::numbers::pi * x);
  double sum = 0.0;
  double magnitude = 0.0;
  double qn = 1.0;  // q^{n-1}
  for (std::size_t n = 1;; ++n) {
    if (n > table.n_max) {
      throw Error(ErrorKind::TailUnbounded, "tau table too short for x = " + std::to_string(x));
    }
    double const term = coefficient(n) * table[n] * qn;
    sum += term;
    magnitude += std::abs(term);
    qn *= q;
    double const tail = power_geometric_tail(n, q, 6 + k) / q;
    if (tail <= eps) {
      return {sum, tail + 4 * n * std::numeric_limits<double>::epsilon() * magnitude, n};
    }
  }
}

}  // namespace detail

/// Delta(ix) = sum tau(n) e^{-2 pi n x} summed directly; tail <= eps using |tau(n)| <= n^6.
inline QuadratureResult delta_ix_series(double x, double eps, TauTable const& table) {
  if (!(x > 0.0)) throw Error(ErrorKind::DomainError, "delta_ix needs x > 0");
  double const lead = std::exp(-2.0 * std::numbers::pi * x);
  double const scaled_eps = lead > 0.0 ? eps / lead : std::numeric_limits<double>::infinity();
  auto r = detail::scaled_delta_series(x, scaled_eps, table, 0, [](std::size_t) { return 1.0; });
  return {r.value * lead, r.error * lead, r.evaluations};
}

/// Delta(ix) with error <= eps. Below x = 1/2 the weight-12 relation
/// Delta(ix) = x^{-12} Delta(i/x) replaces the slowly converging series.
inline QuadratureResult delta_ix(double x, double eps, TauTable const& table) {
  if (!(x > 0.0)) throw Error(ErrorKind::DomainError, "delta_ix needs x > 0");
  if (!(eps > 0.0)) throw Error(ErrorKind::DomainError, "eps must be positive");
  if (x >= 0.5) return delta_ix_series(x, eps, table);
  double const y = 1.0 / x;
  // x^{-12} e^{-2 pi y}, formed in log space.
  double const log_factor = -12.0 * std::log(x) - 2.0 * std::numbers::pi * y;
  double const factor = std::exp(log_factor);
  if (factor == 0.0) return {0.0, std::numeric_limits<double>::min(), 0};
  auto r = detail::scaled_delta_series(y, eps / factor, table, 0, [](std::size_t) { return 1.0; });
  return {r.value * factor, r.error * factor + 16 * std::numeric_limits<double>::epsilon() * r.value * factor,
          r.evaluations};
}

inline QuadratureResult delta_ix(double x, double eps = 1e-15) { return delta_ix(x, eps, shared_tau_table(1000)); }

/// Delta(ix) to about 1e-15 relative, as a plain function for the Mellin machinery.
inline std::function<double(double)> delta_function() {
  TauTable const* table = &shared_tau_table(1000);
  return [table](double x) {
    double const magnitude = x >= 0.5 ? std::exp(-2.0 * std::numbers::pi * x)
                                      : std::exp(-12.0 * std::log(x) - 2.0 * std::numbers::pi / x);
    // Values this small sit far inside the envelope tails and read as zero.
    if (magnitude < 1e-290) return 0.0;
    return delta_ix(x, 1e-16 * magnitude, *table).value;
  };
}

/// d/dx Delta(ix) = -2 pi sum n tau(n) e^{-2 pi n x}. Below x = 1/2 the
/// derivative of the weight-12 relation is used:
/// g'(x) = -12 x^{-13} g(1/x) - x^{-14} g'(1/x).
inline QuadratureResult delta_ix_derivative(double x, double eps, TauTable const& table) {
  if (!(x > 0.0)) throw Error(ErrorKind::DomainError, "x must be positive");
  auto direct = [&](double y, double e) {
    double const lead = std::exp(-2.0 * std::numbers::pi * y);
    double const c = 2.0 * std::numbers::pi * lead;
    auto r = detail::scaled_delta_series(y, e / c, table, 1, [](std::size_t n) { return -static_cast<double>(n); });
    return QuadratureResult{r.value * c, r.error * c, r.evaluations};
  };
  if (x >= 0.5) return direct(x, eps);
  double const y = 1.0 / x;
  double const a = 12.0 * std::pow(x, -13.0);
  double const b = std::pow(x, -14.0);
  auto const g = delta_ix_series(y, 0.25 * eps / a, table);
  auto const d = direct(y, 0.25 * eps / b);
  double const value = -a * g.value - b * d.value;
  double const error = a * g.error + b * d.error + 8 * std::numeric_limits<double>::epsilon() * (a * std::abs(g.value) + b * std::abs(d.value));
  return {value, error, g.evaluations + d.evaluations};
}

namespace detail {

/// sum_{n<=N} d(n) = sum_{k<=N} floor(N/k), exactly.
inline double divisor_summatory(std::size_t N) {
  std::uint64_t total = 0;
  for (std::size_t k = 1; k <= N; ++k) total += N / k;
  return static_cast<double>(total);
}

/// Upper bound for sum_{n<=x} d(n), x >= 4, from the hyperbola method with
/// H(m) <= log m + gamma + 1/(2m):  x log x + (2 gamma - 1) x + 3 sqrt(x) + 1.
inline double divisor_summatory_upper(double x) {
  constexpr double kTwoGammaMinusOne = 0.15443134;  // rounded up
  return x * std::log(x) + kTwoGammaMinusOne * x + 3.0 * std::sqrt(x) + 1.0;
}

/// Bound on sum_{n>N} d(n) n^{-sigma}, sigma > 1, by partial summation with the
/// exact value of sum_{n<=N} d(n) and the upper bound above beyond N.
inline double divisor_dirichlet_tail(std::size_t N, double sigma) {
  constexpr double kTwoGammaMinusOne = 0.15443134;
  double const n = static_cast<double>(std::max<std::size_t>(N, 4));
  double const a = sigma - 1.0;
  double const integral = std::pow(n, -a) * (std::log(n) / a + 1.0 / (a * a) + kTwoGammaMinusOne / a) +
                          3.0 * std::pow(n, 0.5 - sigma) / (sigma - 0.5) + std::pow(n, -sigma) / sigma;
  double const bound = sigma * integral - divisor_summatory(static_cast<std::size_t>(n)) * std::pow(n, -sigma);
  return bound * (1.0 + 1e-12);
}

/// Tail bound for sum_{n>N} tau(n) n^{-s}: the smaller of the n^6 integral bound
/// and the bound from |tau(n)| <= d(n) n^{11/2}.
inline double l_delta_tail(std::size_t N, double s) {
  double const crude = std::pow(static_cast<double>(N), 7.0 - s) / (s - 7.0);
  double const sharp = divisor_dirichlet_tail(N, s - 5.5);
  return std::min(crude, sharp);
}

}  // namespace detail

/// L(s, Delta) = sum tau(n) n^{-s} for s > 7.5.
inline QuadratureResult l_delta(double s, double tol) {
  if (!(s > 7.5)) throw Error(ErrorKind::DomainError, "l_delta needs s > 7.5");
  if (!(tol > 0.0)) throw Error(ErrorKind::DomainError, "tolerance must be positive");
  std::size_t N = 64;
  while (detail::l_delta_tail(N, s) > 0.9 * tol) {
    if (N >= kTauTableLimit) {
      throw Error(ErrorKind::TailUnbounded, "l_delta tail exceeds tol within the table limit");
    }
    N = std::min(N * 2, kTauTableLimit);
  }
  auto const& table = shared_tau_table(N);
  double sum = 0.0;
  double compensation = 0.0;
  for (std::size_t n = N; n >= 1; --n) {
    double const term = table[n] * std::pow(static_cast<double>(n), -s);
    double const y = term - compensation;
    double const t = sum + y;
    compensation = (t - sum) - y;
    sum = t;
  }
  double const error = detail::l_delta_tail(N, s) + 8 * std::numeric_limits<double>::epsilon() * std::abs(sum) +
                       static_cast<double>(N) * 1e-30;
  return {sum, error, N};
}

struct MaximumLocation {
  double x0 = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double derivative_lo = 0.0;  // > 0
  double derivative_hi = 0.0;  // < 0
};

/// Maximiser of Delta(ix) on (0.05, 1]: golden-section search, then
/// bisection on the sign of the series derivative to reach width tol.
inline MaximumLocation find_x0(double tol) {
  if (!(tol > 0.0)) throw Error(ErrorKind::DomainError, "tolerance must be positive");
  auto const& table = shared_tau_table(1000);
  auto value = [&](double x) { return delta_ix(x, 1e-18, table).value; };
  auto slope = [&](double x) { return delta_ix_derivative(x, 1e-18, table); };

  double lo = 0.05;
  double hi = 1.0;
  if (!(slope(lo).value > slope(lo).error) || !(slope(hi).value < -slope(hi).error)) {
    throw Error(ErrorKind::NoInteriorMax, "Delta(ix) has no interior maximum on (0.05, 1]");
  }
  double const ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = hi - ratio * (hi - lo);
  double b = lo + ratio * (hi - lo);
  double fa = value(a);
  double fb = value(b);
  while (hi - lo > std::max(tol, 1e-4)) {
    if (fa < fb) {
      lo = a;
      a = b;
      fa = fb;
      b = lo + ratio * (hi - lo);
      fb = value(b);
    } else {
      hi = b;
      b = a;
      fb = fa;
      a = hi - ratio * (hi - lo);
      fa = value(a);
    }
  }
  // Widen until the derivative changes sign with certainty, then bisect.
  while (!(slope(lo).value > slope(lo).error)) lo = std::max(0.05, lo - (hi - lo));
  while (!(slope(hi).value < -slope(hi).error)) hi = std::min(1.0, hi + (hi - lo));
  while (hi - lo > tol) {
    double const mid = 0.5 * (lo + hi);
    auto const d = slope(mid);
    if (std::abs(d.value) <= d.error) break;
    (d.value > 0.0 ? lo : hi) = mid;
  }
  MaximumLocation m;
  m.lo = lo;
  m.hi = hi;
  m.x0 = 0.5 * (lo + hi);
  m.derivative_lo = slope(lo).value;
  m.derivative_hi = slope(hi).value;
  if (!(m.x0 < 1.0)) throw Error(ErrorKind::NoInteriorMax, "maximiser not below 1");
  return m;
}

/// Decay envelopes of Delta(ie^u): Delta(ix) <= e^{-2 pi x} for all x and
/// Delta(ix) <= x^{-12} e^{-2 pi / x}, both from the product formula.
inline MellinEnvelopes delta_envelopes() {
  MellinEnvelopes env;
  env.right = {DecayEnvelope::Kind::DoubleExponential, 0.0, 1.0, 2.0 * std::numbers::pi, 0.0};
  env.left = {DecayEnvelope::Kind::DoubleExponential, 0.0, 1.0, 2.0 * std::numbers::pi, 12.0};
  return env;
}

/// Effectivity built from Delta(i.) normalised by its maximum c = Delta(i x0).
inline EffectivityFn delta_effectivity(double x0) {
  double const c = delta_function()(x0);
  return general_effectivity("delta", delta_function(), c, delta_envelopes());
}

struct ExampleRow {
  double s = 0.0;
  QuadratureResult l_series;    // sum tau(n) n^{-s}
  QuadratureResult l_divisor;   // (2 pi)^s / Gamma(s) * 2c / zeta(2s) * divisor_integral(2s)
  double relative_difference = 0.0;
  bool pass = false;
};

/// L(s, Delta) from the tau series against the Arakelov divisor integral of
/// the Delta effectivity; passes when the relative difference is <= tol.
inline std::vector<ExampleRow> verify_example_4_2(std::vector<double> const& s_list, double tol) {
  std::vector<ExampleRow> rows;
  if (s_list.empty()) return rows;
  auto const x0 = find_x0(1e-10);
  auto const fn = delta_effectivity(x0.x0);
  for (double s : s_list) {
    if (!(s > 7.5)) throw Error(ErrorKind::DomainError, "verify needs s > 7.5");
    ExampleRow row;
    row.s = s;
    row.l_series = l_delta(s, 0.9 * tol);
    auto const g = gamma(s, 1e-12);
    auto const zeta = riemann_zeta(2.0 * s, 1e-13);
    double const prefactor = std::pow(2.0 * std::numbers::pi, s) / g.value * 2.0 * fn.c / zeta.value;
    auto const di = divisor_integral(fn, 2.0 * s, 0.05 * tol * std::abs(row.l_series.value) / prefactor);
    row.l_divisor.value = prefactor * di.value;
    row.l_divisor.error = prefactor * di.error +
                          std::abs(row.l_divisor.value) * (g.error / g.value + zeta.error / zeta.value + 1e-14);
    row.l_divisor.evaluations = di.evaluations;
    row.relative_difference = std::abs(row.l_series.value - row.l_divisor.value) / std::abs(row.l_series.value);
    row.pass = row.relative_difference <= tol;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace lattika
