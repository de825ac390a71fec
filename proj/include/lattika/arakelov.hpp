#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "lattika/bounded_real.hpp"
#include "lattika/enumeration.hpp"
#include "lattika/envelope.hpp"
#include "lattika/error.hpp"
#include "lattika/lattice.hpp"
#include "lattika/rational.hpp"
#include "lattika/theta.hpp"

namespace lattika {

/// Number of roots of unity in Z. Appears only as the 1/w normalisation that
/// relates sums over f in an ideal to sums over principal divisors.
inline constexpr int kRootsOfUnity = 2;

inline bool is_prime(Integer const& p) { return p >= 2 && mpz_probab_prime_p(p.get_mpz_t(), 40) != 0; }

namespace detail {

inline Integer pollard_rho(Integer const& n) {
  if (n % 2 == 0) return 2;
  for (unsigned long c = 1;; ++c) {
    Integer x = 2, y = 2, d = 1;
    auto step = [&](Integer const& v) {
      Integer w = v * v + c;
      mpz_mod(w.get_mpz_t(), w.get_mpz_t(), n.get_mpz_t());
      return w;
    };
    while (d == 1) {
      x = step(x);
      y = step(step(y));
      Integer diff = x - y;
      mpz_abs(diff.get_mpz_t(), diff.get_mpz_t());
      mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
    }
    if (d != n) return d;
  }
}

inline void factor_into(Integer n, std::map<Integer, long>& out) {
  for (unsigned long p = 2; p < 1000 && n > 1; ++p) {
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      ++out[Integer(p)];
      n /= p;
    }
  }
  if (n == 1) return;
  if (is_prime(n)) {
    ++out[n];
    return;
  }
  Integer const d = pollard_rho(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace detail

/// Prime factorisation of |n| for n != 0.
inline std::map<Integer, long> factorize(Integer n) {
  if (n == 0) throw Error(ErrorKind::ZeroInput, "cannot factor 0");
  mpz_abs(n.get_mpz_t(), n.get_mpz_t());
  std::map<Integer, long> out;
  detail::factor_into(n, out);
  return out;
}

/// D = sum n_p [p] + lambda [infinity]. When lambda = log q for a known
/// rational q > 0, `exp_lambda` holds q so the metric e^{-2 lambda} is exact.
class ArakelovDivisor {
 public:
  ArakelovDivisor() = default;
  ArakelovDivisor(std::map<Integer, long> finite, double lambda) : lambda_(lambda) {
    set_finite(std::move(finite));
    if (lambda != 0.0) exp_lambda_.reset();
  }

  /// lambda = log(exp_lambda) with the exponential kept exactly.
  static ArakelovDivisor with_exact_lambda(std::map<Integer, long> finite, Rational const& exp_lambda) {
    if (exp_lambda <= 0) throw Error(ErrorKind::DomainError, "e^lambda must be positive");
    ArakelovDivisor d(std::move(finite), log_of(exp_lambda));
    d.exp_lambda_ = exp_lambda;
    return d;
  }

  std::map<Integer, long> const& finite() const { return finite_; }
  double lambda() const { return lambda_; }
  std::optional<Rational> const& exp_lambda() const { return exp_lambda_; }

  long order_at(Integer const& p) const {
    auto it = finite_.find(p);
    return it == finite_.end() ? 0 : it->second;
  }

  /// The ideal prod p^{-n_p} contains Z iff every n_p >= 0.
  bool ideal_contains_one() const {
    for (auto const& [p, e] : finite_)
      if (e < 0) return false;
    return true;
  }

  friend ArakelovDivisor operator+(ArakelovDivisor const& a, ArakelovDivisor const& b) {
    std::map<Integer, long> sum = a.finite_;
    for (auto const& [p, e] : b.finite_) sum[p] += e;
    ArakelovDivisor d(std::move(sum), a.lambda_ + b.lambda_);
    if (a.exp_lambda_ && b.exp_lambda_) d.exp_lambda_ = *a.exp_lambda_ * *b.exp_lambda_;
    return d;
  }

 private:
  void set_finite(std::map<Integer, long> finite) {
    for (auto const& [p, e] : finite) {
      if (!is_prime(p)) throw Error(ErrorKind::DomainError, "divisor key " + p.get_str() + " is not prime");
      if (e != 0) finite_[p] = e;
    }
  }

  std::map<Integer, long> finite_;
  double lambda_ = 0.0;
  std::optional<Rational> exp_lambda_ = Rational(1);
};

/// deg D = sum n_p log p + lambda.
inline double degree(ArakelovDivisor const& d) {
  double total = d.lambda();
  for (auto const& [p, e] : d.finite()) total += static_cast<double>(e) * log_of(p);
  return total;
}

/// N(D) = e^{deg D}.
inline double norm(ArakelovDivisor const& d) { return std::exp(degree(d)); }

/// div(f) = sum ord_p(f) [p] - log|f| [infinity].
inline ArakelovDivisor principal_divisor(Rational const& f) {
  if (f == 0) throw Error(ErrorKind::ZeroInput, "principal divisor of 0");
  std::map<Integer, long> orders;
  for (auto const& [p, e] : factorize(f.get_num())) orders[p] += e;
  for (auto const& [p, e] : factorize(f.get_den())) orders[p] -= e;
  Rational absolute = abs(f);
  return ArakelovDivisor::with_exact_lambda(std::move(orders), 1 / absolute);
}

/// A [0,1]-valued effectivity built from a positive function f on R_+ with
/// declared supremum c: e(D) = f(|1|_D^2) / c when prod p^{-n_p} contains Z.
struct EffectivityFn {
  enum class Kind { GaussSchoof, General };
  Kind kind = Kind::GaussSchoof;
  std::string name;
  std::function<double(double)> f;
  double c = 1.0;
  MellinEnvelopes envelopes;

  double operator()(double x) const { return f(x) / c; }
};

/// f(x) = exp(-pi x), c = 1.
inline EffectivityFn gauss_schoof_effectivity() {
  EffectivityFn fn;
  fn.kind = EffectivityFn::Kind::GaussSchoof;
  fn.name = "gs";
  fn.f = [](double x) { return std::exp(-std::numbers::pi * x); };
  fn.c = 1.0;
  fn.envelopes.left = {DecayEnvelope::Kind::Exponential, 0.0, 1.0, 0.0, 0.0};
  fn.envelopes.right = {DecayEnvelope::Kind::DoubleExponential, 0.0, 1.0, std::numbers::pi, 0.0};
  return fn;
}

/// General effectivity; positivity and f <= c are spot-checked on a
/// logarithmic grid, smoothness is the caller's responsibility.
inline EffectivityFn general_effectivity(std::string name, std::function<double(double)> f, double c,
                                         MellinEnvelopes envelopes) {
  if (!(c > 0.0)) throw Error(ErrorKind::DomainError, "effectivity supremum must be positive");
  for (int k = -60; k <= 60; ++k) {
    double const x = std::exp(0.25 * k);
    double const y = f(x);
    if (!(y >= 0.0) || y > c * (1.0 + 1e-9)) {
      throw Error(ErrorKind::DomainError, "effectivity function " + name + " violates 0 <= f <= c at x = " +
                                              std::to_string(x));
    }
  }
  EffectivityFn fn;
  fn.kind = EffectivityFn::Kind::General;
  fn.name = std::move(name);
  fn.f = std::move(f);
  fn.c = c;
  fn.envelopes = envelopes;
  return fn;
}

/// f(x) = exp(-pi (x + 1/x)), maximised at x = 1 with c = e^{-2 pi}.
inline EffectivityFn symmetric_exponential_effectivity() {
  MellinEnvelopes env;
  // f(e^u) = exp(-2 pi cosh u) <= exp(-pi e^{|u|}).
  env.left = {DecayEnvelope::Kind::DoubleExponential, 0.0, 1.0, std::numbers::pi, 0.0};
  env.right = env.left;
  return general_effectivity(
      "symexp", [](double x) { return std::exp(-std::numbers::pi * (x + 1.0 / x)); },
      std::exp(-2.0 * std::numbers::pi), env);
}

/// |1|_D^2 = e^{-2 lambda}.
inline double unit_norm_sq(ArakelovDivisor const& d) {
  if (d.exp_lambda()) {
    Rational const q = *d.exp_lambda();
    return Rational(1 / (q * q)).get_d();
  }
  return std::exp(-2.0 * d.lambda());
}

inline double effectivity(ArakelovDivisor const& d, EffectivityFn const& fn) {
  if (!d.ideal_contains_one()) return 0.0;
  return fn(unit_norm_sq(d));
}

/// H^0(O(D)) as a rank-1 lattice: generator g = prod p^{-n_p}, Gram [e^{-2 lambda} g^2].
struct LineBundleLattice {
  Rational generator;
  BoundedReal gram;
  std::optional<Lattice> exact;  // present when e^lambda is known exactly
  RealLattice real;
};

inline LineBundleLattice line_bundle_lattice(ArakelovDivisor const& d) {
  LineBundleLattice result;
  result.generator = 1;
  for (auto const& [p, e] : d.finite()) {
    Integer power;
    mpz_pow_ui(power.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(e < 0 ? -e : e));
    result.generator *= e > 0 ? Rational(1, power) : Rational(power);
  }
  result.generator.canonicalize();
  Rational const g2 = result.generator * result.generator;
  result.real.rank = 1;
  if (d.exp_lambda()) {
    Rational const q = *d.exp_lambda();
    Rational const entry = g2 / (q * q);
    result.exact = make_lattice(GramMatrix{{entry}});
    double const e = entry.get_d();
    result.gram = {e, e * BoundedReal::kUlp};
  } else {
    double const e = std::exp(-2.0 * d.lambda()) * g2.get_d();
    result.gram = {e, 4.0 * e * BoundedReal::kUlp * std::max(1.0, std::abs(2.0 * d.lambda()))};
  }
  result.real.gram = {result.gram.estimate};
  result.real.entry_bound = result.gram.bound;
  return result;
}

/// h0_Ar(O(D)) = log #{k in Z : k^2 gram <= 1}. For an inexact metric a
/// lattice point too close to the unit sphere to decide raises DomainError.
inline ArakelovH0 h0_ar(LineBundleLattice const& bundle, EnumerationOptions const& options = {}) {
  if (bundle.exact) return h0_ar(*bundle.exact, options);
  double const gamma = bundle.gram.estimate;
  auto const kmax = static_cast<std::int64_t>(std::floor(1.0 / std::sqrt(gamma)));
  for (std::int64_t k = std::max<std::int64_t>(kmax - 1, 1); k <= kmax + 1; ++k) {
    double const kk = static_cast<double>(k) * static_cast<double>(k);
    if (std::abs(kk * gamma - 1.0) <= kk * bundle.gram.bound + 4 * BoundedReal::kUlp) {
      throw Error(ErrorKind::DomainError, "lattice point on the unit sphere within metric error");
    }
  }
  std::uint64_t count = 1;
  for (std::int64_t k = 1; static_cast<double>(k) * static_cast<double>(k) * gamma <= 1.0; ++k) count += 2;
  double const value = std::log(static_cast<double>(count));
  return {{value, BoundedReal::kUlp * value}, count};
}

inline BoundedReal h0_theta(LineBundleLattice const& bundle, double eps, EnumerationOptions const& options = {}) {
  if (bundle.exact) return h0_theta(*bundle.exact, eps, options);
  return h0_theta(bundle.real, eps, options);
}

struct ChiReport {
  BoundedReal degree;             // chi = deg
  BoundedReal theta_difference;   // h0_theta(E) - h0_theta(E^dual), the cross-check
  bool consistent() const { return degree.consistent_with(theta_difference); }
};

/// Euler-Poincare characteristic of a lattice and its theta cross-check.
inline ChiReport chi(Lattice const& lattice, double eps, EnumerationOptions const& options = {}) {
  ChiReport report;
  report.degree = arithmetic_degree(lattice);
  report.theta_difference = h0_theta(lattice, eps, options) - h0_theta(dual(lattice), eps, options);
  return report;
}

}  // namespace lattika
