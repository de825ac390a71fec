#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <string>

#include "lattika/error.hpp"

namespace lattika {

/// Arbitrary-precision rational; GMP keeps it canonical (reduced, den > 0)
/// as long as every constructor path goes through make_rational().
using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(Integer const& num, Integer const& den) {
  if (den == 0) {
    throw Error(ErrorKind::DomainError, "zero denominator");
  }
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Rational make_rational(long num, long den = 1) {
  return make_rational(Integer(num), Integer(den));
}

/// Exact conversion of a finite double.
inline Rational rational_from_double(double x) {
  if (!std::isfinite(x)) {
    throw Error(ErrorKind::DomainError, "non-finite value");
  }
  Rational q(x);
  q.canonicalize();
  return q;
}

/// Strict parse of a reduced fraction given as decimal numerator/denominator.
inline Rational parse_reduced(std::string const& num, std::string const& den) {
  Integer n, d;
  if (n.set_str(num, 10) != 0 || d.set_str(den, 10) != 0) {
    throw Error(ErrorKind::ParseError, "not a decimal integer: " + num + "/" + den);
  }
  if (d == 0) {
    throw Error(ErrorKind::ParseError, "zero denominator");
  }
  if (d < 0) {
    throw Error(ErrorKind::ParseError, "negative denominator " + den);
  }
  Integer g;
  mpz_gcd(g.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
  if (g != 1 && !(n == 0 && d == 1)) {
    throw Error(ErrorKind::ParseError, "fraction " + num + "/" + den + " is not reduced");
  }
  return Rational(n, d);
}

/// Parses "a", "a/b" or a finite decimal like "0.25" into an exact rational.
inline Rational parse_rational(std::string const& text) {
  auto const slash = text.find('/');
  if (slash != std::string::npos) {
    Integer n, d;
    if (n.set_str(text.substr(0, slash), 10) != 0 ||
        d.set_str(text.substr(slash + 1), 10) != 0 || d == 0) {
      throw Error(ErrorKind::ParseError, "bad rational '" + text + "'");
    }
    return make_rational(n, d);
  }
  auto const dot = text.find('.');
  std::string digits = text;
  Integer den = 1;
  if (dot != std::string::npos) {
    digits = text.substr(0, dot) + text.substr(dot + 1);
    for (std::size_t i = dot + 1; i < text.size(); ++i) den *= 10;
  }
  Integer n;
  if (digits.empty() || n.set_str(digits, 10) != 0) {
    throw Error(ErrorKind::ParseError, "bad rational '" + text + "'");
  }
  return make_rational(n, den);
}

inline std::string to_string(Rational const& q) { return q.get_str(10); }

inline double to_double(Rational const& q) { return q.get_d(); }

inline bool is_integer(Rational const& q) { return q.get_den() == 1; }

/// floor(q + 1/2) computed exactly.
inline Integer round_nearest(Rational const& q) {
  Rational shifted = q + Rational(1, 2);
  Integer result;
  mpz_fdiv_q(result.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
  return result;
}

inline Integer floor_of(Rational const& q) {
  Integer result;
  mpz_fdiv_q(result.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return result;
}

/// Natural log of a positive integer, accurate for values beyond double range.
inline double log_of(Integer const& z) {
  long exponent = 0;
  double const mantissa = mpz_get_d_2exp(&exponent, z.get_mpz_t());
  return std::log(mantissa) + static_cast<double>(exponent) * std::log(2.0);
}

inline double log_of(Rational const& q) {
  return log_of(Integer(q.get_num())) - log_of(Integer(q.get_den()));
}

inline bool is_perfect_square(Integer const& z) {
  return z >= 0 && mpz_perfect_square_p(z.get_mpz_t()) != 0;
}

inline Integer isqrt(Integer const& z) {
  Integer r;
  mpz_sqrt(r.get_mpz_t(), z.get_mpz_t());
  return r;
}

}  // namespace lattika
