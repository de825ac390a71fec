#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "lattika/error.hpp"

namespace lattika {

/// Convergence strip a < s < b of a Mellin transform.
struct MellinBand {
  double a = -std::numeric_limits<double>::infinity();
  double b = std::numeric_limits<double>::infinity();

  MellinBand() = default;
  MellinBand(double a_, double b_) : a(a_), b(b_) {
    if (!(a < b)) throw Error(ErrorKind::DomainError, "Mellin band needs a < b");
  }
  bool contains(double s) const { return a < s && s < b; }
};

/// Caller-declared bound on g(u) = f(e^u) for |u| >= threshold on one side:
///   Exponential:        g(u) <= C exp(-rate |u|)
///   DoubleExponential:  g(u) <= C exp(growth |u|) exp(-rate e^{|u|})
struct DecayEnvelope {
  enum class Kind { Exponential, DoubleExponential };
  Kind kind = Kind::DoubleExponential;
  double threshold = 0.0;
  double constant = 1.0;
  double rate = 1.0;
  double growth = 0.0;

  double at(double abs_u) const {
    if (kind == Kind::Exponential) return constant * std::exp(-rate * abs_u);
    return constant * std::exp(growth * abs_u - rate * std::exp(abs_u));
  }

  /// Bound on int_{U}^{inf} e^{sigma w} g(+-w) dw for U >= threshold, where
  /// sigma is s on the right side and -s on the left.
  double tail(double sigma, double U) const {
    if (kind == Kind::Exponential) {
      double const decay = rate - sigma;
      if (!(decay > 0.0)) return std::numeric_limits<double>::infinity();
      return constant * std::exp(-decay * U) / decay;
    }
    // Substituting w = e^u: C int_W^inf w^{m-1} e^{-rate w} dw with m = sigma + growth.
    double const m = sigma + growth;
    double const W = std::exp(U);
    double const head = constant * std::exp((m - 1.0) * U - rate * W);
    if (m <= 1.0) return head / rate;
    double const slack = rate - (m - 1.0) / W;
    if (!(slack > 0.0)) return std::numeric_limits<double>::infinity();
    return head / slack;
  }

  /// Largest sigma for which the tail integral converges.
  double sigma_limit() const {
    return kind == Kind::Exponential ? rate : std::numeric_limits<double>::infinity();
  }
};

struct MellinEnvelopes {
  DecayEnvelope left;   // u -> -infinity, i.e. x -> 0
  DecayEnvelope right;  // u -> +infinity, i.e. x -> infinity

  MellinBand band() const { return MellinBand(-left.sigma_limit(), right.sigma_limit()); }
};

}  // namespace lattika
