#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "lattika/error.hpp"

namespace lattika {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // >= 0
  std::uint64_t evaluations = 0;
};

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 0.0;
  std::uint64_t max_evaluations = 2'000'000;
};

namespace detail {

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(Panel const& other) const { return error < other.error; }
};

inline Panel kronrod_panel(std::function<double(double)> const& f, double a, double b) {
  double const center = 0.5 * (a + b);
  double const half = 0.5 * (b - a);
  double const fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  double magnitude = std::abs(kronrod);
  for (int j = 0; j < 7; ++j) {
    double const dx = half * kKronrodNodes[j];
    double const f1 = f(center - dx);
    double const f2 = f(center + dx);
    kronrod += kKronrodWeights[j] * (f1 + f2);
    magnitude += kKronrodWeights[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * (f1 + f2);
  }
  double const value = kronrod * half;
  double const error = std::abs((kronrod - gauss) * half) +
                       50.0 * std::numeric_limits<double>::epsilon() * magnitude * std::abs(half);
  if (!std::isfinite(value)) {
    throw Error(ErrorKind::QuadratureFailure, "non-finite integrand on [" +
                                                  std::to_string(a) + ", " + std::to_string(b) + "]");
  }
  return {a, b, value, error};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod quadrature over [a, b] with optional
/// interior breakpoints (kinks, peaks). The error is the summed |K15 - G7|
/// estimate plus a rounding allowance.
inline QuadratureResult integrate(std::function<double(double)> const& f, double a, double b,
                                  QuadratureOptions const& options = {},
                                  std::vector<double> breakpoints = {}) {
  if (!(a <= b)) {
    throw Error(ErrorKind::DomainError, "integration bounds out of order");
  }
  QuadratureResult result;
  if (a == b) return result;
  breakpoints.push_back(a);
  breakpoints.push_back(b);
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());

  std::priority_queue<detail::Panel> panels;
  double total = 0.0;
  double total_error = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    double const lo = std::max(a, breakpoints[i]);
    double const hi = std::min(b, breakpoints[i + 1]);
    if (!(lo < hi)) continue;
    auto const p = detail::kronrod_panel(f, lo, hi);
    result.evaluations += 15;
    total += p.value;
    total_error += p.error;
    panels.push(p);
  }
  auto target = [&] { return std::max(options.abs_tol, options.rel_tol * std::abs(total)); };
  while (total_error > target()) {
    if (result.evaluations + 30 > options.max_evaluations || panels.empty()) {
      throw Error(ErrorKind::QuadratureFailure,
                  "tolerance " + std::to_string(target()) + " not reached (error " +
                      std::to_string(total_error) + ")");
    }
    auto const worst = panels.top();
    panels.pop();
    double const mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b)) {
      throw Error(ErrorKind::QuadratureFailure, "interval cannot be subdivided further");
    }
    auto const left = detail::kronrod_panel(f, worst.a, mid);
    auto const right = detail::kronrod_panel(f, mid, worst.b);
    result.evaluations += 30;
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
  }
  // Re-sum to avoid drift from the running updates.
  total = 0.0;
  total_error = 0.0;
  std::vector<detail::Panel> all;
  while (!panels.empty()) {
    all.push_back(panels.top());
    panels.pop();
  }
  std::sort(all.begin(), all.end(), [](auto const& x, auto const& y) { return x.a < y.a; });
  for (auto const& p : all) {
    total += p.value;
    total_error += p.error;
  }
  result.value = total;
  result.error = total_error;
  return result;
}

}  // namespace lattika
