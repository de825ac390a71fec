#pragma once

#include <chrono>
#include <cstdio>
#include <numeric>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lattika/arakelov.hpp"
#include "lattika/enumeration.hpp"
#include "lattika/lattice.hpp"
#include "lattika/measures.hpp"
#include "lattika/mellin.hpp"
#include "lattika/modular_delta.hpp"
#include "lattika/quadform.hpp"
#include "lattika/special.hpp"
#include "lattika/theta.hpp"

namespace lattika {

struct CriterionResult {
  int id = 0;
  std::string name;
  double value = 0.0;       // the measured quantity (usually a residual)
  double bound = 0.0;       // the tolerance it is held to
  double seconds = 0.0;
  double time_limit = 0.0;
  bool pass = false;
  std::string detail;
};

/// Random symmetric matrix with entries a/b, |a| <= height, 1 <= b <= height,
/// redrawn until it is positive definite with smallest eigenvalue >= min_eig.
inline Lattice random_rational_lattice(std::mt19937_64& rng, std::size_t rank, int height, double min_eig = 0.05) {
  std::uniform_int_distribution<int> num(-height, height);
  std::uniform_int_distribution<int> den(1, height);
  for (;;) {
    GramMatrix g(rank, rank);
    for (std::size_t i = 0; i < rank; ++i)
      for (std::size_t j = i; j < rank; ++j) {
        Rational q = make_rational(num(rng), den(rng));
        g(i, j) = q;
        g(j, i) = q;
      }
    if (!is_positive_definite(g)) continue;
    auto lattice = make_lattice(g);
    Eigen::MatrixXd m(rank, rank);
    for (std::size_t i = 0; i < rank; ++i)
      for (std::size_t j = 0; j < rank; ++j) m(i, j) = g(i, j).get_d();
    if (Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues().minCoeff() < min_eig) continue;
    return lattice;
  }
}

/// Random integer matrix with entries in [-bound, bound] and determinant +-1.
inline IntegerMatrix random_unimodular(std::mt19937_64& rng, std::size_t n, int bound) {
  std::uniform_int_distribution<int> entry(-bound, bound);
  for (;;) {
    IntegerMatrix u(n, std::vector<std::int64_t>(n));
    for (auto& row : u)
      for (auto& x : row) x = entry(rng);
    Rational const d = determinant(to_rational(u));
    if (d == 1 || d == -1) return u;
  }
}

namespace detail {

inline CriterionResult timed(int id, std::string name, double time_limit,
                             std::function<void(CriterionResult&)> const& body) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  r.time_limit = time_limit;
  auto const start = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (std::exception const& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (r.seconds >= time_limit) {
    r.pass = false;
    r.detail += (r.detail.empty() ? "" : "; ") + std::string("time limit exceeded");
  }
  return r;
}

inline std::string format_sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

inline GramMatrix int_gram(std::vector<std::vector<long>> const& rows) {
  GramMatrix g(rows.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.size(); ++j) g(i, j) = rows[i][j];
  return g;
}

}  // namespace detail

inline CriterionResult criterion_h0_ar() {
  return detail::timed(1, "h0_ar(Z^n) = log(2n+1), n = 1..4", 1.0, [](CriterionResult& r) {
    r.bound = 0.0;
    r.pass = true;
    for (std::size_t n = 1; n <= 4; ++n) {
      auto const h = h0_ar(standard_lattice(n));
      double const diff = std::abs(h.value.estimate - std::log(2.0 * n + 1.0));
      r.value = std::max(r.value, diff);
      if (h.count != 2 * n + 1 || diff != 0.0) r.pass = false;
    }
  });
}

inline CriterionResult criterion_theta_reference() {
  return detail::timed(2, "theta(Z, 1) = 1.086434811213308 and pi^{1/4}/Gamma(3/4)", 1.0, [](CriterionResult& r) {
    auto const theta = theta_series(standard_lattice(1), 1.0, 1e-12);
    auto const g = gamma(0.75, 1e-12);
    double const closed = std::pow(std::numbers::pi, 0.25) / g.value;
    double const closed_error = closed * g.error / g.value + 4e-16;
    double const d1 = std::abs(theta.value - 1.086434811213308);
    double const d2 = std::abs(theta.value - closed);
    r.value = std::max(d1, d2);
    r.bound = 1e-12;
    r.pass = d1 <= 1e-12 && d2 <= 1e-12 + closed_error && theta.tail + theta.rounding <= 1e-12;
  });
}

inline CriterionResult criterion_riemann_roch(std::size_t samples = 100, std::uint64_t seed = 20240601) {
  return detail::timed(3, "Riemann-Roch defect on random rational lattices", 60.0, [&](CriterionResult& r) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> rank(1, 4);
    r.bound = 1e-9;
    r.pass = true;
    double worst_bound = 0.0;
    for (std::size_t k = 0; k < samples; ++k) {
      auto const lattice = random_rational_lattice(rng, rank(rng), 10);
      auto const check = rr_defect(lattice, 1e-13);
      r.value = std::max(r.value, std::abs(check.defect.estimate));
      worst_bound = std::max(worst_bound, check.defect.bound);
      if (!check.verified() || check.defect.bound > 1e-9) r.pass = false;
    }
    r.detail = "worst certified bound " + detail::format_sci(worst_bound);
  });
}

inline CriterionResult criterion_poisson() {
  return detail::timed(4, "Poisson identity on Z, t = 1, r = 1", 5.0, [](CriterionResult& r) {
    auto const check = poisson_identity(standard_lattice(1), 1.0, 1.0, 1e-10);
    r.value = std::max(std::abs(check.lhs.estimate - 2.0), std::abs(check.rhs.estimate - 2.0));
    r.bound = 1e-8;
    r.pass = r.value <= 1e-8 && check.verified();
  });
}

inline CriterionResult criterion_prop_2_1() {
  return detail::timed(5, "mu_Q / vol(B_r) -> mu_theta, ratio per halving <= 0.7", 10.0, [](CriterionResult& r) {
    auto const lattice = make_lattice(GramMatrix{{1, Rational(1, 3)}, {Rational(1, 3), 1}});
    LatticeVector const v{{1, 0}};
    auto const rows = check_prop_2_1(lattice, v, 1.0, {0.4, 0.2, 0.1, 0.05}, 1e-13);
    r.bound = 0.7;
    r.pass = true;
    std::ostringstream errors;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      double const e = std::abs(rows[i].lhs.estimate - rows[i].reference);
      errors << (i ? "," : "") << e;
      if (i == 0) continue;
      double const e_prev = std::abs(rows[i - 1].lhs.estimate - rows[i - 1].reference);
      double const ratio = e / e_prev;
      r.value = std::max(r.value, ratio);
      if (!(ratio <= 0.7) || rows[i].lhs.bound > 0.1 * e) r.pass = false;
    }
    r.detail = "errors " + errors.str();
  });
}

inline CriterionResult criterion_prop_2_2() {
  return detail::timed(6, "mu_Q at t = 1e4, r = 1 matches the indicator", 5.0, [](CriterionResult& r) {
    // Rank-1 lattice with |k| = k/2, so k = 1 and k = 3 give |v| = 0.5 and 1.5.
    auto const lattice = make_lattice(GramMatrix{{Rational(1, 4)}});
    r.bound = 1e-3;
    r.pass = true;
    for (std::int64_t k : {1, 3}) {
      LatticeVector const v{{k}};
      auto const rows = check_prop_2_2(lattice, v, {1e4}, 1.0, 1e-12);
      double const diff = std::abs(rows[0].lhs.estimate - rows[0].reference) + rows[0].lhs.bound;
      r.value = std::max(r.value, diff);
      if (diff > 1e-3) r.pass = false;
    }
  });
}

inline CriterionResult criterion_theorem_4_1() {
  return detail::timed(7, "Mellin transform vs divisor integral, f = exp(-pi(x+1/x))", 30.0, [](CriterionResult& r) {
    auto const rows = verify_theorem_4_1(symmetric_exponential_effectivity(), {1.0, 1.5, 2.0}, 1e-6);
    r.bound = 1e-6;
    r.pass = rows.size() == 3;
    for (auto const& row : rows) {
      r.value = std::max(r.value, std::abs(row.difference));
      if (!row.pass || row.mellin.error + row.divisor_side.error > 1e-6) r.pass = false;
    }
  });
}

inline CriterionResult criterion_example_mellin() {
  return detail::timed(8, "int x^9 Delta(ix) dx = (2pi)^{-10} Gamma(10) L(10, Delta)", 30.0, [](CriterionResult& r) {
    auto const lhs = mellin(delta_function(), 10.0, 1e-13, delta_envelopes().band(), delta_envelopes());
    auto const l = l_delta(10.0, 1e-12);
    double const rhs = std::pow(2.0 * std::numbers::pi, -10.0) * gamma(10.0).value * l.value;
    r.value = std::abs(lhs.value - rhs) / std::abs(rhs);
    r.bound = 1e-8;
    double const certified = (lhs.error + std::abs(rhs) * l.error / std::abs(l.value)) / std::abs(rhs);
    r.pass = r.value <= 1e-8 && certified <= 1e-8;
    r.detail = "certified relative error " + detail::format_sci(certified);
  });
}

inline CriterionResult criterion_tau() {
  return detail::timed(9, "tau: two expansions, mod 691 congruence, multiplicativity", 10.0, [](CriterionResult& r) {
    auto const a = tau_coefficients(200);
    auto const b = tau_coefficients_by_squaring(200);
    r.pass = a.tau[2] == -24 && a.tau[3] == 252 && b.tau[2] == -24 && b.tau[3] == 252;
    long failures = 0;
    for (std::size_t n = 1; n <= 200; ++n)
      if (a.tau[n] != b.tau[n]) ++failures;
    for (std::size_t n = 1; n <= 100; ++n) {
      Integer sigma = 0;
      for (std::size_t d = 1; d <= n; ++d) {
        if (n % d != 0) continue;
        Integer p;
        mpz_ui_pow_ui(p.get_mpz_t(), d, 11);
        sigma += p;
      }
      Integer diff = a.tau[n] - sigma;
      if (!mpz_divisible_ui_p(diff.get_mpz_t(), 691)) ++failures;
    }
    for (std::size_t m = 2; m <= 200; ++m)
      for (std::size_t n = 2; m * n <= 200; ++n)
        if (std::gcd(m, n) == 1 && a.tau[m * n] != a.tau[m] * a.tau[n]) ++failures;
    r.value = static_cast<double>(failures);
    r.bound = 0.0;
    r.pass = r.pass && failures == 0;
  });
}

inline CriterionResult criterion_classification(std::size_t planted = 50, std::uint64_t seed = 7) {
  return detail::timed(10, "classification and planted isometries", 30.0, [&](CriterionResult& r) {
    std::vector<GramMatrix> const forms = {detail::int_gram({{1, 0}, {0, 1}}), detail::int_gram({{2, 1}, {1, 1}}),
                                           detail::int_gram({{2, 1}, {1, 12}}), detail::int_gram({{4, 1}, {1, 6}})};
    auto const partition = classify_family(forms);
    bool ok = partition.classes == std::vector<std::vector<std::size_t>>{{0, 1}, {2}, {3}} &&
              partition.inconclusive.empty();
    for (auto const& [pair, cert] : partition.certificates)
      ok = ok && verify_certificate(forms[pair.first], forms[pair.second], cert);

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> rank(2, 4);
    std::uniform_int_distribution<int> small(-2, 2);
    std::size_t recovered = 0;
    for (std::size_t k = 0; k < planted; ++k) {
      std::size_t const n = rank(rng);
      IntegerMatrix a(n, std::vector<std::int64_t>(n));
      for (auto& row : a)
        for (auto& x : row) x = small(rng);
      GramMatrix g = congruence(RationalMatrix::identity(n), a);
      for (std::size_t i = 0; i < n; ++i) g(i, i) += 1;
      auto const u = random_unimodular(rng, n, 3);
      GramMatrix const h = congruence(g, u);
      auto const result = is_isometric(g, h);
      if (result.verdict == IsometryVerdict::Isometric && verify_certificate(g, h, *result.certificate)) ++recovered;
    }
    r.value = static_cast<double>(planted - recovered);
    r.bound = 0.0;
    r.pass = ok && recovered == planted;
    r.detail = std::to_string(partition.classes.size()) + " classes; " + std::to_string(recovered) + "/" +
               std::to_string(planted) + " planted isometries recovered";
  });
}

inline CriterionResult criterion_genus() {
  return detail::timed(11, "disc -23 genus holds two classes", 5.0, [](CriterionResult& r) {
    auto const g1 = detail::int_gram({{2, 1}, {1, 12}});
    auto const g2 = detail::int_gram({{4, 1}, {1, 6}});
    bool const symbols = local_symbol_odd(g1, 23) == local_symbol_odd(g2, 23);
    auto const genus = same_genus_partial(g1, g2);
    auto const iso = is_isometric(g1, g2);
    r.pass = symbols && genus.verdict == GenusVerdict::Same && iso.verdict == IsometryVerdict::NotIsometric;
    r.value = r.pass ? 0.0 : 1.0;
    r.bound = 0.0;
    r.detail = "symbols " + std::string(symbols ? "equal" : "differ") + ", genus " + to_string(genus.verdict) +
               ", isometry " + to_string(iso.verdict);
  });
}

inline CriterionResult criterion_analytic() {
  return detail::timed(12, "functional equation, zeta(2), x0 bracket, weight-12 relation", 10.0, [](CriterionResult& r) {
    double worst = 0.0;
    bool ok = true;
    for (double s : {0.3, 0.4}) {
      double const d = std::abs(complete_zeta(s, 1e-9).value - complete_zeta(1.0 - s, 1e-9).value);
      worst = std::max(worst, d / 1e-8);
      ok = ok && d <= 1e-8;
    }
    double const dz = std::abs(riemann_zeta(2.0).value - std::numbers::pi * std::numbers::pi / 6.0);
    worst = std::max(worst, dz / 1e-10);
    ok = ok && dz <= 1e-10;
    auto const x0 = find_x0(1e-9);
    ok = ok && x0.x0 > 0.0 && x0.x0 < 1.0 && x0.hi - x0.lo <= 1e-8 && x0.derivative_lo > 0.0 && x0.derivative_hi < 0.0;
    auto const& table = shared_tau_table(1000);
    for (double x : {0.6, 0.7, 0.8, 0.9}) {
      double const lhs = delta_ix_series(1.0 / x, 1e-16, table).value;
      double const rhs = std::pow(x, 12.0) * delta_ix_series(x, 1e-16, table).value;
      worst = std::max(worst, std::abs(lhs - rhs) / 1e-10);
      ok = ok && std::abs(lhs - rhs) <= 1e-10;
    }
    r.value = worst;
    r.bound = 1.0;
    r.pass = ok;
    r.detail = "x0 = " + std::to_string(x0.x0) + ", value is the worst residual over its tolerance";
  });
}

inline std::vector<CriterionResult> run_acceptance() {
  return {criterion_h0_ar(),          criterion_theta_reference(), criterion_riemann_roch(),
          criterion_poisson(),        criterion_prop_2_1(),        criterion_prop_2_2(),
          criterion_theorem_4_1(),    criterion_example_mellin(),  criterion_tau(),
          criterion_classification(), criterion_genus(),           criterion_analytic()};
}

inline void print_criterion(std::ostream& out, CriterionResult const& r) {
  char line[512];
  std::snprintf(line, sizeof line, "[%s] %2d %-62s value=%.3e bound=%.3e time=%.2fs/%.0fs", r.pass ? "PASS" : "FAIL",
                r.id, r.name.c_str(), r.value, r.bound, r.seconds, r.time_limit);
  out << line;
  if (!r.detail.empty()) out << "  (" << r.detail << ")";
  out << "\n";
}

}  // namespace lattika
