#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lattika/arakelov.hpp"
#include "lattika/enumeration.hpp"
#include "lattika/error.hpp"
#include "lattika/lattice.hpp"
#include "lattika/matrix.hpp"

namespace lattika {

/// Gram entries are rational by construction.
inline bool is_q_stable(Lattice const&) { return true; }

inline bool is_integral(Lattice const& lattice) {
  auto const& g = lattice.gram();
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j)
      if (!is_integer(g(i, j))) return false;
  return true;
}

/// Unimodular U with U^T G1 U = G2.
struct IsometryCertificate {
  IntegerMatrix U;
};

inline RationalMatrix congruence(RationalMatrix const& g, IntegerMatrix const& u) {
  RationalMatrix const m = to_rational(u);
  return m.transposed() * g * m;
}

inline bool verify_certificate(GramMatrix const& g1, GramMatrix const& g2, IsometryCertificate const& cert) {
  if (cert.U.size() != g1.rows() || g1.rows() != g2.rows()) return false;
  return congruence(g1, cert.U) == g2;
}

struct LllResult {
  GramMatrix gram;
  IsometryCertificate certificate;  // U^T G U = gram
};

namespace detail {

inline void gram_schmidt(GramMatrix const& g, std::vector<std::vector<Rational>>& mu, std::vector<Rational>& b) {
  std::size_t const n = g.rows();
  mu.assign(n, std::vector<Rational>(n, Rational(0)));
  b.assign(n, Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      Rational v = g(i, j);
      for (std::size_t l = 0; l < j; ++l) v -= mu[j][l] * mu[i][l] * b[l];
      mu[i][j] = v / b[j];
    }
    Rational v = g(i, i);
    for (std::size_t l = 0; l < i; ++l) v -= mu[i][l] * mu[i][l] * b[l];
    b[i] = v;
  }
}

/// b_k <- b_k - r b_j on the Gram matrix and the transform.
inline void subtract_basis(GramMatrix& g, IntegerMatrix& u, std::size_t k, std::size_t j, Integer const& r) {
  std::size_t const n = g.rows();
  Rational const q(r);
  for (std::size_t i = 0; i < n; ++i) g(k, i) -= q * g(j, i);
  for (std::size_t i = 0; i < n; ++i) g(i, k) -= q * g(i, j);
  long const step = r.get_si();
  for (std::size_t i = 0; i < n; ++i) u[i][k] -= step * u[i][j];
}

inline void swap_basis(GramMatrix& g, IntegerMatrix& u, std::size_t a, std::size_t b) {
  std::size_t const n = g.rows();
  for (std::size_t i = 0; i < n; ++i) std::swap(g(a, i), g(b, i));
  for (std::size_t i = 0; i < n; ++i) std::swap(g(i, a), g(i, b));
  for (std::size_t i = 0; i < n; ++i) std::swap(u[i][a], u[i][b]);
}

}  // namespace detail

/// LLL reduction (delta = 3/4) of a positive definite Gram matrix in exact
/// rational arithmetic.
inline LllResult lll_reduce(GramMatrix const& gram) {
  auto const lattice = make_lattice(gram);
  std::size_t const n = gram.rows();
  GramMatrix g = gram;
  IntegerMatrix u(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) u[i][i] = 1;
  Rational const delta(3, 4);
  std::vector<std::vector<Rational>> mu;
  std::vector<Rational> b;
  std::size_t k = 1;
  while (k < n) {
    detail::gram_schmidt(g, mu, b);
    for (std::size_t jj = k; jj-- > 0;) {
      Integer const r = round_nearest(mu[k][jj]);
      if (r == 0) continue;
      if (!r.fits_slong_p()) throw Error(ErrorKind::BudgetExceeded, "LLL multiplier out of range");
      detail::subtract_basis(g, u, k, jj, r);
      detail::gram_schmidt(g, mu, b);
    }
    if (b[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * b[k - 1]) {
      ++k;
    } else {
      detail::swap_basis(g, u, k, k - 1);
      k = std::max<std::size_t>(k - 1, 1);
    }
  }
  return {g, {u}};
}

enum class IsometryVerdict { Isometric, NotIsometric, Inconclusive };

inline std::string to_string(IsometryVerdict v) {
  switch (v) {
    case IsometryVerdict::Isometric: return "isometric";
    case IsometryVerdict::NotIsometric: return "not_isometric";
    case IsometryVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct IsometryResult {
  IsometryVerdict verdict = IsometryVerdict::Inconclusive;
  std::optional<IsometryCertificate> certificate;
  std::string reason;
};

struct IsometryOptions {
  std::uint64_t node_budget = 2'000'000;
  EnumerationOptions enumeration;
};

namespace detail {

inline IntegerMatrix integer_inverse(IntegerMatrix const& m) { return to_integer(inverse(to_rational(m))); }

inline IntegerMatrix integer_product(IntegerMatrix const& a, IntegerMatrix const& b) {
  return to_integer(to_rational(a) * to_rational(b));
}

struct BacktrackSearch {
  GramMatrix const& target;  // G1 reduced: the Gram matrix the images must realise
  GramMatrix const& source;  // G2 reduced: the lattice the images live in
  std::vector<std::vector<LatticeVector>> candidates;
  std::vector<std::vector<std::vector<Rational>>> images;  // source * candidate
  std::uint64_t budget;
  std::uint64_t nodes = 0;
  std::vector<std::size_t> choice;

  Rational pair(std::size_t i, std::size_t ci, std::size_t j, std::size_t cj) const {
    auto const& v = candidates[i][ci].coords;
    auto const& w = images[j][cj];
    Rational s = 0;
    for (std::size_t k = 0; k < v.size(); ++k) s += Rational(v[k]) * w[k];
    return s;
  }

  // Returns true on success; throws on budget exhaustion.
  bool extend(std::size_t i) {
    if (i == target.rows()) return true;
    for (std::size_t c = 0; c < candidates[i].size(); ++c) {
      if (++nodes > budget) throw Error(ErrorKind::BudgetExceeded, "isometry search budget exhausted");
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j) ok = pair(i, c, j, choice[j]) == target(i, j);
      if (!ok) continue;
      choice[i] = c;
      if (extend(i + 1)) return true;
    }
    return false;
  }
};

}  // namespace detail

/// Decides whether G1 and G2 are GL_n(Z)-equivalent. Quick invariants reject
/// first; otherwise a backtracking search maps the reduced basis of G1 into
/// vectors of G2 with matching inner products. An exhausted budget gives
/// Inconclusive, never NotIsometric.
inline IsometryResult is_isometric(GramMatrix const& g1, GramMatrix const& g2, IsometryOptions const& options = {}) {
  auto const l1 = make_lattice(g1);
  auto const l2 = make_lattice(g2);
  if (l1.rank() != l2.rank()) throw Error(ErrorKind::DimensionMismatch, "forms of different rank");
  IsometryResult result;
  if (l1.determinant() != l2.determinant()) {
    result.verdict = IsometryVerdict::NotIsometric;
    result.reason = "determinants differ";
    return result;
  }
  try {
    auto const s1 = minimum_and_short_vectors(l1, options.enumeration);
    auto const s2 = minimum_and_short_vectors(l2, options.enumeration);
    if (s1.minimum != s2.minimum) {
      result.verdict = IsometryVerdict::NotIsometric;
      result.reason = "minima differ";
      return result;
    }
    if (s1.vectors.size() != s2.vectors.size()) {
      result.verdict = IsometryVerdict::NotIsometric;
      result.reason = "numbers of minimal vectors differ";
      return result;
    }

    auto const r1 = lll_reduce(g1);
    auto const r2 = lll_reduce(g2);
    std::size_t const n = g1.rows();
    auto const reduced2 = make_lattice(r2.gram);
    Rational radius = 0;
    for (std::size_t i = 0; i < n; ++i) radius = std::max(radius, Rational(r1.gram(i, i)));
    auto const ball = enumerate_ball(reduced2, radius, options.enumeration);

    detail::BacktrackSearch search{r1.gram, r2.gram, {}, {}, options.node_budget, 0, std::vector<std::size_t>(n, 0)};
    search.candidates.resize(n);
    search.images.resize(n);
    for (auto const& v : ball.vectors) {
      if (v.is_zero()) continue;
      Rational const norm = norm_sq(reduced2, v);
      std::vector<Rational> image(n, Rational(0));
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) image[a] += r2.gram(a, b) * Rational(v.coords[b]);
      for (std::size_t i = 0; i < n; ++i) {
        if (norm != r1.gram(i, i)) continue;
        // -U is an isometry whenever U is, so the first image keeps one sign.
        if (i == 0 && v < -v) continue;
        search.candidates[i].push_back(v);
        search.images[i].push_back(image);
      }
    }
    if (!search.extend(0)) {
      result.verdict = IsometryVerdict::NotIsometric;
      result.reason = "exhaustive search found no isometry";
      return result;
    }
    // W maps the reduced basis of G1 into the reduced basis of G2: W^T R2 W = R1.
    IntegerMatrix w(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) w[i][j] = search.candidates[j][search.choice[j]].coords[i];
    // R1 = V1^T G1 V1, R2 = V2^T G2 V2, so U = V1 W^{-1} V2^{-1} gives U^T G1 U = G2.
    auto const& v1 = r1.certificate.U;
    auto const& v2 = r2.certificate.U;
    IntegerMatrix const u =
        detail::integer_product(detail::integer_product(v1, detail::integer_inverse(w)), detail::integer_inverse(v2));
    IsometryCertificate cert{u};
    if (!verify_certificate(g1, g2, cert)) {
      throw Error(ErrorKind::DomainError, "internal error: isometry certificate failed verification");
    }
    result.verdict = IsometryVerdict::Isometric;
    result.certificate = cert;
    result.reason = "certificate verified";
  } catch (Error const& e) {
    if (e.kind() != ErrorKind::BudgetExceeded) throw;
    result.verdict = IsometryVerdict::Inconclusive;
    result.reason = e.what();
  }
  return result;
}

struct ClassPartition {
  std::vector<std::vector<std::size_t>> classes;
  std::map<std::pair<std::size_t, std::size_t>, IsometryCertificate> certificates;  // (rep, member)
  std::vector<std::pair<std::size_t, std::size_t>> inconclusive;
};

/// Splits the forms into GL_n(Z) classes. Each form is tested against the
/// first member of every class so far; inconclusive pairs stay in separate
/// classes and are listed.
inline ClassPartition classify_family(std::vector<GramMatrix> const& forms, IsometryOptions const& options = {}) {
  ClassPartition partition;
  for (std::size_t i = 0; i < forms.size(); ++i) {
    if (i > 0 && forms[i].rows() != forms[0].rows()) {
      throw Error(ErrorKind::DimensionMismatch, "all forms must have the same rank");
    }
    bool placed = false;
    std::vector<std::pair<std::size_t, std::size_t>> unsure;
    for (auto& cls : partition.classes) {
      std::size_t const rep = cls.front();
      auto const r = is_isometric(forms[rep], forms[i], options);
      if (r.verdict == IsometryVerdict::Isometric) {
        cls.push_back(i);
        partition.certificates.emplace(std::make_pair(rep, i), *r.certificate);
        placed = true;
        break;
      }
      if (r.verdict == IsometryVerdict::Inconclusive) unsure.emplace_back(rep, i);
    }
    if (!placed) {
      partition.classes.push_back({i});
      partition.inconclusive.insert(partition.inconclusive.end(), unsure.begin(), unsure.end());
    }
  }
  return partition;
}

struct JordanComponent {
  long valuation = 0;
  std::size_t dimension = 0;
  int unit_class = 1;  // Legendre symbol of the unit part of the determinant

  friend bool operator==(JordanComponent const&, JordanComponent const&) = default;
};

struct OddLocalSymbol {
  Integer p;
  std::vector<JordanComponent> components;

  friend bool operator==(OddLocalSymbol const&, OddLocalSymbol const&) = default;
};

namespace detail {

inline long valuation(Integer const& p, Rational const& q) {
  if (q == 0) return std::numeric_limits<long>::max();
  long v = 0;
  Integer num = q.get_num();
  Integer den = q.get_den();
  while (mpz_divisible_p(num.get_mpz_t(), p.get_mpz_t())) {
    num /= p;
    ++v;
  }
  while (mpz_divisible_p(den.get_mpz_t(), p.get_mpz_t())) {
    den /= p;
    --v;
  }
  return v;
}

/// Legendre symbol of a p-adic unit given as a rational with p-free numerator and denominator.
inline int legendre_of_unit(Rational const& u, Integer const& p) {
  Integer product = u.get_num() * u.get_den();
  mpz_mod(product.get_mpz_t(), product.get_mpz_t(), p.get_mpz_t());
  return mpz_legendre(product.get_mpz_t(), p.get_mpz_t());
}

inline void require_integral_form(GramMatrix const& g) {
  if (!g.is_symmetric()) throw Error(ErrorKind::NotSymmetric, "form must be symmetric");
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j)
      if (!is_integer(g(i, j))) throw Error(ErrorKind::NotIntegral, "form must have integer entries");
}

}  // namespace detail

/// Jordan splitting over Z_p (p odd) by pivoting on an entry of minimal
/// valuation; components ordered by increasing valuation.
inline OddLocalSymbol local_symbol_odd(GramMatrix const& gram, Integer const& p) {
  if (p == 2) throw Error(ErrorKind::EvenPrime, "local_symbol_odd needs an odd prime");
  if (!is_prime(p)) throw Error(ErrorKind::DomainError, p.get_str() + " is not prime");
  detail::require_integral_form(gram);
  if (determinant(gram) == 0) throw Error(ErrorKind::DomainError, "form is degenerate");

  GramMatrix a = gram;
  std::size_t const n = a.rows();
  std::vector<Rational> diagonal;
  for (std::size_t k = 0; k < n; ++k) {
    // Minimal valuation in the trailing block, preferring a diagonal entry.
    long best = std::numeric_limits<long>::max();
    std::size_t bi = k, bj = k;
    for (std::size_t i = k; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        long const v = detail::valuation(p, a(i, j));
        if (v < best || (v == best && i == j && bi != bj)) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    if (bi != bj) {
      // e_i <- e_i + e_j makes the diagonal entry a_ii + 2 a_ij + a_jj of valuation `best`.
      for (std::size_t c = 0; c < n; ++c) a(bi, c) += a(bj, c);
      for (std::size_t r = 0; r < n; ++r) a(r, bi) += a(r, bj);
    }
    if (bi != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(k, c), a(bi, c));
      for (std::size_t r = 0; r < n; ++r) std::swap(a(r, k), a(r, bi));
    }
    Rational const pivot = a(k, k);
    for (std::size_t r = k + 1; r < n; ++r) {
      Rational const factor = a(r, k) / pivot;
      if (factor == 0) continue;
      for (std::size_t c = k; c < n; ++c) a(r, c) -= factor * a(k, c);
    }
    for (std::size_t r = k + 1; r < n; ++r) {
      a(k, r) = 0;
      a(r, k) = 0;
    }
    diagonal.push_back(pivot);
  }

  std::map<long, std::pair<std::size_t, Rational>> grouped;
  for (auto const& d : diagonal) {
    long const v = detail::valuation(p, d);
    Integer pv;
    mpz_pow_ui(pv.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(v));
    auto& slot = grouped.try_emplace(v, 0, Rational(1)).first->second;
    slot.first += 1;
    slot.second *= d / Rational(pv);
  }
  OddLocalSymbol symbol;
  symbol.p = p;
  for (auto const& [v, entry] : grouped) {
    symbol.components.push_back({v, entry.first, detail::legendre_of_unit(entry.second, p)});
  }
  return symbol;
}

enum class GenusVerdict { Same, Different, Undecided };

inline std::string to_string(GenusVerdict v) {
  switch (v) {
    case GenusVerdict::Same: return "same";
    case GenusVerdict::Different: return "different";
    case GenusVerdict::Undecided: return "undecided";
  }
  return "?";
}

namespace detail {

/// u mod 8 for a rational 2-adic unit.
inline unsigned unit_mod8(Rational const& u) {
  Integer num = u.get_num() * u.get_den();  // den^{-1} = den mod 8 for odd den
  mpz_fdiv_r_ui(num.get_mpz_t(), num.get_mpz_t(), 8);
  return static_cast<unsigned>(num.get_ui());
}

/// Hilbert symbol (a, b)_2 for nonzero rationals.
inline int hilbert_symbol_2(Rational const& a, Rational const& b) {
  Integer const two = 2;
  long const alpha = valuation(two, a);
  long const beta = valuation(two, b);
  auto unit = [&](Rational const& x, long v) {
    Rational u = x;
    if (v > 0) mpq_div_2exp(u.get_mpq_t(), u.get_mpq_t(), static_cast<unsigned long>(v));
    if (v < 0) mpq_mul_2exp(u.get_mpq_t(), u.get_mpq_t(), static_cast<unsigned long>(-v));
    return unit_mod8(u);
  };
  unsigned const u = unit(a, alpha);
  unsigned const v = unit(b, beta);
  auto epsilon = [](unsigned x) { return ((x - 1) / 2) % 2; };
  auto omega = [](unsigned x) { return ((x * x - 1) / 8) % 2; };
  long const exponent = static_cast<long>(epsilon(u) * epsilon(v)) + ((alpha % 2 + 2) % 2) * omega(v) +
                        ((beta % 2 + 2) % 2) * omega(u);
  return exponent % 2 == 0 ? 1 : -1;
}

/// Hasse invariant at 2 of the rational form with the given diagonalisation.
inline int hasse_invariant_2(std::vector<Rational> const& diagonal) {
  int h = 1;
  for (std::size_t i = 0; i < diagonal.size(); ++i)
    for (std::size_t j = i + 1; j < diagonal.size(); ++j) h *= hilbert_symbol_2(diagonal[i], diagonal[j]);
  return h;
}

inline bool is_even_form(GramMatrix const& g) {
  for (std::size_t i = 0; i < g.rows(); ++i)
    if (mpz_odd_p(g(i, i).get_num_mpz_t())) return false;
  return true;
}

}  // namespace detail

struct GenusComparison {
  GenusVerdict verdict = GenusVerdict::Undecided;
  std::string reason;
  std::vector<Integer> odd_primes;  // odd primes dividing det that were compared
};

/// Partial genus comparison of two positive definite integral forms. Odd
/// primes dividing det are compared by Jordan symbols. With an odd
/// determinant both forms are unimodular at 2, where the type (even or odd)
/// and the Hasse invariant finish the comparison; an even determinant is
/// left undecided.
inline GenusComparison same_genus_partial(GramMatrix const& g1, GramMatrix const& g2) {
  detail::require_integral_form(g1);
  detail::require_integral_form(g2);
  GenusComparison out;
  if (g1.rows() != g2.rows()) {
    out.verdict = GenusVerdict::Different;
    out.reason = "ranks differ";
    return out;
  }
  Rational const d1 = determinant(g1);
  Rational const d2 = determinant(g2);
  if (d1 != d2) {
    out.verdict = GenusVerdict::Different;
    out.reason = "determinants differ";
    return out;
  }
  if (d1 <= 0) throw Error(ErrorKind::NotPositiveDefinite, "forms must be positive definite");
  for (auto const& [p, e] : factorize(d1.get_num())) {
    if (p == 2) continue;
    out.odd_primes.push_back(p);
    if (!(local_symbol_odd(g1, p) == local_symbol_odd(g2, p))) {
      out.verdict = GenusVerdict::Different;
      out.reason = "local symbols differ at p = " + p.get_str();
      return out;
    }
  }
  if (mpz_even_p(d1.get_num_mpz_t())) {
    out.verdict = GenusVerdict::Undecided;
    out.reason = "determinant is even; 2-adic theory not implemented";
    return out;
  }
  if (detail::is_even_form(g1) != detail::is_even_form(g2)) {
    out.verdict = GenusVerdict::Different;
    out.reason = "one form is even and the other odd";
    return out;
  }
  if (detail::hasse_invariant_2(symmetric_pivots(g1)) != detail::hasse_invariant_2(symmetric_pivots(g2))) {
    out.verdict = GenusVerdict::Different;
    out.reason = "Hasse invariants at 2 differ";
    return out;
  }
  out.verdict = GenusVerdict::Same;
  out.reason = "all local invariants agree";
  return out;
}

}  // namespace lattika
