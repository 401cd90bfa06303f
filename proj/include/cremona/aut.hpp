#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cremona/error.hpp"
#include "cremona/geomap.hpp"
#include "cremona/jordan.hpp"
#include "cremona/poly.hpp"

namespace cremona {

/// Components of an affine map as polynomials.
inline std::vector<MultiPoly> affine_polys(const AffineMap &f) {
  std::size_t n = f.n();
  std::vector<MultiPoly> out;
  for (std::size_t i = 0; i < n; ++i) {
    MultiPoly p = MultiPoly::constant(n, f.b[i]);
    for (std::size_t j = 0; j < n; ++j)
      if (!f.A(i, j).zero()) p += MultiPoly::variable(n, j).scaled(f.A(i, j));
    out.push_back(std::move(p));
  }
  return out;
}

/// F o f for a polynomial F and an affine f.
inline MultiPoly affine_pullback(const AffineMap &f, const MultiPoly &F) {
  return F.substitute(affine_polys(f));
}

namespace detail {

inline Rational binomial(unsigned n, unsigned k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return Rational(r);
}

/// Preimages under (alpha^* - mu_k) of X_1^t X_k inside K[X_1..X_k], for
/// alpha in fixed-point-free normal form. Coordinates are 0-based; for k = 0
/// the target is X_1^t and mu_0 = 1.
class CorrectionSolver {
public:
  explicit CorrectionSolver(const AffineMap &alpha) : n_(alpha.n()), alpha_(alpha) {
    require(n_ >= 1, ErrorKind::InvalidArgument, "empty map");
    for (std::size_t k = 0; k < n_; ++k) {
      mu_.push_back(alpha.A(k, k));
      first_.push_back(k == 0 || alpha.A(k, k - 1).zero());
    }
    require(mu_[0].is_one() && alpha.b[0].is_one(), ErrorKind::InvalidArgument,
            "map is not in fixed-point-free normal form");
  }

  const CycloNumber &mu(std::size_t k) const { return mu_[k]; }
  bool first_of_block(std::size_t k) const { return first_[k]; }

  const MultiPoly &solve(std::size_t k, unsigned t) {
    auto key = std::make_pair(k, t);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    MultiPoly r = compute(k, t);
    return memo_.emplace(key, std::move(r)).first->second;
  }

  /// Preimage of X_k (the variable itself).
  const MultiPoly &solve_variable(std::size_t k) { return k == 0 ? solve(0, 1) : solve(k, 0); }

private:
  MultiPoly x1_power_times(unsigned t, std::size_t k) const {
    Monomial m(n_, 0);
    m[0] = static_cast<int>(t);
    if (k > 0) m[k] += 1;
    return MultiPoly::monomial(n_, m, CycloNumber(1));
  }

  MultiPoly compute(std::size_t k, unsigned t) {
    // lead = X_1^{t+1} X_k (or X_1^{t+1}); (alpha^* - mu) lead = (t+1) mu X_1^t X_k + lower
    MultiPoly r = x1_power_times(t + 1, k);
    const CycloNumber &mu = mu_[k];
    for (unsigned s = 0; s < t; ++s)
      r -= solve(k, s).scaled(mu * CycloNumber(binomial(t + 1, s)));
    if (k > 0 && !first_[k]) {
      for (unsigned s = 0; s <= t + 1; ++s) {
        const MultiPoly &lower = k - 1 == 0 ? solve(0, s + 1) : solve(k - 1, s);
        r -= lower.scaled(CycloNumber(binomial(t + 1, s)));
      }
    }
    return r.scaled((mu * CycloNumber(static_cast<long>(t + 1))).inv());
  }

  std::size_t n_;
  AffineMap alpha_;
  std::vector<CycloNumber> mu_;
  std::vector<bool> first_;
  std::map<std::pair<std::size_t, unsigned>, MultiPoly> memo_;
};

} // namespace detail

/// Q with alpha^*(Q) = mu_j Q - X_{j-1} for a coordinate j (0-based) that is
/// not the first of its block; alpha must be in fixed-point-free normal form.
inline MultiPoly solve_eigen_correction(const AffineMap &alpha, std::size_t j) {
  require(j >= 1 && j < alpha.n(), ErrorKind::InvalidArgument, "coordinate out of range");
  detail::CorrectionSolver solver(alpha);
  require(!solver.first_of_block(j), ErrorKind::InvalidArgument,
          "coordinate is the first of its block");
  MultiPoly q = -solver.solve_variable(j - 1);
  MultiPoly lhs = affine_pullback(alpha, q);
  MultiPoly rhs = q.scaled(solver.mu(j)) - MultiPoly::variable(alpha.n(), j - 1);
  require(lhs == rhs, ErrorKind::Internal, "correction fails its defining equation");
  return q;
}

/// binom(Q, r) = Q (Q - 1) ... (Q - r + 1) / r!
inline MultiPoly binomial_poly(const MultiPoly &q, unsigned r) {
  MultiPoly out = MultiPoly::constant(q.nvars(), CycloNumber(1));
  for (unsigned i = 0; i < r; ++i)
    out = out * (q - MultiPoly::constant(q.nvars(), CycloNumber(static_cast<long>(i))));
  Integer f;
  mpz_fac_ui(f.get_mpz_t(), r);
  return out.scaled(CycloNumber(Rational(Integer(1), f)));
}

/// Closed-form correction P_m for the full shift (x1 + 1, x2 + x1, ...), in
/// `nvars` variables (at least m - 1; default m).
inline MultiPoly closed_form_Pm(int m, std::size_t nvars = 0) {
  require(m >= 2, ErrorKind::InvalidArgument, "P_m needs m >= 2");
  std::size_t n = nvars == 0 ? static_cast<std::size_t>(m) : nvars;
  require(n + 1 >= static_cast<std::size_t>(m), ErrorKind::InvalidArgument, "too few variables");
  MultiPoly x1 = MultiPoly::variable(n, 0);
  auto shifted = [&](int c) { return x1 + MultiPoly::constant(n, CycloNumber(c)); };
  MultiPoly out(n);
  for (int k = 1; k <= m - 2; ++k) {
    MultiPoly term = binomial_poly(shifted(k - 1), static_cast<unsigned>(k)) *
                     MultiPoly::variable(n, static_cast<std::size_t>(m - k - 1));
    out += term.scaled(CycloNumber(k % 2 == 0 ? 1 : -1));
  }
  int sign = (m - 1) % 2 == 0 ? 1 : -1;
  out += binomial_poly(shifted(m - 2), static_cast<unsigned>(m)).scaled(CycloNumber(sign * (m - 1)));
  return out;
}

struct AlmostDiagonalForm {
  std::vector<CycloNumber> eigenvalues;  // alpha_2..alpha_n
  AffineMap map() const;
};

inline AffineMap AlmostDiagonalForm::map() const { return theta(eigenvalues); }

struct AlmostDiagonalResult {
  AlmostDiagonalForm form;
  MapChain conjugator;  // conjugator o alpha = form.map() o conjugator
};

/// Triangular conjugator of a fixed-point-free normal form onto its diagonal
/// part: P_j = X_j at block starts, X_j + Q_j elsewhere.
inline TriangularAuto normal_form_straightener(const AffineMap &nf) {
  std::size_t n = nf.n();
  detail::CorrectionSolver solver(nf);
  std::vector<MultiPoly> comps;
  comps.push_back(MultiPoly::variable(n, 0));
  for (std::size_t j = 1; j < n; ++j) {
    MultiPoly p = MultiPoly::variable(n, j);
    if (!solver.first_of_block(j)) p -= solver.solve_variable(j - 1);
    MultiPoly lhs = affine_pullback(nf, p);
    require(lhs == p.scaled(solver.mu(j)), ErrorKind::Internal,
            "straightening component is not an eigenvector");
    comps.push_back(std::move(p));
  }
  MultiPoly lhs1 = affine_pullback(nf, comps[0]);
  require(lhs1 == comps[0] + MultiPoly::constant(n, CycloNumber(1)), ErrorKind::Internal,
          "first component is not shifted by one");
  return TriangularAuto(std::move(comps));
}

inline bool is_identity(const AffineMap &f) { return f == AffineMap::identity(f.n()); }

inline bool is_identity(const TriangularAuto &f) {
  for (std::size_t i = 0; i < f.n(); ++i)
    if (!(f.components[i] == MultiPoly::variable(f.n(), i))) return false;
  return true;
}

inline AlmostDiagonalResult almost_diagonalize(const AffineMap &alpha, std::int64_t m = 1) {
  std::size_t n = alpha.n();
  require(!fixed_point(alpha).has_value(), ErrorKind::InvalidArgument,
          "almost-diagonalization needs a map without fixed point");
  auto jf = jordan_form(alpha, m);
  AlmostDiagonalResult out;
  out.conjugator = MapChain{GroupTag::Aut, n, {}};
  if (!is_identity(jf.conjugator)) out.conjugator.push(jf.conjugator);
  TriangularAuto straight = normal_form_straightener(jf.normal_form);
  if (!is_identity(straight)) out.conjugator.push(straight);
  for (std::size_t j = 1; j < n; ++j) out.form.eigenvalues.push_back(jf.normal_form.A(j, j));
  return out;
}

namespace detail {

/// Lexicographically least p with p(0) = 0 and to[i] = from[p(i)] (1-based
/// slots i >= 1 of the map), or nothing when the multisets differ.
inline std::optional<std::vector<std::size_t>> matching_permutation(
    const std::vector<CycloNumber> &from, const std::vector<CycloNumber> &to) {
  if (from.size() != to.size()) return std::nullopt;
  std::vector<bool> used(from.size(), false);
  std::vector<std::size_t> p{0};
  for (const auto &v : to) {
    std::size_t j = 0;
    while (j < from.size() && (used[j] || !(from[j] == v))) ++j;
    if (j == from.size()) return std::nullopt;
    used[j] = true;
    p.push_back(j + 1);
  }
  return p;
}

/// Coordinate permutation y_i = x_{p(i)}.
inline AffineMap permutation_map(const std::vector<std::size_t> &p) {
  std::size_t n = p.size();
  CycloMatrix A(n, n);
  for (std::size_t i = 0; i < n; ++i) A(i, p[i]) = 1;
  return AffineMap::linear(A);
}

} // namespace detail

/// Conjugacy in Aut(n): Aff data when both maps fix a point, eigenvalue
/// multisets of the almost-diagonal forms otherwise.
inline Decision aut_conjugate_decision(const AffineMap &alpha, const AffineMap &beta,
                                       std::int64_t m = 1) {
  require(alpha.n() == beta.n(), ErrorKind::ArityMismatch, "maps act on different spaces");
  std::size_t n = alpha.n();
  bool fa = fixed_point(alpha).has_value(), fb = fixed_point(beta).has_value();
  if (fa != fb) {
    Decision out;
    out.certificate = MapChain{GroupTag::Aut, n, {}};
    out.reason = "fixed point dichotomy differs";
    return out;
  }
  if (fa) {
    Decision out = aff_conjugate_decision(alpha, beta, m);
    out.certificate.group = GroupTag::Aut;
    return out;
  }
  auto da = almost_diagonalize(alpha, m), db = almost_diagonalize(beta, m);
  Decision out;
  out.certificate = MapChain{GroupTag::Aut, n, {}};
  auto p = detail::matching_permutation(da.form.eigenvalues, db.form.eigenvalues);
  if (!p) {
    out.reason = "almost-diagonal eigenvalues differ";
    return out;
  }
  out.verdict = Verdict::Conjugate;
  out.certificate.append(da.conjugator);
  AffineMap sigma = detail::permutation_map(*p);
  if (!is_identity(sigma)) out.certificate.push(sigma);
  out.certificate.append(db.conjugator.inverted());
  return out;
}

} // namespace cremona
