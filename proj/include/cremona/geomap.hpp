#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cremona/cyclo.hpp"
#include "cremona/error.hpp"
#include "cremona/matrix.hpp"
#include "cremona/poly.hpp"
#include "cremona/ratfun.hpp"
#include "cremona/torus.hpp"

namespace cremona {

using CycloMatrix = Matrix<CycloNumber>;
using CycloVector = std::vector<CycloNumber>;

/// x -> A x + b
struct AffineMap {
  CycloMatrix A;
  CycloVector b;

  AffineMap() = default;
  AffineMap(CycloMatrix a, CycloVector v) : A(std::move(a)), b(std::move(v)) {
    require(A.square() && A.rows() == b.size(), ErrorKind::ArityMismatch,
            "affine map shape mismatch");
  }
  static AffineMap identity(std::size_t n) {
    return AffineMap(CycloMatrix::identity(n), CycloVector(n, CycloNumber(0)));
  }
  static AffineMap linear(CycloMatrix a) {
    std::size_t n = a.rows();
    return AffineMap(std::move(a), CycloVector(n, CycloNumber(0)));
  }
  std::size_t n() const { return b.size(); }

  bool operator==(const AffineMap &o) const { return A == o.A && b == o.b; }
  bool operator!=(const AffineMap &o) const { return !(*this == o); }

  CycloVector apply(const CycloVector &x) const {
    CycloVector y = A * x;
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += b[i];
    return y;
  }
};

/// outer o inner
inline AffineMap compose(const AffineMap &outer, const AffineMap &inner) {
  return AffineMap(outer.A * inner.A, outer.apply(inner.b));
}

inline AffineMap invert(const AffineMap &f) {
  auto inv = inverse(f.A);
  if (!inv) fail(ErrorKind::NonInvertibleLinearPart, "affine map has singular linear part");
  CycloVector c = (*inv) * f.b;
  for (auto &x : c) x = -x;
  return AffineMap(*inv, c);
}

/// outer o f o outer^-1
inline AffineMap conjugate(const AffineMap &outer, const AffineMap &f) {
  return compose(compose(outer, f), invert(outer));
}

/// Component i is u_i x_i + p_i(x_1..x_{i-1}) with u_i a nonzero constant.
struct TriangularAuto {
  std::vector<MultiPoly> components;

  TriangularAuto() = default;
  explicit TriangularAuto(std::vector<MultiPoly> comps) : components(std::move(comps)) {
    validate();
  }
  std::size_t n() const { return components.size(); }

  static bool has_shape(const std::vector<MultiPoly> &comps) {
    std::size_t n = comps.size();
    for (std::size_t i = 0; i < n; ++i) {
      const MultiPoly &p = comps[i];
      if (p.nvars() != n) return false;
      if (p.last_variable() > static_cast<int>(i)) return false;
      Monomial xi(n, 0);
      xi[i] = 1;
      bool found = false;
      for (const auto &[m, c] : p.terms()) {
        if (m[i] == 0) continue;
        if (m != xi) return false;
        found = true;
      }
      if (!found) return false;
    }
    return true;
  }
  CycloNumber unit(std::size_t i) const {
    Monomial xi(n(), 0);
    xi[i] = 1;
    return components[i].coefficient(xi);
  }

  bool operator==(const TriangularAuto &o) const { return components == o.components; }

private:
  void validate() const {
    require(has_shape(components), ErrorKind::InvalidArgument,
            "components do not have triangular shape");
  }
};

inline TriangularAuto invert(const TriangularAuto &f) {
  std::size_t n = f.n();
  std::vector<MultiPoly> inv;
  std::vector<MultiPoly> subs;
  for (std::size_t i = 0; i < n; ++i) subs.push_back(MultiPoly::variable(n, i));
  for (std::size_t i = 0; i < n; ++i) {
    Monomial xi(n, 0);
    xi[i] = 1;
    MultiPoly rest = f.components[i];
    CycloNumber u = f.unit(i);
    rest.add_term(xi, -u);
    MultiPoly gi = (MultiPoly::variable(n, i) - rest.substitute(subs)).scaled(u.inv());
    inv.push_back(gi);
    subs[i] = gi;
  }
  return TriangularAuto(std::move(inv));
}

/// T(A): component i is prod_j x_j^{a_ij}. fix_first marks maps of the form
/// S(B) = T(diag(1, B)).
struct MonomialMap {
  IntMatrix A;
  bool fix_first = false;

  MonomialMap() = default;
  MonomialMap(IntMatrix a, bool fix = false) : A(std::move(a)), fix_first(fix) {
    require(A.square(), ErrorKind::InvalidArgument, "exponent matrix must be square");
    if (fix_first) {
      bool ok = A.rows() >= 1 && A(0, 0) == 1;
      for (std::size_t j = 1; ok && j < A.rows(); ++j) ok = A(0, j) == 0 && A(j, 0) == 0;
      require(ok, ErrorKind::InvalidArgument, "first row and column must be e1");
    }
  }
  std::size_t n() const { return A.rows(); }
  bool operator==(const MonomialMap &o) const { return A == o.A; }
};

inline IntMatrix unimodular_inverse(const IntMatrix &A) {
  RatMatrix q = A.map([](const Integer &x) { return Rational(x); });
  auto inv = inverse(q);
  if (!inv) fail(ErrorKind::NotInvertible, "exponent matrix is singular");
  IntMatrix out(A.rows(), A.cols());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) {
      const Rational &x = (*inv)(i, j);
      if (x.get_den() != 1) fail(ErrorKind::NotInvertible, "exponent matrix is not unimodular");
      out(i, j) = x.get_num();
    }
  return out;
}

inline MonomialMap invert(const MonomialMap &f) {
  return MonomialMap(unimodular_inverse(f.A), f.fix_first);
}

/// T(A)
inline MonomialMap monomial_T(const IntMatrix &A) {
  unimodular_inverse(A);
  return MonomialMap(A, false);
}

/// S(B) = T(diag(1, B)) for B of size n-1.
inline MonomialMap monomial_S(const IntMatrix &B) {
  std::size_t n = B.rows() + 1;
  IntMatrix A(n, n);
  A(0, 0) = 1;
  for (std::size_t i = 0; i < B.rows(); ++i)
    for (std::size_t j = 0; j < B.cols(); ++j) A(i + 1, j + 1) = B(i, j);
  unimodular_inverse(A);
  return MonomialMap(A, true);
}

/// Restriction to the chart x0 != 0 of the projective linear map [R].
struct ProjectiveLinearMap {
  CycloMatrix R;

  ProjectiveLinearMap() = default;
  explicit ProjectiveLinearMap(CycloMatrix r) : R(std::move(r)) {
    require(R.square() && R.rows() >= 2, ErrorKind::InvalidArgument,
            "projective representative must be square of size >= 2");
  }
  std::size_t n() const { return R.rows() - 1; }
  bool operator==(const ProjectiveLinearMap &o) const { return R == o.R; }
};

inline ProjectiveLinearMap invert(const ProjectiveLinearMap &f) {
  auto inv = inverse(f.R);
  if (!inv) fail(ErrorKind::NonInvertibleLinearPart, "projective representative is singular");
  return ProjectiveLinearMap(*inv);
}

struct RationalMap {
  RationalMapComponents components;
  std::size_t n() const { return components.size(); }
  bool operator==(const RationalMap &o) const { return equal_maps(components, o.components); }
};

using GeoMap = std::variant<AffineMap, TriangularAuto, MonomialMap, ProjectiveLinearMap, RationalMap>;

inline std::size_t arity(const GeoMap &g) {
  return std::visit([](const auto &m) { return m.n(); }, g);
}

inline std::string kind_name(const GeoMap &g) {
  switch (g.index()) {
  case 0: return "AFFINE";
  case 1: return "TRIANGULAR";
  case 2: return "MONOMIAL";
  case 3: return "PROJECTIVE";
  default: return "RATIONAL";
  }
}

inline bool invertible_kind(const GeoMap &g) {
  return !std::holds_alternative<RationalMap>(g);
}

inline RationalMapComponents components(const AffineMap &f) {
  std::size_t n = f.n();
  RationalMapComponents out;
  for (std::size_t i = 0; i < n; ++i) {
    MultiPoly p = MultiPoly::constant(n, f.b[i]);
    for (std::size_t j = 0; j < n; ++j) p += MultiPoly::variable(n, j).scaled(f.A(i, j));
    out.emplace_back(std::move(p));
  }
  return out;
}

inline RationalMapComponents components(const TriangularAuto &f) {
  RationalMapComponents out;
  for (const auto &p : f.components) out.emplace_back(p);
  return out;
}

inline RationalMapComponents components(const MonomialMap &f) {
  std::size_t n = f.n();
  RationalMapComponents out;
  for (std::size_t i = 0; i < n; ++i) {
    Monomial up(n, 0), down(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
      int e = static_cast<int>(to_i64(f.A(i, j)));
      (e >= 0 ? up[j] : down[j]) = e >= 0 ? e : -e;
    }
    out.emplace_back(MultiPoly::monomial(n, up, CycloNumber(1)),
                     MultiPoly::monomial(n, down, CycloNumber(1)));
  }
  return out;
}

inline RationalMapComponents components(const ProjectiveLinearMap &f) {
  std::size_t n = f.n();
  auto row_form = [&](std::size_t i) {
    MultiPoly p = MultiPoly::constant(n, f.R(i, 0));
    for (std::size_t j = 1; j <= n; ++j) p += MultiPoly::variable(n, j - 1).scaled(f.R(i, j));
    return p;
  };
  MultiPoly den = row_form(0);
  if (den.zero()) fail(ErrorKind::DenominatorVanishesIdentically, "chart denominator is zero");
  RationalMapComponents out;
  for (std::size_t i = 1; i <= n; ++i) out.emplace_back(row_form(i), den);
  return out;
}

inline RationalMapComponents components(const RationalMap &f) { return f.components; }

inline RationalMapComponents components(const GeoMap &g) {
  return std::visit([](const auto &m) { return components(m); }, g);
}

inline GeoMap invert(const GeoMap &g) {
  return std::visit(
      [](const auto &m) -> GeoMap {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, RationalMap>) {
          fail(ErrorKind::NotInvertible, "general rational maps cannot be inverted");
        } else {
          return invert(m);
        }
      },
      g);
}

/// An affine map read off components that are polynomials of degree <= 1.
inline std::optional<AffineMap> as_affine(const RationalMapComponents &comps) {
  std::size_t n = comps.size();
  CycloMatrix A(n, n);
  CycloVector b(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!comps[i].is_polynomial()) return std::nullopt;
    MultiPoly p = comps[i].as_polynomial();
    if (p.degree() > 1) return std::nullopt;
    b[i] = p.constant_term();
    for (std::size_t j = 0; j < n; ++j) {
      Monomial xj(n, 0);
      xj[j] = 1;
      A(i, j) = p.coefficient(xj);
    }
  }
  return AffineMap(A, b);
}

/// rho(mu): x_i -> mu_i x_i
inline AffineMap rho(const CycloVector &mu) {
  std::size_t n = mu.size();
  CycloMatrix A(n, n);
  for (std::size_t i = 0; i < n; ++i) A(i, i) = mu[i];
  return AffineMap::linear(A);
}

inline AffineMap rho(const TorusVector &mu, const FieldContext &ctx) {
  return rho(evaluate(mu, ctx));
}

/// theta(nu): (x1 + 1, nu_2 x2, ..., nu_n xn) for nu of length n-1.
inline AffineMap theta(const CycloVector &nu) {
  std::size_t n = nu.size() + 1;
  CycloMatrix A(n, n);
  CycloVector b(n, CycloNumber(0));
  A(0, 0) = 1;
  b[0] = 1;
  for (std::size_t i = 1; i < n; ++i) A(i, i) = nu[i - 1];
  return AffineMap(A, b);
}

inline AffineMap theta(const TorusVector &nu, const FieldContext &ctx) {
  return theta(evaluate(nu, ctx));
}

inline TorusVector monomial_action(const IntMatrix &A, const TorusVector &mu) {
  return act(A, mu);
}

enum class Direction { Forward, Inverse };
enum class GroupTag { Aff, Aut, Bir };

inline std::string group_name(GroupTag g) {
  switch (g) {
  case GroupTag::Aff: return "aff";
  case GroupTag::Aut: return "aut";
  case GroupTag::Bir: return "bir";
  }
  return "bir";
}

struct ChainEntry {
  GeoMap map;
  Direction direction = Direction::Forward;
};

/// A certificate pi = e_k o ... o e_1: the first entry is applied first.
struct MapChain {
  GroupTag group = GroupTag::Bir;
  std::size_t arity = 0;
  std::vector<ChainEntry> entries;

  void push(GeoMap g, Direction d = Direction::Forward) {
    entries.push_back({std::move(g), d});
  }
  void append(const MapChain &o) {
    entries.insert(entries.end(), o.entries.begin(), o.entries.end());
  }
  /// The chain of the inverse map.
  MapChain inverted() const {
    MapChain out{group, arity, {}};
    for (auto it = entries.rbegin(); it != entries.rend(); ++it)
      out.push(it->map, it->direction == Direction::Forward ? Direction::Inverse : Direction::Forward);
    return out;
  }
};

constexpr int kDefaultMaxDegree = 512;

namespace detail {

inline void check_degree(const RationalMapComponents &comps, int max_degree) {
  for (const auto &c : comps)
    if (c.num().degree() > max_degree || c.den().degree() > max_degree)
      fail(ErrorKind::DegreeCapExceeded,
           "intermediate degree exceeds " + std::to_string(max_degree));
}

inline RationalMapComponents entry_components(const ChainEntry &e) {
  if (e.direction == Direction::Forward) return components(e.map);
  if (!invertible_kind(e.map))
    fail(ErrorKind::NotInvertible, "inverse entry of a general rational map");
  return components(invert(e.map));
}

} // namespace detail

inline RationalMapComponents compose_chain(const MapChain &c, std::size_t n,
                                           int max_degree = kDefaultMaxDegree) {
  RationalMapComponents cur = identity_components(n);
  for (const auto &e : c.entries) {
    require(arity(e.map) == n, ErrorKind::ArityMismatch, "chain entry arity mismatch");
    cur = compose(cur, detail::entry_components(e));
    detail::check_degree(cur, max_degree);
  }
  return cur;
}

/// True iff pi o alpha = beta o pi for the composite pi of the chain.
///
/// When every entry is invertible the check runs one step at a time:
/// gamma_0 = alpha, gamma_i = s_i o gamma_{i-1} o s_i^-1, and finally
/// gamma_k = beta. Each s_i o s_i^-1 is checked against the identity. This is
/// equivalent to the composite identity and keeps intermediate degrees low.
inline bool verify_conjugation(const MapChain &pi, const GeoMap &alpha, const GeoMap &beta,
                               int max_degree = kDefaultMaxDegree) {
  std::size_t n = arity(alpha);
  if (arity(beta) != n || pi.arity != n) return false;
  for (const auto &e : pi.entries)
    if (arity(e.map) != n) return false;
  RationalMapComponents a = components(alpha), b = components(beta);
  bool stepwise = true;
  for (const auto &e : pi.entries) stepwise = stepwise && invertible_kind(e.map);
  if (!stepwise) {
    RationalMapComponents P = compose_chain(pi, n, max_degree);
    RationalMapComponents lhs = compose(a, P), rhs = compose(P, b);
    detail::check_degree(lhs, max_degree);
    return equal_maps(lhs, rhs);
  }
  RationalMapComponents gamma = a;
  RationalMapComponents id = identity_components(n);
  for (const auto &e : pi.entries) {
    GeoMap fwd = e.direction == Direction::Forward ? e.map : invert(e.map);
    GeoMap bwd = e.direction == Direction::Forward ? invert(e.map) : e.map;
    RationalMapComponents s = components(fwd), sinv = components(bwd);
    if (!equal_maps(compose(sinv, s), id)) return false;
    gamma = compose(compose(sinv, gamma), s);
    detail::check_degree(gamma, max_degree);
  }
  return equal_maps(gamma, b);
}

} // namespace cremona
