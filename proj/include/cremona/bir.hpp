#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cremona/aut.hpp"
#include "cremona/error.hpp"
#include "cremona/geomap.hpp"
#include "cremona/jordan.hpp"
#include "cremona/orbit.hpp"
#include "cremona/torus.hpp"

namespace cremona {

enum class DichotomyLabel { Diagonalizable, BirationallyAlmostDiagonal };

inline std::string label_name(DichotomyLabel l) {
  return l == DichotomyLabel::Diagonalizable ? "Diagonalizable" : "BirationallyAlmostDiagonal";
}

inline bool is_semisimple(const JordanData &d) {
  for (const auto &b : d.blocks)
    if (b.size != 1) return false;
  return true;
}

inline DichotomyLabel dichotomy_label(const AffineMap &alpha, std::int64_t m = 1) {
  auto jd = jordan_form(alpha, m).data;
  return jd.has_fixed_point && is_semisimple(jd) ? DichotomyLabel::Diagonalizable
                                                 : DichotomyLabel::BirationallyAlmostDiagonal;
}

/// Diagonal: values are mu_1..mu_n of rho(mu). Almost-diagonal: values are
/// nu_2..nu_n of theta(nu).
struct BirCanonicalForm {
  DichotomyLabel label = DichotomyLabel::Diagonalizable;
  std::vector<CycloNumber> values;
  MapChain conjugator;  // conjugator o alpha = representative() o conjugator

  AffineMap representative() const {
    if (label == DichotomyLabel::Diagonalizable) return rho(values);
    return theta(values);
  }
};

/// T(A) for the map (1/x1, x2/x1, ..., x_s/x1, x_{s+1}, ..., x_n).
inline MonomialMap block_inversion(std::size_t n, std::size_t s) {
  IntMatrix A = IntMatrix::identity(n);
  A(0, 0) = -1;
  for (std::size_t i = 1; i < s; ++i) A(i, 0) = -1;
  return monomial_T(A);
}

namespace detail {

inline void push_unless_identity(MapChain &c, const AffineMap &f) {
  if (!is_identity(f)) c.push(f);
}

/// s o f o s^-1 for an invertible s, as an affine map when the result is one.
inline AffineMap conjugate_to_affine(const GeoMap &s, const AffineMap &f) {
  RationalMapComponents out =
      compose(compose(components(invert(s)), components(f)), components(s));
  auto aff = as_affine(out);
  require(aff.has_value(), ErrorKind::Internal, "conjugate is not affine");
  return *aff;
}

} // namespace detail

inline BirCanonicalForm bir_canonical_form(const AffineMap &alpha, std::int64_t m = 1) {
  std::size_t n = alpha.n();
  BirCanonicalForm out;
  out.conjugator = MapChain{GroupTag::Bir, n, {}};
  AffineMap current = alpha;
  auto jf = jordan_form(alpha, m);
  if (jf.data.has_fixed_point && is_semisimple(jf.data)) {
    out.label = DichotomyLabel::Diagonalizable;
    detail::push_unless_identity(out.conjugator, jf.conjugator);
    for (std::size_t i = 0; i < n; ++i) out.values.push_back(jf.normal_form.A(i, i));
    return out;
  }
  out.label = DichotomyLabel::BirationallyAlmostDiagonal;
  if (jf.data.has_fixed_point) {
    detail::push_unless_identity(out.conjugator, jf.conjugator);
    // bring the first non-trivial block to the front
    std::size_t offset = 0, size = 0;
    for (const auto &b : jf.data.blocks) {
      if (b.size > 1) {
        size = static_cast<std::size_t>(b.size);
        break;
      }
      offset += static_cast<std::size_t>(b.size);
    }
    std::vector<std::size_t> p;
    for (std::size_t i = 0; i < size; ++i) p.push_back(offset + i);
    for (std::size_t i = 0; i < n; ++i)
      if (i < offset || i >= offset + size) p.push_back(i);
    AffineMap sigma = detail::permutation_map(p);
    current = conjugate(sigma, jf.normal_form);
    detail::push_unless_identity(out.conjugator, sigma);
    MonomialMap inv = block_inversion(n, size);
    current = detail::conjugate_to_affine(inv, current);
    out.conjugator.push(inv);
    require(!fixed_point(current).has_value(), ErrorKind::Internal,
            "block inversion left a fixed point");
  }
  auto ad = almost_diagonalize(current, m);
  out.conjugator.append(ad.conjugator);
  out.values = ad.form.eigenvalues;
  return out;
}

/// Conjugacy in Bir(A^n). The torus decision runs in dimension n (diagonal,
/// witness lifted by T) or n - 1 (almost-diagonal, witness lifted by S).
inline Decision bir_conjugate_decision(const AffineMap &alpha, const AffineMap &beta,
                                       std::int64_t m = 1, std::int64_t search_bound = 10000) {
  require(alpha.n() == beta.n(), ErrorKind::ArityMismatch, "maps act on different spaces");
  std::size_t n = alpha.n();
  Decision out;
  out.certificate = MapChain{GroupTag::Bir, n, {}};
  auto ca = bir_canonical_form(alpha, m), cb = bir_canonical_form(beta, m);
  if (ca.label != cb.label) {
    out.reason = "dichotomy labels differ";
    return out;
  }
  bool diagonal = ca.label == DichotomyLabel::Diagonalizable;
  std::size_t dim = ca.values.size();
  GeoMap lift = AffineMap::identity(n);
  bool have_lift = false;
  if (dim > 0) {
    FieldContext ctx(m);
    std::vector<CycloNumber> all = ca.values;
    all.insert(all.end(), cb.values.begin(), cb.values.end());
    TorusVector joint = decompose_joint(all, ctx);
    TorusVector ta{joint.modulus, {}}, tb{joint.modulus, {}};
    for (std::size_t i = 0; i < dim; ++i) {
      ta.entries.push_back(joint.entries[i]);
      tb.entries.push_back(joint.entries[dim + i]);
    }
    auto ov = torus_orbit_decision(ta, tb, search_bound);
    if (ov.tag != Verdict::Conjugate) {
      out.verdict = ov.tag;
      out.reason = ov.reason;
      return out;
    }
    if (!ov.witness.is_identity()) {
      lift = diagonal ? monomial_T(ov.witness) : monomial_S(ov.witness);
      have_lift = true;
    }
  }
  out.verdict = Verdict::Conjugate;
  out.certificate.append(ca.conjugator);
  if (have_lift) out.certificate.push(lift);
  out.certificate.append(cb.conjugator.inverted());
  return out;
}

} // namespace cremona
