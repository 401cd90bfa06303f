#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cremona/error.hpp"
#include "cremona/poly.hpp"

namespace cremona {

/// num/den, normalized: common monomial content removed, leading coefficient
/// of den equal to 1, and den cleared when it divides num exactly.
class RationalFunction {
public:
  explicit RationalFunction(std::size_t n = 0)
      : num_(n), den_(MultiPoly::constant(n, CycloNumber(1))) {}
  RationalFunction(MultiPoly num)
      : num_(std::move(num)), den_(MultiPoly::constant(num_.nvars(), CycloNumber(1))) {}
  RationalFunction(MultiPoly num, MultiPoly den) : num_(std::move(num)), den_(std::move(den)) {
    require(num_.nvars() == den_.nvars(), ErrorKind::ArityMismatch,
            "numerator and denominator in different rings");
    if (den_.zero()) fail(ErrorKind::DivisionByZero, "zero denominator");
    normalize();
  }

  static RationalFunction variable(std::size_t n, std::size_t i) {
    return RationalFunction(MultiPoly::variable(n, i));
  }
  static RationalFunction constant(std::size_t n, const CycloNumber &c) {
    return RationalFunction(MultiPoly::constant(n, c));
  }

  const MultiPoly &num() const { return num_; }
  const MultiPoly &den() const { return den_; }
  std::size_t nvars() const { return num_.nvars(); }

  bool zero() const { return num_.zero(); }
  bool is_polynomial() const { return den_.is_constant(); }
  /// Numerator scaled so the denominator is 1; requires is_polynomial().
  MultiPoly as_polynomial() const {
    require(is_polynomial(), ErrorKind::InvalidArgument, "not a polynomial");
    return num_.scaled(den_.constant_term().inv());
  }
  int degree() const { return std::max(num_.degree(), den_.degree()); }

  RationalFunction operator-() const { return RationalFunction(-num_, den_, raw_tag{}); }
  friend RationalFunction operator+(const RationalFunction &a, const RationalFunction &b) {
    if (a.den_ == b.den_) return RationalFunction(a.num_ + b.num_, a.den_);
    return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RationalFunction operator-(const RationalFunction &a, const RationalFunction &b) {
    return a + (-b);
  }
  friend RationalFunction operator*(const RationalFunction &a, const RationalFunction &b) {
    return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend RationalFunction operator/(const RationalFunction &a, const RationalFunction &b) {
    if (b.zero()) fail(ErrorKind::DivisionByZero, "rational function division by zero");
    return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
  }
  RationalFunction pow(int e) const {
    if (e < 0) return RationalFunction(den_.pow(static_cast<unsigned>(-e)),
                                       num_.pow(static_cast<unsigned>(-e)));
    return RationalFunction(num_.pow(static_cast<unsigned>(e)), den_.pow(static_cast<unsigned>(e)));
  }

  std::string to_string(std::int64_t M, int first_index = 1) const {
    std::string n = num_.to_string(M, first_index);
    if (den_.is_constant() && den_.constant_term().is_one()) return n;
    auto wrap = [](const MultiPoly &p, const std::string &s) {
      return p.size() > 1 ? "(" + s + ")" : s;
    };
    std::string d = den_.to_string(M, first_index);
    bool bare = den_.size() == 1 && d.find_first_of("*/") == std::string::npos;
    return wrap(num_, n) + "/" + (bare ? d : "(" + d + ")");
  }
  std::int64_t conductor() const { return std::lcm(num_.conductor(), den_.conductor()); }

private:
  struct raw_tag {};
  RationalFunction(MultiPoly num, MultiPoly den, raw_tag)
      : num_(std::move(num)), den_(std::move(den)) {}

  void normalize() {
    std::size_t n = num_.nvars();
    if (num_.zero()) {
      den_ = MultiPoly::constant(n, CycloNumber(1));
      return;
    }
    Monomial cn = num_.monomial_content(), cd = den_.monomial_content();
    Monomial common(n);
    bool any = false;
    for (std::size_t i = 0; i < n; ++i) {
      common[i] = std::min(cn[i], cd[i]);
      any = any || common[i] > 0;
    }
    if (any) {
      num_ = num_.divided_by_monomial(common);
      den_ = den_.divided_by_monomial(common);
    }
    CycloNumber lc = den_.leading_coefficient();
    if (!lc.is_one()) {
      CycloNumber s = lc.inv();
      num_ = num_.scaled(s);
      den_ = den_.scaled(s);
    }
    if (den_.is_constant()) return;
    if (auto q = num_.exact_divide(den_)) {
      num_ = std::move(*q);
      den_ = MultiPoly::constant(n, CycloNumber(1));
    } else if (auto r = den_.exact_divide(num_)) {
      // num | den: x/x^2-style cancellations not caught by monomial content
      CycloNumber s = r->leading_coefficient().inv();
      num_ = MultiPoly::constant(n, s);
      den_ = r->scaled(s);
    }
  }

  MultiPoly num_, den_;
};

inline bool equal_rational(const RationalFunction &f, const RationalFunction &g) {
  require(f.nvars() == g.nvars(), ErrorKind::ArityMismatch, "different variable counts");
  return f.num() * g.den() == g.num() * f.den();
}

using RationalMapComponents = std::vector<RationalFunction>;

namespace detail {

/// p(a_1/b_1, ..., a_n/b_n) * prod b_i^{d_i}, with d_i = deg_{x_i} p.
inline MultiPoly homogenized_substitute(const MultiPoly &p, const RationalMapComponents &phi,
                                        const std::vector<int> &d) {
  std::size_t n = p.nvars();
  std::size_t out_n = phi[0].nvars();
  std::vector<std::vector<MultiPoly>> apow(n), bpow(n);
  auto power = [&](std::vector<MultiPoly> &cache, const MultiPoly &base, int e) -> const MultiPoly & {
    if (cache.empty()) cache.push_back(MultiPoly::constant(out_n, CycloNumber(1)));
    while (static_cast<int>(cache.size()) <= e) cache.push_back(cache.back() * base);
    return cache[static_cast<std::size_t>(e)];
  };
  MultiPoly out(out_n);
  for (const auto &[m, c] : p.terms()) {
    MultiPoly t = MultiPoly::constant(out_n, c);
    for (std::size_t i = 0; i < n; ++i) {
      if (m[i] > 0) t *= power(apow[i], phi[i].num(), m[i]);
      bool trivial_den = phi[i].den().is_constant() && phi[i].den().constant_term().is_one();
      if (!trivial_den && d[i] - m[i] > 0) t *= power(bpow[i], phi[i].den(), d[i] - m[i]);
    }
    out += t;
  }
  return out;
}

} // namespace detail

/// F o phi.
inline RationalFunction pullback(const RationalMapComponents &phi, const RationalFunction &F) {
  require(phi.size() == F.nvars(), ErrorKind::ArityMismatch,
          "map arity does not match the function's variable count");
  require(!phi.empty(), ErrorKind::ArityMismatch, "empty map");
  std::size_t n = F.nvars();
  std::vector<int> dn(n), dd(n);
  for (std::size_t i = 0; i < n; ++i) {
    dn[i] = std::max(0, F.num().degree_in(i));
    dd[i] = std::max(0, F.den().degree_in(i));
  }
  MultiPoly N = detail::homogenized_substitute(F.num(), phi, dn);
  MultiPoly D = detail::homogenized_substitute(F.den(), phi, dd);
  if (D.zero())
    fail(ErrorKind::DenominatorVanishesIdentically, "denominator vanishes after substitution");
  // N/D must be corrected by prod b_i^{dd_i - dn_i}
  std::size_t out_n = phi[0].nvars();
  MultiPoly nf = MultiPoly::constant(out_n, CycloNumber(1)), df = nf;
  for (std::size_t i = 0; i < n; ++i) {
    const MultiPoly &b = phi[i].den();
    if (b.is_constant() && b.constant_term().is_one()) continue;
    int e = dd[i] - dn[i];
    if (e > 0) nf *= b.pow(static_cast<unsigned>(e));
    if (e < 0) df *= b.pow(static_cast<unsigned>(-e));
  }
  return RationalFunction(N * nf, D * df);
}

inline RationalFunction pullback(const RationalMapComponents &phi, const MultiPoly &F) {
  return pullback(phi, RationalFunction(F));
}

inline RationalMapComponents identity_components(std::size_t n) {
  RationalMapComponents out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(RationalFunction::variable(n, i));
  return out;
}

/// Components of g o f (apply f first).
inline RationalMapComponents compose(const RationalMapComponents &f, const RationalMapComponents &g) {
  RationalMapComponents out;
  for (const auto &gi : g) out.push_back(pullback(f, gi));
  return out;
}

inline bool equal_maps(const RationalMapComponents &a, const RationalMapComponents &b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!equal_rational(a[i], b[i])) return false;
  return true;
}

} // namespace cremona
