#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cremona/cyclo.hpp"
#include "cremona/error.hpp"

namespace cremona {

using Monomial = std::vector<int>;

inline int total_degree(const Monomial &m) {
  int d = 0;
  for (int e : m) d += e;
  return d;
}

/// Graded lexicographic order, largest first.
struct GrlexGreater {
  bool operator()(const Monomial &a, const Monomial &b) const {
    int da = total_degree(a), db = total_degree(b);
    if (da != db) return da > db;
    return a > b;
  }
};

inline bool divides(const Monomial &a, const Monomial &b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

/// Sparse polynomial in n variables over Q(zeta).
class MultiPoly {
public:
  using Terms = std::map<Monomial, CycloNumber, GrlexGreater>;

  explicit MultiPoly(std::size_t n = 0) : n_(n) {}

  static MultiPoly constant(std::size_t n, const CycloNumber &c) {
    MultiPoly p(n);
    if (!c.zero()) p.terms_.emplace(Monomial(n, 0), c);
    return p;
  }
  /// The variable with 0-based index i.
  static MultiPoly variable(std::size_t n, std::size_t i) {
    require(i < n, ErrorKind::InvalidArgument, "variable index out of range");
    Monomial m(n, 0);
    m[i] = 1;
    return monomial(n, m, CycloNumber(1));
  }
  static MultiPoly monomial(std::size_t n, const Monomial &m, const CycloNumber &c) {
    require(m.size() == n, ErrorKind::InvalidArgument, "monomial length mismatch");
    MultiPoly p(n);
    if (!c.zero()) p.terms_.emplace(m, c);
    return p;
  }

  std::size_t nvars() const { return n_; }
  const Terms &terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool zero() const { return terms_.empty(); }

  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
  }
  CycloNumber constant_term() const {
    auto it = terms_.find(Monomial(n_, 0));
    return it == terms_.end() ? CycloNumber(0) : it->second;
  }
  CycloNumber coefficient(const Monomial &m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? CycloNumber(0) : it->second;
  }

  int degree() const { return terms_.empty() ? -1 : total_degree(terms_.begin()->first); }
  int degree_in(std::size_t i) const {
    int d = terms_.empty() ? -1 : 0;
    for (const auto &[m, c] : terms_) d = std::max(d, m[i]);
    return d;
  }
  /// Largest 0-based variable index that occurs, or -1.
  int last_variable() const {
    int last = -1;
    for (const auto &[m, c] : terms_)
      for (std::size_t i = 0; i < n_; ++i)
        if (m[i] > 0) last = std::max(last, static_cast<int>(i));
    return last;
  }

  const Monomial &leading_monomial() const { return terms_.begin()->first; }
  const CycloNumber &leading_coefficient() const { return terms_.begin()->second; }

  void add_term(const Monomial &m, const CycloNumber &c) {
    if (c.zero()) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second.zero()) terms_.erase(it);
    }
  }

  MultiPoly operator-() const {
    MultiPoly out = *this;
    for (auto &[m, c] : out.terms_) c = -c;
    return out;
  }
  MultiPoly &operator+=(const MultiPoly &o) {
    check(o);
    for (const auto &[m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  MultiPoly &operator-=(const MultiPoly &o) {
    check(o);
    for (const auto &[m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  friend MultiPoly operator+(MultiPoly a, const MultiPoly &b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly &b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly &a, const MultiPoly &b) {
    a.check(b);
    MultiPoly out(a.n_);
    Monomial m(a.n_);
    for (const auto &[ma, ca] : a.terms_)
      for (const auto &[mb, cb] : b.terms_) {
        for (std::size_t i = 0; i < a.n_; ++i) m[i] = ma[i] + mb[i];
        out.add_term(m, ca * cb);
      }
    return out;
  }
  MultiPoly &operator*=(const MultiPoly &o) { return *this = *this * o; }
  MultiPoly scaled(const CycloNumber &s) const {
    if (s.zero()) return MultiPoly(n_);
    MultiPoly out = *this;
    for (auto &[m, c] : out.terms_) c *= s;
    return out;
  }
  MultiPoly times_monomial(const Monomial &mono) const {
    MultiPoly out(n_);
    for (const auto &[m, c] : terms_) {
      Monomial e = m;
      for (std::size_t i = 0; i < n_; ++i) e[i] += mono[i];
      out.terms_.emplace(std::move(e), c);
    }
    return out;
  }
  /// Divides every term by a monomial that divides all of them.
  MultiPoly divided_by_monomial(const Monomial &mono) const {
    MultiPoly out(n_);
    for (const auto &[m, c] : terms_) {
      Monomial e = m;
      for (std::size_t i = 0; i < n_; ++i) {
        e[i] -= mono[i];
        require(e[i] >= 0, ErrorKind::Internal, "monomial does not divide");
      }
      out.terms_.emplace(std::move(e), c);
    }
    return out;
  }
  /// Componentwise minimum of the exponents (the monomial content).
  Monomial monomial_content() const {
    if (terms_.empty()) return Monomial(n_, 0);
    Monomial g = terms_.begin()->first;
    for (const auto &[m, c] : terms_)
      for (std::size_t i = 0; i < n_; ++i) g[i] = std::min(g[i], m[i]);
    return g;
  }

  MultiPoly pow(unsigned e) const {
    MultiPoly result = constant(n_, CycloNumber(1)), base = *this;
    while (e) {
      if (e & 1u) result *= base;
      e >>= 1u;
      if (e) base *= base;
    }
    return result;
  }

  /// Quotient when `d` divides this polynomial exactly.
  std::optional<MultiPoly> exact_divide(const MultiPoly &d) const {
    check(d);
    if (d.zero()) fail(ErrorKind::DivisionByZero, "polynomial division by zero");
    MultiPoly rem = *this, q(n_);
    const Monomial &lm = d.leading_monomial();
    CycloNumber lc_inv = d.leading_coefficient().inv();
    Monomial e(n_);
    while (!rem.zero()) {
      const Monomial &rm = rem.leading_monomial();
      if (!divides(lm, rm)) return std::nullopt;
      for (std::size_t i = 0; i < n_; ++i) e[i] = rm[i] - lm[i];
      CycloNumber c = rem.leading_coefficient() * lc_inv;
      q.add_term(e, c);
      rem -= d.times_monomial(e).scaled(c);
    }
    return q;
  }

  /// Substitutes subs[i] for variable i.
  MultiPoly substitute(const std::vector<MultiPoly> &subs) const {
    require(subs.size() == n_, ErrorKind::ArityMismatch, "substitution arity mismatch");
    std::size_t out_n = subs.empty() ? 0 : subs[0].nvars();
    std::vector<std::vector<MultiPoly>> cache(n_);
    auto power_of = [&](std::size_t i, int e) -> const MultiPoly & {
      auto &c = cache[i];
      if (c.empty()) c.push_back(constant(out_n, CycloNumber(1)));
      while (static_cast<int>(c.size()) <= e) c.push_back(c.back() * subs[i]);
      return c[static_cast<std::size_t>(e)];
    };
    MultiPoly out(out_n);
    for (const auto &[m, c] : terms_) {
      MultiPoly t = constant(out_n, c);
      for (std::size_t i = 0; i < n_; ++i)
        if (m[i] > 0) t *= power_of(i, m[i]);
      out += t;
    }
    return out;
  }

  CycloNumber evaluate(const std::vector<CycloNumber> &x) const {
    require(x.size() == n_, ErrorKind::ArityMismatch, "evaluation arity mismatch");
    CycloNumber out(0);
    for (const auto &[m, c] : terms_) {
      CycloNumber t = c;
      for (std::size_t i = 0; i < n_; ++i)
        if (m[i] > 0) t *= x[i].pow(m[i]);
      out += t;
    }
    return out;
  }

  /// Re-embeds into a ring with a different variable count, keeping indices.
  MultiPoly with_nvars(std::size_t n) const {
    MultiPoly out(n);
    for (const auto &[m, c] : terms_) {
      Monomial e(n, 0);
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (i >= n) {
          require(m[i] == 0, ErrorKind::ArityMismatch, "variable out of range");
          continue;
        }
        e[i] = m[i];
      }
      out.terms_.emplace(std::move(e), c);
    }
    return out;
  }

  std::vector<CycloNumber> coefficient_list() const {
    std::vector<CycloNumber> out;
    for (const auto &[m, c] : terms_) out.push_back(c);
    return out;
  }

  friend bool operator==(const MultiPoly &a, const MultiPoly &b) {
    if (a.n_ != b.n_ || a.terms_.size() != b.terms_.size()) return false;
    auto ia = a.terms_.begin();
    for (auto ib = b.terms_.begin(); ib != b.terms_.end(); ++ia, ++ib)
      if (ia->first != ib->first || ia->second != ib->second) return false;
    return true;
  }
  friend bool operator!=(const MultiPoly &a, const MultiPoly &b) { return !(a == b); }

  /// Terms in descending graded-lex order as `c * x1^e1*...*xn^en`, with
  /// z = zeta_M. Variable names start at x<first_index>.
  std::string to_string(std::int64_t M, int first_index = 1) const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto &[m, c] : terms_) {
      std::string mono;
      for (std::size_t i = 0; i < n_; ++i) {
        if (m[i] == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += "x" + std::to_string(static_cast<int>(i) + first_index);
        if (m[i] > 1) mono += "^" + std::to_string(m[i]);
      }
      std::string cs = c.to_string(M);
      bool neg = false;
      bool compound = cs.find(' ') != std::string::npos;
      if (!compound && cs[0] == '-') {
        neg = true;
        cs = cs.substr(1);
      }
      std::string body;
      if (mono.empty()) body = compound && terms_.size() > 1 ? "(" + cs + ")" : cs;
      else if (cs == "1") body = mono;
      else body = (compound ? "(" + cs + ")" : cs) + " * " + mono;
      if (out.empty()) out = neg ? "-" + body : body;
      else out += (neg ? " - " : " + ") + body;
    }
    return out;
  }

  std::int64_t conductor() const {
    std::int64_t L = 1;
    for (const auto &[m, c] : terms_) L = std::lcm(L, c.conductor());
    return L;
  }

private:
  void check(const MultiPoly &o) const {
    require(n_ == o.n_, ErrorKind::ArityMismatch, "polynomials live in different rings");
  }

  std::size_t n_;
  Terms terms_;
};

} // namespace cremona
