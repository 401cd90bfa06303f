#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "cremona/cyclo.hpp"
#include "cremona/error.hpp"
#include "cremona/integer.hpp"
#include "cremona/matrix.hpp"

namespace cremona {

/// A free generator of the multiplicative group: a prime, or an abstract
/// symbol assumed independent of everything else.
struct Generator {
  bool is_prime = true;
  Integer prime;
  std::string symbol;

  static Generator of_prime(const Integer &p) { return {true, p, {}}; }
  static Generator of_symbol(std::string s) { return {false, 0, std::move(s)}; }

  std::string name() const { return is_prime ? prime.get_str() : symbol; }
  bool operator==(const Generator &o) const {
    return is_prime == o.is_prime && (is_prime ? prime == o.prime : symbol == o.symbol);
  }
};

/// Session field data: torsion modulus and the ordered generator list.
/// Primes are kept sorted ascending and precede symbols, which keep their
/// declaration order.
class FieldContext {
public:
  explicit FieldContext(std::int64_t m = 1) : m_(m) {
    require(m >= 1, ErrorKind::InvalidArgument, "modulus must be positive");
  }

  std::int64_t m() const { return m_; }
  const std::vector<Generator> &generators() const { return gens_; }
  std::size_t rank() const { return gens_.size(); }

  void promote_modulus(std::int64_t M) { m_ = std::lcm(m_, M); }

  std::size_t register_prime(const Integer &p) {
    for (std::size_t i = 0; i < gens_.size(); ++i)
      if (gens_[i].is_prime && gens_[i].prime == p) return i;
    auto it = std::find_if(gens_.begin(), gens_.end(), [&](const Generator &g) {
      return !g.is_prime || g.prime > p;
    });
    return static_cast<std::size_t>(gens_.insert(it, Generator::of_prime(p)) - gens_.begin());
  }

  std::size_t declare_symbol(const std::string &s) {
    for (std::size_t i = 0; i < gens_.size(); ++i)
      if (!gens_[i].is_prime && gens_[i].symbol == s) return i;
    gens_.push_back(Generator::of_symbol(s));
    return gens_.size() - 1;
  }

  std::optional<std::size_t> index_of_prime(const Integer &p) const {
    for (std::size_t i = 0; i < gens_.size(); ++i)
      if (gens_[i].is_prime && gens_[i].prime == p) return i;
    return std::nullopt;
  }
  std::optional<std::size_t> index_of_symbol(const std::string &s) const {
    for (std::size_t i = 0; i < gens_.size(); ++i)
      if (!gens_[i].is_prime && gens_[i].symbol == s) return i;
    return std::nullopt;
  }

private:
  std::int64_t m_;
  std::vector<Generator> gens_;
};

/// zeta_M^torsion * prod g_i^free_i
struct TorusElement {
  std::int64_t torsion = 0;
  std::vector<Integer> free;

  bool operator==(const TorusElement &o) const {
    return torsion == o.torsion && free == o.free;
  }
  bool operator!=(const TorusElement &o) const { return !(*this == o); }
};

/// A point of the torus; all entries share `modulus` and the generator list.
struct TorusVector {
  std::int64_t modulus = 1;
  std::vector<TorusElement> entries;

  std::size_t size() const { return entries.size(); }
  std::size_t rank() const { return entries.empty() ? 0 : entries[0].free.size(); }
  const TorusElement &operator[](std::size_t i) const { return entries[i]; }
  TorusElement &operator[](std::size_t i) { return entries[i]; }

  bool operator==(const TorusVector &o) const {
    return modulus == o.modulus && entries == o.entries;
  }
  bool operator!=(const TorusVector &o) const { return !(*this == o); }
};

inline TorusElement identity_element(std::size_t rank) {
  return TorusElement{0, std::vector<Integer>(rank, Integer(0))};
}

inline TorusElement mul(const TorusElement &a, const TorusElement &b, std::int64_t M) {
  TorusElement out = a;
  out.torsion = mod_pos(a.torsion + b.torsion, M);
  for (std::size_t i = 0; i < out.free.size(); ++i) out.free[i] += b.free[i];
  return out;
}

inline TorusElement power(const TorusElement &a, const Integer &e, std::int64_t M) {
  TorusElement out = a;
  out.torsion = to_i64(mod_pos(Integer(a.torsion) * e, Integer(M)));
  for (auto &f : out.free) f *= e;
  return out;
}

inline TorusElement inverse(const TorusElement &a, std::int64_t M) {
  return power(a, Integer(-1), M);
}

/// Re-expresses torsion over a modulus that is a multiple of the current one.
inline TorusVector with_modulus(TorusVector v, std::int64_t M) {
  require(M % v.modulus == 0, ErrorKind::InvalidArgument,
          "torsion modulus can only be refined to a multiple");
  std::int64_t s = M / v.modulus;
  for (auto &e : v.entries) e.torsion = mod_pos(e.torsion * s, M);
  v.modulus = M;
  return v;
}

inline TorusVector with_rank(TorusVector v, std::size_t rank) {
  for (auto &e : v.entries) {
    require(e.free.size() <= rank, ErrorKind::InvalidArgument,
            "cannot shrink generator list");
    e.free.resize(rank, Integer(0));
  }
  return v;
}

/// Brings two vectors onto a common modulus (lcm) and generator count.
inline void unify(TorusVector &a, TorusVector &b) {
  std::int64_t M = std::lcm(a.modulus, b.modulus);
  a = with_modulus(a, M);
  b = with_modulus(b, M);
  std::size_t r = std::max(a.rank(), b.rank());
  a = with_rank(a, r);
  b = with_rank(b, r);
}

/// A . mu: entry i is prod_j mu_j^{a_ij}.
inline TorusVector act(const IntMatrix &A, const TorusVector &mu) {
  require(A.rows() == mu.size() && A.cols() == mu.size(), ErrorKind::InvalidArgument,
          "action dimension mismatch");
  TorusVector out;
  out.modulus = mu.modulus;
  std::size_t r = mu.rank();
  for (std::size_t i = 0; i < A.rows(); ++i) {
    TorusElement e = identity_element(r);
    for (std::size_t j = 0; j < A.cols(); ++j)
      if (A(i, j) != 0) e = mul(e, power(mu[j], A(i, j), mu.modulus), mu.modulus);
    out.entries.push_back(std::move(e));
  }
  return out;
}

inline CycloNumber evaluate(const TorusElement &e, std::int64_t M, const FieldContext &ctx) {
  CycloNumber out = CycloNumber::root(M, e.torsion);
  for (std::size_t i = 0; i < e.free.size(); ++i) {
    if (e.free[i] == 0) continue;
    const Generator &g = ctx.generators().at(i);
    if (!g.is_prime)
      fail(ErrorKind::UnsupportedDecomposition,
           "symbol " + g.symbol + " has no value in the cyclotomic field");
    Integer p = ipow(g.prime, static_cast<unsigned long>(to_i64(abs(e.free[i]))));
    out *= sgn(e.free[i]) > 0 ? CycloNumber(p) : CycloNumber(Rational(1, 1) / Rational(p));
  }
  return out;
}

inline std::vector<CycloNumber> evaluate(const TorusVector &v, const FieldContext &ctx) {
  std::vector<CycloNumber> out;
  for (const auto &e : v.entries) out.push_back(evaluate(e, v.modulus, ctx));
  return out;
}

namespace detail {

struct SplitValue {
  std::int64_t modulus;  // M
  std::int64_t torsion;  // k, value = zeta_M^k * r
  Rational positive;     // r > 0
};

/// Writes a = zeta_M^k * r with r a positive rational, where M is the
/// session modulus or lcm(2, it).
inline SplitValue split_root_of_unity(const CycloNumber &a, std::int64_t m) {
  if (a.zero()) fail(ErrorKind::UnsupportedDecomposition, "zero has no torus coordinates");
  std::int64_t base = std::lcm(m, a.modulus());
  for (std::int64_t M : {base, std::lcm<std::int64_t>(2, base)}) {
    CycloNumber step = CycloNumber::root(M, -1);
    CycloNumber cur = a;
    for (std::int64_t k = 0; k < M; ++k) {
      if (cur.is_rational() && sgn(cur.rational_value()) > 0)
        return {M, k, cur.rational_value()};
      cur *= step;
    }
  }
  fail(ErrorKind::UnsupportedDecomposition,
       "value " + a.to_string() + " is not a root of unity times a positive rational");
}

} // namespace detail

/// Decomposes all values over one modulus and one generator list. Primes met
/// along the way are registered in the context; the context modulus may be
/// promoted.
inline TorusVector decompose_joint(const std::vector<CycloNumber> &values, FieldContext &ctx) {
  std::vector<detail::SplitValue> parts;
  std::vector<std::vector<PrimePower>> num_f, den_f;
  for (const auto &v : values) {
    auto s = detail::split_root_of_unity(v, ctx.m());
    ctx.promote_modulus(s.modulus);
    auto fn = factorize(s.positive.get_num());
    auto fd = factorize(s.positive.get_den());
    if (!fn.complete || !fd.complete)
      fail(ErrorKind::UnsupportedDecomposition, "could not factor " + s.positive.get_str());
    for (const auto &pp : fn.factors) ctx.register_prime(pp.prime);
    for (const auto &pp : fd.factors) ctx.register_prime(pp.prime);
    parts.push_back(s);
    num_f.push_back(fn.factors);
    den_f.push_back(fd.factors);
  }
  TorusVector out;
  out.modulus = ctx.m();
  for (std::size_t i = 0; i < parts.size(); ++i) {
    TorusElement e = identity_element(ctx.rank());
    e.torsion = mod_pos(parts[i].torsion * (ctx.m() / parts[i].modulus), ctx.m());
    for (const auto &pp : num_f[i]) e.free[*ctx.index_of_prime(pp.prime)] += pp.exponent;
    for (const auto &pp : den_f[i]) e.free[*ctx.index_of_prime(pp.prime)] -= pp.exponent;
    out.entries.push_back(std::move(e));
  }
  return out;
}

inline TorusElement decompose_multiplicative(const CycloNumber &lambda, FieldContext &ctx) {
  return decompose_joint({lambda}, ctx).entries.at(0);
}

inline std::string to_string(const TorusElement &e, std::int64_t M, const FieldContext &ctx) {
  std::string out;
  auto add = [&](const std::string &s) { out += (out.empty() ? "" : "*") + s; };
  if (e.torsion != 0) {
    add(M == 1 ? "1" : (e.torsion == 1 ? "z" : "z^" + std::to_string(e.torsion)));
  }
  for (std::size_t i = 0; i < e.free.size(); ++i) {
    if (e.free[i] == 0) continue;
    std::string g = i < ctx.rank() ? ctx.generators()[i].name() : "g?" + std::to_string(i);
    add(e.free[i] == 1 ? g : g + "^" + e.free[i].get_str());
  }
  return out.empty() ? "1" : out;
}

inline std::string to_string(const TorusVector &v, const FieldContext &ctx) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += to_string(v[i], v.modulus, ctx);
  }
  return out + ")";
}

} // namespace cremona
