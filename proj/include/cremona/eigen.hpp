#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cremona/cyclo.hpp"
#include "cremona/error.hpp"
#include "cremona/integer.hpp"

namespace cremona {

/// Univariate polynomial over Q(zeta), lowest degree first.
using UniPoly = std::vector<CycloNumber>;

inline void trim(UniPoly &p) {
  while (!p.empty() && p.back().zero()) p.pop_back();
}

inline CycloNumber evaluate(const UniPoly &p, const CycloNumber &x) {
  CycloNumber acc(0);
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

/// p / (x - r) for a root r.
inline UniPoly deflate(const UniPoly &p, const CycloNumber &r) {
  std::size_t d = p.size() - 1;
  UniPoly q(d);
  CycloNumber carry(0);
  for (std::size_t k = d; k-- > 0;) {
    carry = p[k + 1] + carry * r;
    q[k] = carry;
  }
  return q;
}

inline std::string format_unipoly(const UniPoly &p) {
  std::int64_t M = common_conductor(p);
  std::string out;
  for (std::size_t k = p.size(); k-- > 0;) {
    if (p[k].zero()) continue;
    std::string c = p[k].to_string(M);
    bool compound = c.find(' ') != std::string::npos;
    bool neg = !compound && c[0] == '-';
    if (neg) c = c.substr(1);
    std::string x = k == 0 ? "" : (k == 1 ? "x" : "x^" + std::to_string(k));
    std::string body;
    if (k == 0) body = compound ? "(" + c + ")" : c;
    else if (c == "1") body = x;
    else body = (compound ? "(" + c + ")" : c) + "*" + x;
    if (out.empty()) out = neg ? "-" + body : body;
    else out += (neg ? " - " : " + ") + body;
  }
  return out.empty() ? "0" : out;
}

struct Eigenvalue {
  CycloNumber value;
  int multiplicity;
};

/// Splits a monic polynomial into linear factors over Q(zeta_L), L a multiple
/// of `m`. Candidates are tried in order: `hints` (e.g. diagonal entries and
/// declared roots), then every (root of unity) * (rational) whose size is
/// allowed by the norm of the constant term. Anything left over is reported.
inline std::vector<Eigenvalue> eigen_split(UniPoly p, std::int64_t m,
                                           const std::vector<CycloNumber> &hints = {}) {
  trim(p);
  require(!p.empty() && p.back().is_one(), ErrorKind::InvalidArgument,
          "eigen_split expects a monic polynomial");
  std::vector<Eigenvalue> out;
  auto take = [&](const CycloNumber &r) {
    if (p.size() <= 1) return;
    int mult = 0;
    while (p.size() > 1 && evaluate(p, r).zero()) {
      p = deflate(p, r);
      ++mult;
    }
    if (mult == 0) return;
    for (auto &e : out)
      if (e.value == r) {
        e.multiplicity += mult;
        return;
      }
    out.push_back({r, mult});
  };
  for (const auto &h : hints) take(h);
  if (p.size() > 1 && p[0].zero()) take(CycloNumber(0));
  if (p.size() > 1) {
    std::int64_t L = std::lcm<std::int64_t>(2, std::lcm(m, common_conductor(p)));
    L = std::lcm<std::int64_t>(2, detail::normalize_modulus(L));
    std::int64_t F = detail::normalize_modulus(L);
    std::size_t phi = detail::euler_phi(F);
    std::size_t deg = p.size() - 1;
    // c clears denominators, so c * root is an algebraic integer
    Integer c = 1;
    for (const auto &coef : p) {
      CycloNumber lifted = coef.lifted(F);
      for (const auto &q : lifted.coords()) c = lcm(c, Integer(q.get_den()));
    }
    CycloNumber scaled0 = p[0] * CycloNumber(Integer(ipow(c, static_cast<unsigned long>(deg))));
    Rational N = scaled0.lifted(F).norm();
    require(N.get_den() == 1, ErrorKind::Internal, "norm of an integral element is not integral");
    auto fac = factorize(N.get_num());
    if (!fac.complete)
      fail(ErrorKind::UnsupportedSplitting, "cannot factor the norm " + N.get_str() + " of " + format_unipoly(p));
    std::vector<unsigned> caps;
    for (const auto &pp : fac.factors) caps.push_back(pp.exponent / static_cast<unsigned>(phi));
    std::vector<CycloNumber> roots;
    for (std::int64_t k = 0; k < L; ++k) roots.push_back(CycloNumber::root(L, k));
    for (const auto &r : divisors_with_caps(fac.factors, caps)) {
      CycloNumber mag(Rational(r, c));
      for (const auto &z : roots) {
        if (p.size() <= 1) break;
        take(mag * z);
      }
    }
  }
  if (p.size() > 1)
    fail(ErrorKind::UnsupportedSplitting,
         "factor " + format_unipoly(p) + " does not split into supported eigenvalues");
  return out;
}

} // namespace cremona
