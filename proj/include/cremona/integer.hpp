#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "cremona/error.hpp"

namespace cremona {

using Integer = mpz_class;
using Rational = mpq_class;

inline bool is_zero(const Integer &x) { return sgn(x) == 0; }
inline bool is_zero(const Rational &x) { return sgn(x) == 0; }

struct ExtendedGcd {
  Integer g, s, t; // g = s*a + t*b, g >= 0
};

inline ExtendedGcd gcdext(const Integer &a, const Integer &b) {
  ExtendedGcd r;
  mpz_gcdext(r.g.get_mpz_t(), r.s.get_mpz_t(), r.t.get_mpz_t(), a.get_mpz_t(),
             b.get_mpz_t());
  return r;
}

inline Integer floor_div(const Integer &a, const Integer &b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

/// Least non-negative residue; modulus must be positive.
inline Integer mod_pos(const Integer &a, const Integer &m) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline std::int64_t mod_pos(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

inline std::int64_t to_i64(const Integer &x) {
  require(mpz_fits_slong_p(x.get_mpz_t()) != 0, ErrorKind::InvalidArgument,
          "integer does not fit in 64 bits");
  return x.get_si();
}

inline std::int64_t lcm_i64(std::int64_t a, std::int64_t b) {
  return std::lcm(a, b);
}

inline Integer ipow(const Integer &base, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

/// Inverse of a modulo m, or 0 when gcd(a, m) != 1 (m > 1).
inline Integer inverse_mod(const Integer &a, const Integer &m) {
  Integer r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) return 0;
  return r;
}

struct PrimePower {
  Integer prime;
  unsigned exponent;
};

/// Factorization of |n| for n != 0. Trial division up to `trial_limit`; a
/// leftover cofactor is returned as a single "prime" entry when it passes a
/// probabilistic primality test, and with `complete = false` otherwise.
struct Factorization {
  std::vector<PrimePower> factors;
  bool complete = true;
};

inline Factorization factorize(Integer n, unsigned long trial_limit = 1000000) {
  Factorization out;
  n = abs(n);
  require(!is_zero(n), ErrorKind::InvalidArgument, "cannot factor zero");
  auto take = [&](const Integer &p) {
    unsigned e = 0;
    while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t()) != 0) {
      n /= p;
      ++e;
    }
    if (e > 0) out.factors.push_back({p, e});
  };
  take(2);
  take(3);
  for (unsigned long d = 5; d <= trial_limit; d += 6) {
    Integer p1 = d, p2 = d + 2;
    if (p1 * p1 > n) break;
    take(p1);
    take(p2);
  }
  if (n > 1) {
    if (mpz_probab_prime_p(n.get_mpz_t(), 30) == 0) out.complete = false;
    out.factors.push_back({n, 1});
  }
  return out;
}

/// Exact divisors of n enumerated from a factorization with per-prime exponent
/// caps `caps[i]` (the caps must not exceed the actual exponents).
inline std::vector<Integer> divisors_with_caps(const std::vector<PrimePower> &fs,
                                               const std::vector<unsigned> &caps) {
  std::vector<Integer> out{1};
  for (std::size_t i = 0; i < fs.size(); ++i) {
    std::size_t base = out.size();
    Integer pk = 1;
    for (unsigned e = 1; e <= caps[i]; ++e) {
      pk *= fs[i].prime;
      for (std::size_t j = 0; j < base; ++j) out.push_back(out[j] * pk);
    }
  }
  return out;
}

inline std::string to_string(const Integer &x) { return x.get_str(); }
inline std::string to_string(const Rational &x) { return x.get_str(); }

} // namespace cremona
