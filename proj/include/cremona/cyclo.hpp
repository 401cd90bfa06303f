#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "cremona/error.hpp"
#include "cremona/integer.hpp"
#include "cremona/matrix.hpp"

namespace cremona {

namespace detail {

/// Q(zeta_m) is also Q(zeta_{m/2}) when m = 2 mod 4; we never store such m.
inline std::int64_t normalize_modulus(std::int64_t m) {
  require(m >= 1, ErrorKind::InvalidArgument, "modulus must be positive");
  return (m % 4 == 2) ? m / 2 : m;
}

inline std::vector<std::int64_t> divisors(std::int64_t m) {
  std::vector<std::int64_t> lo, hi;
  for (std::int64_t d = 1; d * d <= m; ++d) {
    if (m % d) continue;
    lo.push_back(d);
    if (d * d != m) hi.push_back(m / d);
  }
  lo.insert(lo.end(), hi.rbegin(), hi.rend());
  return lo;
}

inline std::vector<std::int64_t> prime_divisors(std::int64_t m) {
  std::vector<std::int64_t> out;
  for (std::int64_t p = 2; p * p <= m; ++p) {
    if (m % p) continue;
    out.push_back(p);
    while (m % p == 0) m /= p;
  }
  if (m > 1) out.push_back(m);
  return out;
}

struct CycloRing {
  std::int64_t m = 1;
  std::size_t phi = 1;
  std::vector<Integer> phi_poly;              // monic, low degree first
  std::vector<std::vector<Rational>> powers;  // x^k mod Phi_m for 0 <= k < m
};

inline std::vector<Integer> cyclotomic_polynomial_uncached(std::int64_t m);

inline const std::vector<Integer> &cyclotomic_polynomial(std::int64_t m) {
  static std::mutex mu;
  static std::map<std::int64_t, std::unique_ptr<std::vector<Integer>>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it != cache.end()) return *it->second;
  }
  auto poly = std::make_unique<std::vector<Integer>>(
      cyclotomic_polynomial_uncached(m));
  std::lock_guard<std::mutex> lock(mu);
  auto [it, inserted] = cache.emplace(m, std::move(poly));
  return *it->second;
}

inline std::vector<Integer> cyclotomic_polynomial_uncached(std::int64_t m) {
  std::vector<Integer> num(static_cast<std::size_t>(m) + 1, Integer(0));
  num[0] = -1;
  num[static_cast<std::size_t>(m)] = 1;
  for (auto d : divisors(m)) {
    if (d == m) continue;
    const auto &den = cyclotomic_polynomial(d);
    // exact division by a monic polynomial
    std::size_t dn = den.size() - 1;
    std::vector<Integer> q(num.size() - dn, Integer(0));
    for (std::size_t k = num.size() - 1; k + 1 > dn; --k) {
      Integer c = num[k];
      if (c != 0) {
        q[k - dn] = c;
        for (std::size_t j = 0; j <= dn; ++j) num[k - dn + j] -= c * den[j];
      }
      if (k == dn) break;
    }
    num = std::move(q);
  }
  return num;
}

inline CycloRing build_ring(std::int64_t m) {
  CycloRing r;
  r.m = m;
  r.phi_poly = cyclotomic_polynomial(m);
  r.phi = r.phi_poly.size() - 1;
  r.powers.reserve(static_cast<std::size_t>(m));
  std::vector<Rational> v(r.phi, Rational(0));
  v[0] = 1;
  for (std::int64_t k = 0; k < m; ++k) {
    r.powers.push_back(v);
    // multiply by x and reduce by the monic Phi_m
    Rational top = v[r.phi - 1];
    for (std::size_t i = r.phi - 1; i > 0; --i) v[i] = v[i - 1];
    v[0] = 0;
    if (top != 0)
      for (std::size_t i = 0; i < r.phi; ++i) v[i] -= top * r.phi_poly[i];
  }
  return r;
}

inline const CycloRing &ring(std::int64_t m) {
  static std::mutex mu;
  static std::map<std::int64_t, std::unique_ptr<CycloRing>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it != cache.end()) return *it->second;
  }
  auto built = std::make_unique<CycloRing>(build_ring(m));
  std::lock_guard<std::mutex> lock(mu);
  auto [it, inserted] = cache.emplace(m, std::move(built));
  return *it->second;
}

inline std::size_t euler_phi(std::int64_t m) { return ring(normalize_modulus(m)).phi; }

} // namespace detail

/// Exact element of Q(zeta_m), stored in the power basis modulo Phi_m.
/// Operands with different m are lifted to the lcm of their moduli; results
/// that are rational are demoted to m = 1.
class CycloNumber {
public:
  CycloNumber() : m_(1), c_{Rational(0)} {}
  CycloNumber(int v) : m_(1), c_{Rational(v)} {}
  CycloNumber(long v) : m_(1), c_{Rational(v)} {}
  CycloNumber(const Integer &v) : m_(1), c_{Rational(v)} {}
  CycloNumber(const Rational &v) : m_(1), c_{v} { c_[0].canonicalize(); }

  /// zeta_order^k with zeta_order = exp(2 pi i / order).
  static CycloNumber root(std::int64_t order, std::int64_t k) {
    require(order >= 1, ErrorKind::InvalidArgument, "root order must be positive");
    k = mod_pos(k, order);
    if (order % 4 == 2) {
      // zeta_{2h} = -zeta_h^{(h+1)/2}
      std::int64_t h = order / 2;
      CycloNumber r = root(h, mod_pos(k * ((h + 1) / 2), h));
      return (k % 2) ? -r : r;
    }
    const auto &R = detail::ring(order);
    CycloNumber out;
    out.m_ = order;
    out.c_ = R.powers[static_cast<std::size_t>(k)];
    out.tidy();
    return out;
  }

  /// Builds sum coords[i] * zeta_m^i for any m (not necessarily normalized).
  static CycloNumber from_coords(std::int64_t m, const std::vector<Rational> &coords) {
    std::int64_t mn = detail::normalize_modulus(m);
    if (mn == m) {
      const auto &R = detail::ring(m);
      require(coords.size() == R.phi, ErrorKind::InvalidArgument,
              "coordinate vector has wrong length");
      CycloNumber out;
      out.m_ = m;
      out.c_ = coords;
      out.tidy();
      return out;
    }
    CycloNumber out;
    for (std::size_t i = 0; i < coords.size(); ++i)
      if (coords[i] != 0)
        out += root(m, static_cast<std::int64_t>(i)) * CycloNumber(coords[i]);
    return out;
  }

  std::int64_t modulus() const { return m_; }
  const std::vector<Rational> &coords() const { return c_; }

  bool zero() const {
    for (const auto &x : c_)
      if (x != 0) return false;
    return true;
  }
  bool is_rational() const { return m_ == 1; }
  const Rational &rational_value() const {
    require(m_ == 1, ErrorKind::InvalidArgument, "value is not rational");
    return c_[0];
  }
  bool is_one() const { return m_ == 1 && c_[0] == 1; }

  CycloNumber lifted(std::int64_t L) const {
    if (L == m_) return *this;
    require(L % m_ == 0 && detail::normalize_modulus(L) == L,
            ErrorKind::Internal, "bad lift modulus");
    const auto &R = detail::ring(L);
    CycloNumber out;
    out.m_ = L;
    out.c_.assign(R.phi, Rational(0));
    std::int64_t step = L / m_;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      const auto &p = R.powers[static_cast<std::size_t>((static_cast<std::int64_t>(i) * step) % L)];
      for (std::size_t j = 0; j < R.phi; ++j)
        if (p[j] != 0) out.c_[j] += c_[i] * p[j];
    }
    return out;
  }

  CycloNumber operator-() const {
    CycloNumber out = *this;
    for (auto &x : out.c_) x = -x;
    return out;
  }
  CycloNumber &operator+=(const CycloNumber &o) { return *this = *this + o; }
  CycloNumber &operator-=(const CycloNumber &o) { return *this = *this - o; }
  CycloNumber &operator*=(const CycloNumber &o) { return *this = *this * o; }
  CycloNumber &operator/=(const CycloNumber &o) { return *this = *this / o; }

  friend CycloNumber operator+(const CycloNumber &a, const CycloNumber &b) {
    if (a.m_ == b.m_) {
      CycloNumber out = a;
      for (std::size_t i = 0; i < out.c_.size(); ++i) out.c_[i] += b.c_[i];
      out.tidy();
      return out;
    }
    std::int64_t L = std::lcm(a.m_, b.m_);
    return a.lifted(L) + b.lifted(L);
  }
  friend CycloNumber operator-(const CycloNumber &a, const CycloNumber &b) {
    return a + (-b);
  }
  friend CycloNumber operator*(const CycloNumber &a, const CycloNumber &b) {
    if (a.m_ == 1 || b.m_ == 1) {
      const CycloNumber &s = a.m_ == 1 ? a : b;
      CycloNumber out = a.m_ == 1 ? b : a;
      const Rational &r = s.c_[0];
      for (auto &x : out.c_) x *= r;
      out.tidy();
      return out;
    }
    if (a.m_ != b.m_) {
      std::int64_t L = std::lcm(a.m_, b.m_);
      return a.lifted(L) * b.lifted(L);
    }
    const auto &R = detail::ring(a.m_);
    std::vector<Rational> conv(2 * R.phi - 1, Rational(0));
    for (std::size_t i = 0; i < R.phi; ++i) {
      if (a.c_[i] == 0) continue;
      for (std::size_t j = 0; j < R.phi; ++j)
        if (b.c_[j] != 0) conv[i + j] += a.c_[i] * b.c_[j];
    }
    CycloNumber out;
    out.m_ = a.m_;
    out.c_.assign(R.phi, Rational(0));
    for (std::size_t k = 0; k < conv.size(); ++k) {
      if (conv[k] == 0) continue;
      if (k < R.phi) {
        out.c_[k] += conv[k];
        continue;
      }
      const auto &p = R.powers[k % static_cast<std::size_t>(a.m_)];
      for (std::size_t j = 0; j < R.phi; ++j)
        if (p[j] != 0) out.c_[j] += conv[k] * p[j];
    }
    out.tidy();
    return out;
  }
  friend CycloNumber operator/(const CycloNumber &a, const CycloNumber &b) {
    return a * b.inv();
  }

  /// Matrix of multiplication by this element in the power basis.
  RatMatrix multiplication_matrix() const {
    const auto &R = detail::ring(m_);
    RatMatrix mat(R.phi, R.phi);
    for (std::size_t j = 0; j < R.phi; ++j) {
      CycloNumber col = *this * root(m_, static_cast<std::int64_t>(j));
      col = col.lifted(m_);
      for (std::size_t i = 0; i < R.phi; ++i) mat(i, j) = col.c_[i];
    }
    return mat;
  }

  CycloNumber inv() const {
    if (zero()) fail(ErrorKind::DivisionByZero, "inverse of zero");
    if (m_ == 1) return CycloNumber(Rational(1) / c_[0]);
    std::vector<Rational> e(c_.size(), Rational(0));
    e[0] = 1;
    auto sol = solve(multiplication_matrix(), e);
    require(sol.has_value(), ErrorKind::Internal, "singular multiplication matrix");
    return from_coords(m_, *sol);
  }

  /// Field norm down to Q relative to the stored modulus.
  Rational norm() const {
    if (m_ == 1) return c_[0];
    return determinant(multiplication_matrix());
  }

  CycloNumber pow(std::int64_t e) const {
    if (e < 0) return inv().pow(-e);
    CycloNumber result(1), base = *this;
    while (e > 0) {
      if (e & 1) result *= base;
      e >>= 1;
      if (e) base *= base;
    }
    return result;
  }

  friend bool operator==(const CycloNumber &a, const CycloNumber &b) {
    if (a.m_ == b.m_) return a.c_ == b.c_;
    std::int64_t L = std::lcm(a.m_, b.m_);
    return a.lifted(L).c_ == b.lifted(L).c_;
  }
  friend bool operator!=(const CycloNumber &a, const CycloNumber &b) {
    return !(a == b);
  }

  /// Coordinates in the power basis of zeta_M, if this element lies in Q(zeta_M).
  std::optional<std::vector<Rational>> coords_at(std::int64_t M) const {
    std::int64_t Mn = detail::normalize_modulus(M);
    if (Mn == M && M % m_ == 0) return lifted(M).c_;
    std::int64_t L = std::lcm(Mn, m_);
    std::size_t phiM = detail::euler_phi(M);
    const auto &R = detail::ring(L);
    RatMatrix basis(R.phi, phiM);
    for (std::size_t i = 0; i < phiM; ++i) {
      auto b = root(M, static_cast<std::int64_t>(i)).lifted(L);
      for (std::size_t j = 0; j < R.phi; ++j) basis(j, i) = b.c_[j];
    }
    auto sol = solve(basis, lifted(L).c_);
    if (!sol) return std::nullopt;
    return sol;
  }

  /// Least modulus d (d != 2 mod 4) with this element in Q(zeta_d).
  std::int64_t conductor() const {
    std::int64_t d = m_;
    bool shrunk = true;
    while (shrunk && d > 1) {
      shrunk = false;
      for (auto p : detail::prime_divisors(d)) {
        std::int64_t e = detail::normalize_modulus(d / p);
        if (e == d) continue;
        if (coords_at(e)) {
          d = e;
          shrunk = true;
          break;
        }
      }
    }
    return d;
  }

  /// Canonical text `a0 + a1*z + a2*z^2 ...` where z = zeta_M.
  std::string to_string(std::int64_t M) const {
    auto cs = coords_at(M);
    require(cs.has_value(), ErrorKind::InvalidArgument,
            "value does not lie in the requested cyclotomic field");
    return format_coords(*cs);
  }
  std::string to_string() const { return to_string(conductor()); }

  static std::string format_coords(const std::vector<Rational> &cs) {
    std::string out;
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const Rational &c = cs[i];
      if (c == 0) continue;
      std::string mag;
      bool neg = sgn(c) < 0;
      Rational a = neg ? Rational(-c) : c;
      std::string zpart = i == 0 ? "" : (i == 1 ? "z" : "z^" + std::to_string(i));
      if (i == 0) mag = a.get_str();
      else if (a == 1) mag = zpart;
      else mag = a.get_str() + "*" + zpart;
      if (out.empty()) out = neg ? "-" + mag : mag;
      else out += (neg ? " - " : " + ") + mag;
    }
    return out.empty() ? "0" : out;
  }

private:
  void tidy() {
    for (auto &x : c_) x.canonicalize();
    if (m_ == 1) return;
    for (std::size_t i = 1; i < c_.size(); ++i)
      if (c_[i] != 0) return;
    Rational v = c_[0];
    m_ = 1;
    c_.assign(1, v);
  }

  std::int64_t m_;
  std::vector<Rational> c_;
};

inline bool is_zero(const CycloNumber &x) { return x.zero(); }

inline std::string to_string(const CycloNumber &x) { return x.to_string(); }

/// Least d >= 1 with a^d = 1, searching divisors of lcm(2, m).
inline std::optional<std::int64_t> root_of_unity_order(const CycloNumber &a) {
  if (a.zero()) fail(ErrorKind::DivisionByZero, "order of zero");
  std::int64_t L = std::lcm<std::int64_t>(2, a.modulus());
  for (auto d : detail::divisors(L))
    if (a.pow(d).is_one()) return d;
  return std::nullopt;
}

/// Common modulus for printing a collection of values.
template <class Range> std::int64_t common_conductor(const Range &values) {
  std::int64_t L = 1;
  for (const CycloNumber &v : values) L = std::lcm(L, v.conductor());
  return L;
}

} // namespace cremona
