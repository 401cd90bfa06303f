#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "cremona/error.hpp"
#include "cremona/integer.hpp"
#include "cremona/matrix.hpp"
#include "cremona/torus.hpp"

namespace cremona {

/// Fraction-free determinant.
inline Integer bareiss_determinant(IntMatrix a) {
  require(a.square(), ErrorKind::InvalidArgument, "determinant of non-square");
  std::size_t n = a.rows();
  if (n == 0) return 1;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      a.swap_rows(p, k);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer v = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        a(i, j) = v;
      }
      a(i, k) = 0;
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

inline bool is_unimodular(const IntMatrix &a) {
  return a.square() && abs(bareiss_determinant(a)) == 1;
}

struct HermiteResult {
  IntMatrix H, U; // U * A = H
};

/// Row-style Hermite normal form: echelon, positive pivots, entries above a
/// pivot reduced into [0, pivot), zero rows last.
inline HermiteResult hnf(const IntMatrix &A) {
  IntMatrix H = A, U = IntMatrix::identity(A.rows());
  std::size_t r = 0;
  auto row_sub = [&](std::size_t dst, std::size_t src, const Integer &q) {
    if (q == 0) return;
    for (std::size_t j = 0; j < H.cols(); ++j) H(dst, j) -= q * H(src, j);
    for (std::size_t j = 0; j < U.cols(); ++j) U(dst, j) -= q * U(src, j);
  };
  auto row_neg = [&](std::size_t i) {
    for (std::size_t j = 0; j < H.cols(); ++j) H(i, j) = -H(i, j);
    for (std::size_t j = 0; j < U.cols(); ++j) U(i, j) = -U(i, j);
  };
  for (std::size_t c = 0; c < H.cols() && r < H.rows(); ++c) {
    while (true) {
      std::size_t best = H.rows();
      for (std::size_t i = r; i < H.rows(); ++i)
        if (H(i, c) != 0 && (best == H.rows() || abs(H(i, c)) < abs(H(best, c)))) best = i;
      if (best == H.rows()) break;
      H.swap_rows(best, r);
      U.swap_rows(best, r);
      bool done = true;
      for (std::size_t i = r + 1; i < H.rows(); ++i) {
        if (H(i, c) == 0) continue;
        Integer q;
        mpz_tdiv_q(q.get_mpz_t(), H(i, c).get_mpz_t(), H(r, c).get_mpz_t());
        row_sub(i, r, q);
        if (H(i, c) != 0) done = false;
      }
      if (done) break;
    }
    if (H(r, c) == 0) continue;
    if (H(r, c) < 0) row_neg(r);
    for (std::size_t i = 0; i < r; ++i) row_sub(i, r, floor_div(H(i, c), H(r, c)));
    ++r;
  }
  return {H, U};
}

/// Number of nonzero rows of an echelon matrix.
inline std::size_t echelon_rank(const IntMatrix &H) {
  std::size_t r = 0;
  for (std::size_t i = 0; i < H.rows(); ++i) {
    bool nz = false;
    for (std::size_t j = 0; j < H.cols() && !nz; ++j) nz = H(i, j) != 0;
    if (nz) r = i + 1;
  }
  return r;
}

inline IntMatrix take_rows(const IntMatrix &A, std::size_t count) {
  IntMatrix out(count, A.cols());
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) out(i, j) = A(i, j);
  return out;
}

struct SmithResult {
  IntMatrix S, U, V; // U * A * V = S
  std::vector<Integer> diagonal() const {
    std::vector<Integer> d;
    for (std::size_t i = 0; i < std::min(S.rows(), S.cols()); ++i) d.push_back(S(i, i));
    return d;
  }
};

/// Smith normal form with non-negative diagonal d1 | d2 | ...
inline SmithResult snf(const IntMatrix &A) {
  IntMatrix S = A, U = IntMatrix::identity(A.rows()), V = IntMatrix::identity(A.cols());
  std::size_t m = S.rows(), n = S.cols();
  auto row_sub = [&](std::size_t dst, std::size_t src, const Integer &q) {
    for (std::size_t j = 0; j < n; ++j) S(dst, j) -= q * S(src, j);
    for (std::size_t j = 0; j < m; ++j) U(dst, j) -= q * U(src, j);
  };
  auto col_sub = [&](std::size_t dst, std::size_t src, const Integer &q) {
    for (std::size_t i = 0; i < m; ++i) S(i, dst) -= q * S(i, src);
    for (std::size_t i = 0; i < n; ++i) V(i, dst) -= q * V(i, src);
  };
  for (std::size_t t = 0; t < std::min(m, n); ++t) {
    while (true) {
      // smallest nonzero entry of the trailing block becomes the pivot
      std::size_t pi = m, pj = n;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j)
          if (S(i, j) != 0 && (pi == m || abs(S(i, j)) < abs(S(pi, pj)))) {
            pi = i;
            pj = j;
          }
      if (pi == m) break;
      S.swap_rows(pi, t);
      U.swap_rows(pi, t);
      S.swap_cols(pj, t);
      V.swap_cols(pj, t);
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (S(i, t) == 0) continue;
        Integer q;
        mpz_tdiv_q(q.get_mpz_t(), S(i, t).get_mpz_t(), S(t, t).get_mpz_t());
        row_sub(i, t, q);
        if (S(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (S(t, j) == 0) continue;
        Integer q;
        mpz_tdiv_q(q.get_mpz_t(), S(t, j).get_mpz_t(), S(t, t).get_mpz_t());
        col_sub(j, t, q);
        if (S(t, j) != 0) clean = false;
      }
      if (!clean) continue;
      // divisibility: fold an offending row into row t and repeat
      std::size_t bad = m;
      for (std::size_t i = t + 1; i < m && bad == m; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (S(i, j) % S(t, t) != 0) {
            bad = i;
            break;
          }
      if (bad == m) break;
      row_sub(t, bad, Integer(-1));
    }
    if (S(t, t) < 0) {
      for (std::size_t j = 0; j < n; ++j) S(t, j) = -S(t, j);
      for (std::size_t j = 0; j < m; ++j) U(t, j) = -U(t, j);
    }
  }
  return {S, U, V};
}

/// Inverse of a unimodular integer matrix via its Hermite form.
inline IntMatrix unimodular_inverse_int(const IntMatrix &A) {
  auto h = hnf(A);
  require(h.H.is_identity(), ErrorKind::NotInvertible, "matrix is not unimodular");
  return h.U;
}

/// An n x n unimodular matrix whose first k rows are R, if one exists.
inline std::optional<IntMatrix> unimodular_completable(const IntMatrix &R) {
  std::size_t k = R.rows(), n = R.cols();
  require(k <= n, ErrorKind::InvalidArgument, "more rows than columns");
  auto s = snf(R);
  for (std::size_t i = 0; i < k; ++i)
    if (s.S(i, i) != 1) return std::nullopt;
  // R = U^-1 [I | 0] V^-1, so diag(U^-1, I) V^-1 extends R
  IntMatrix Uinv = unimodular_inverse_int(s.U), Vinv = unimodular_inverse_int(s.V);
  IntMatrix D = IntMatrix::identity(n);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) D(i, j) = Uinv(i, j);
  return D * Vinv;
}

struct RelationLattice {
  IntMatrix basis;                           // rows, Hermite form
  std::vector<Integer> quotient_invariants;  // Smith invariants of Z^n / L, zeros for free part
};

/// Integer left kernel: rows x with x * A = 0, as a Hermite basis.
inline IntMatrix left_kernel(const IntMatrix &A) {
  auto h = hnf(A);
  std::size_t r = echelon_rank(h.H);
  IntMatrix K(h.U.rows() - r, h.U.cols());
  for (std::size_t i = r; i < h.U.rows(); ++i)
    for (std::size_t j = 0; j < h.U.cols(); ++j) K(i - r, j) = h.U(i, j);
  auto hk = hnf(K);
  return take_rows(hk.H, echelon_rank(hk.H));
}

/// Rows (torsion_i, free_i) for each entry.
inline IntMatrix exponent_matrix(const TorusVector &alpha) {
  IntMatrix E(alpha.size(), 1 + alpha.rank());
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    E(i, 0) = alpha[i].torsion;
    for (std::size_t j = 0; j < alpha.rank(); ++j) E(i, 1 + j) = alpha[i].free[j];
  }
  return E;
}

/// Kernel of t -> prod alpha_i^{t_i}.
inline RelationLattice relation_lattice(const TorusVector &alpha) {
  std::size_t n = alpha.size(), g = alpha.rank();
  IntMatrix E = exponent_matrix(alpha);
  IntMatrix A(n + 1, 1 + g);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= g; ++j) A(i, j) = E(i, j);
  A(n, 0) = alpha.modulus;
  IntMatrix K = left_kernel(A);
  IntMatrix P(K.rows(), n);
  for (std::size_t i = 0; i < K.rows(); ++i)
    for (std::size_t j = 0; j < n; ++j) P(i, j) = K(i, j);
  auto hp = hnf(P);
  RelationLattice out;
  out.basis = take_rows(hp.H, echelon_rank(hp.H));
  auto s = snf(out.basis);
  std::size_t rk = out.basis.rows();
  for (std::size_t i = 0; i < rk; ++i) out.quotient_invariants.push_back(s.S(i, i));
  for (std::size_t i = rk; i < n; ++i) out.quotient_invariants.push_back(0);
  return out;
}

/// Hermite basis of the subgroup generated by the entries, as a lattice in
/// Z x Z^g containing (M, 0, ..., 0).
inline IntMatrix generated_subgroup(const TorusVector &alpha) {
  IntMatrix E = exponent_matrix(alpha);
  IntMatrix A(E.rows() + 1, E.cols());
  for (std::size_t i = 0; i < E.rows(); ++i)
    for (std::size_t j = 0; j < E.cols(); ++j) A(i, j) = E(i, j);
  A(E.rows(), 0) = alpha.modulus;
  auto h = hnf(A);
  return take_rows(h.H, echelon_rank(h.H));
}

} // namespace cremona
