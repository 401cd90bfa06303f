#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cremona/cyclo.hpp"
#include "cremona/eigen.hpp"
#include "cremona/error.hpp"
#include "cremona/geomap.hpp"
#include "cremona/matrix.hpp"
#include "cremona/orbit.hpp"

namespace cremona {

struct JordanBlock {
  CycloNumber eigenvalue;
  int size = 1;
  bool operator==(const JordanBlock &o) const {
    return size == o.size && eigenvalue == o.eigenvalue;
  }
};

/// Conjugacy invariant of an affine map. Without a fixed point, blocks[0] is
/// the distinguished block (1, k1) of the action on polynomials of degree <= 1.
struct JordanData {
  std::vector<JordanBlock> blocks;
  bool has_fixed_point = true;
  int translation_block_size = 0;  // k1, or 0 with a fixed point

  bool operator==(const JordanData &o) const {
    return has_fixed_point == o.has_fixed_point &&
           translation_block_size == o.translation_block_size && blocks == o.blocks;
  }
  bool operator!=(const JordanData &o) const { return !(*this == o); }
};

/// Sort key for eigenvalues: conductor, then canonical text.
inline std::string eigen_key(const CycloNumber &x) {
  std::int64_t d = x.conductor();
  return std::to_string(d) + ":" + x.to_string(d);
}

inline void sort_blocks(std::vector<JordanBlock> &blocks) {
  std::stable_sort(blocks.begin(), blocks.end(), [](const JordanBlock &a, const JordanBlock &b) {
    std::string ka = eigen_key(a.eigenvalue), kb = eigen_key(b.eigenvalue);
    if (ka != kb) return ka < kb;
    return a.size > b.size;
  });
}

inline std::optional<CycloVector> fixed_point(const AffineMap &f) {
  std::size_t n = f.n();
  CycloMatrix M = f.A - CycloMatrix::identity(n);
  CycloVector rhs = f.b;
  for (auto &x : rhs) x = -x;
  return solve(M, rhs);
}

struct JordanChain {
  CycloNumber eigenvalue;
  std::vector<CycloVector> vectors;  // bottom (eigenvector) first
};

namespace detail {

inline CycloMatrix columns_to_matrix(const std::vector<CycloVector> &cols, std::size_t dim) {
  CycloMatrix M(dim, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < dim; ++i) M(i, j) = cols[j][i];
  return M;
}

inline std::size_t span_rank(const std::vector<CycloVector> &vs, std::size_t dim) {
  if (vs.empty()) return 0;
  return rank(columns_to_matrix(vs, dim));
}

inline CycloMatrix matrix_power(const CycloMatrix &N, std::size_t e) {
  CycloMatrix out = CycloMatrix::identity(N.rows());
  for (std::size_t i = 0; i < e; ++i) out = out * N;
  return out;
}

} // namespace detail

/// Jordan chains of T for one eigenvalue. If `forced_bottom` is given it must
/// be an eigenvector; the chain ending at it is built with maximal length and
/// returned first.
inline std::vector<JordanChain> jordan_chains(const CycloMatrix &T, const CycloNumber &lambda,
                                              int multiplicity,
                                              const std::optional<CycloVector> &forced_bottom = {}) {
  std::size_t dim = T.rows();
  CycloMatrix N = T - CycloMatrix::identity(dim).scaled(lambda);
  // kernels K_j of N^j until the generalized eigenspace is reached
  std::vector<std::vector<CycloVector>> K{{}};
  CycloMatrix Nj = CycloMatrix::identity(dim);
  while (static_cast<int>(K.back().size()) < multiplicity) {
    Nj = Nj * N;
    K.push_back(nullspace(Nj));
    require(K.size() <= dim + 1, ErrorKind::Internal, "generalized eigenspace did not stabilize");
  }
  std::size_t top = K.size() - 1;

  std::optional<CycloVector> forced_top;
  std::size_t forced_level = 0;
  if (forced_bottom) {
    // height of the bottom inside the generalized eigenspace
    for (std::size_t h = top; h >= 1; --h) {
      CycloMatrix B = detail::columns_to_matrix(K[h], dim);
      auto y = solve(detail::matrix_power(N, h - 1) * B, *forced_bottom);
      if (y) {
        forced_top = B * *y;
        forced_level = h;
        break;
      }
    }
    require(forced_top.has_value(), ErrorKind::Internal, "forced bottom is not an eigenvector");
  }

  std::vector<JordanChain> chains;
  std::vector<CycloVector> current;      // vectors at the current level, from longer chains
  std::vector<std::size_t> current_owner;
  for (std::size_t level = top; level >= 1; --level) {
    std::vector<CycloVector> span = K[level - 1];
    for (const auto &v : current) span.push_back(v);
    std::size_t r = detail::span_rank(span, dim);
    auto add_top = [&](const CycloVector &v) {
      span.push_back(v);
      std::size_t r2 = detail::span_rank(span, dim);
      if (r2 == r) {
        span.pop_back();
        return false;
      }
      r = r2;
      chains.push_back({lambda, {v}});
      current.push_back(v);
      current_owner.push_back(chains.size() - 1);
      return true;
    };
    if (forced_top && level == forced_level)
      require(add_top(*forced_top), ErrorKind::Internal, "forced chain is not a summand");
    for (const auto &v : K[level]) add_top(v);
    // descend
    std::vector<CycloVector> next;
    for (std::size_t i = 0; i < current.size(); ++i) {
      CycloVector w = N * current[i];
      chains[current_owner[i]].vectors.push_back(w);
      next.push_back(w);
    }
    if (level == 1) break;
    current = std::move(next);
  }
  // drop the zero image appended below each bottom, then order bottom first
  for (auto &c : chains) {
    c.vectors.pop_back();
    std::reverse(c.vectors.begin(), c.vectors.end());
  }
  if (forced_top) {
    auto it = std::find_if(chains.begin(), chains.end(), [&](const JordanChain &c) {
      return c.vectors.back() == *forced_top;
    });
    std::rotate(chains.begin(), it, it + 1);
  }
  return chains;
}

struct JordanResult {
  JordanData data;
  AffineMap conjugator;   // pi with pi o alpha o pi^-1 = normal_form
  AffineMap normal_form;
};

/// The affine map in normal form described by the data: transposed Jordan
/// blocks, plus the translation part when there is no fixed point.
inline AffineMap normal_form_of(const JordanData &d) {
  std::size_t n = 0;
  for (const auto &b : d.blocks) n += static_cast<std::size_t>(b.size);
  if (!d.has_fixed_point) n -= 1;
  CycloMatrix A(n, n);
  CycloVector b(n, CycloNumber(0));
  std::size_t pos = 0;
  for (std::size_t bi = 0; bi < d.blocks.size(); ++bi) {
    const auto &blk = d.blocks[bi];
    bool distinguished = !d.has_fixed_point && bi == 0;
    std::size_t len = static_cast<std::size_t>(blk.size) - (distinguished ? 1 : 0);
    for (std::size_t i = 0; i < len; ++i) {
      A(pos + i, pos + i) = blk.eigenvalue;
      if (i > 0) A(pos + i, pos + i - 1) = 1;
    }
    if (distinguished && len > 0) b[pos] = 1;
    pos += len;
  }
  return AffineMap(A, b);
}

inline JordanResult jordan_form(const AffineMap &alpha, std::int64_t m = 1,
                                const std::vector<CycloNumber> &declared_roots = {}) {
  std::size_t n = alpha.n();
  auto p = fixed_point(alpha);
  std::vector<CycloNumber> hints;
  for (std::size_t i = 0; i < n; ++i) hints.push_back(alpha.A(i, i));
  for (const auto &r : declared_roots) hints.push_back(r);

  JordanResult res;
  if (p) {
    CycloMatrix T = alpha.A.transpose();
    auto eig = eigen_split(charpoly(T), m, hints);
    std::vector<JordanChain> all;
    for (const auto &e : eig) {
      auto cs = jordan_chains(T, e.value, e.multiplicity);
      all.insert(all.end(), cs.begin(), cs.end());
    }
    std::stable_sort(all.begin(), all.end(), [](const JordanChain &a, const JordanChain &b) {
      std::string ka = eigen_key(a.eigenvalue), kb = eigen_key(b.eigenvalue);
      if (ka != kb) return ka < kb;
      return a.vectors.size() > b.vectors.size();
    });
    CycloMatrix P(n, n);
    CycloVector c(n);
    std::size_t row = 0;
    for (const auto &ch : all) {
      res.data.blocks.push_back({ch.eigenvalue, static_cast<int>(ch.vectors.size())});
      for (const auto &v : ch.vectors) {
        CycloNumber off(0);
        for (std::size_t j = 0; j < n; ++j) {
          P(row, j) = v[j];
          off -= v[j] * (*p)[j];
        }
        c[row++] = off;
      }
    }
    res.data.has_fixed_point = true;
    res.conjugator = AffineMap(P, c);
  } else {
    // alpha^* on (1, X_1, ..., X_n)
    CycloMatrix L(n + 1, n + 1);
    L(0, 0) = 1;
    for (std::size_t j = 0; j < n; ++j) {
      L(0, j + 1) = alpha.b[j];
      for (std::size_t i = 0; i < n; ++i) L(i + 1, j + 1) = alpha.A(j, i);
    }
    hints.insert(hints.begin(), CycloNumber(1));
    auto eig = eigen_split(charpoly(L), m, hints);
    CycloVector e0(n + 1, CycloNumber(0));
    e0[0] = 1;
    std::vector<JordanChain> all;
    JordanChain dist;
    for (const auto &e : eig) {
      bool is_one = e.value.is_one();
      auto cs = jordan_chains(L, e.value, e.multiplicity,
                              is_one ? std::optional<CycloVector>(e0) : std::nullopt);
      if (is_one) {
        dist = cs.front();
        cs.erase(cs.begin());
      }
      all.insert(all.end(), cs.begin(), cs.end());
    }
    std::stable_sort(all.begin(), all.end(), [](const JordanChain &a, const JordanChain &b) {
      std::string ka = eigen_key(a.eigenvalue), kb = eigen_key(b.eigenvalue);
      if (ka != kb) return ka < kb;
      return a.vectors.size() > b.vectors.size();
    });
    require(dist.vectors.size() >= 2 && dist.vectors[0] == e0, ErrorKind::Internal,
            "translation chain is malformed");
    res.data.has_fixed_point = false;
    res.data.translation_block_size = static_cast<int>(dist.vectors.size());
    res.data.blocks.push_back({CycloNumber(1), static_cast<int>(dist.vectors.size())});
    CycloMatrix P(n, n);
    CycloVector c(n);
    std::size_t row = 0;
    auto emit = [&](const CycloVector &v) {
      c[row] = v[0];
      for (std::size_t j = 0; j < n; ++j) P(row, j) = v[j + 1];
      ++row;
    };
    for (std::size_t i = 1; i < dist.vectors.size(); ++i) emit(dist.vectors[i]);
    for (const auto &ch : all) {
      res.data.blocks.push_back({ch.eigenvalue, static_cast<int>(ch.vectors.size())});
      for (const auto &v : ch.vectors) emit(v);
    }
    res.conjugator = AffineMap(P, c);
  }
  res.normal_form = normal_form_of(res.data);
  if (alpha == res.normal_form) res.conjugator = AffineMap::identity(n);
  require(compose(res.conjugator, alpha) == compose(res.normal_form, res.conjugator),
          ErrorKind::Internal, "Jordan conjugator failed its own check");
  return res;
}

struct Decision {
  Verdict verdict = Verdict::NotConjugate;
  MapChain certificate;
  std::string reason;
};

/// Conjugacy in Aff(n): equal Jordan data. Certificate [pi_alpha, pi_beta^-1].
inline Decision aff_conjugate_decision(const AffineMap &alpha, const AffineMap &beta,
                                          std::int64_t m = 1) {
  require(alpha.n() == beta.n(), ErrorKind::ArityMismatch, "maps act on different spaces");
  Decision out;
  out.certificate = MapChain{GroupTag::Aff, alpha.n(), {}};
  auto ja = jordan_form(alpha, m), jb = jordan_form(beta, m);
  if (ja.data.has_fixed_point != jb.data.has_fixed_point) {
    out.reason = "fixed point dichotomy differs";
    return out;
  }
  if (ja.data != jb.data) {
    out.reason = "Jordan data differ";
    return out;
  }
  out.verdict = Verdict::Conjugate;
  out.certificate.push(ja.conjugator);
  out.certificate.push(jb.conjugator, Direction::Inverse);
  return out;
}

} // namespace cremona
