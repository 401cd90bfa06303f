#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cremona/bir.hpp"
#include "cremona/eigen.hpp"
#include "cremona/error.hpp"
#include "cremona/geomap.hpp"
#include "cremona/jordan.hpp"

namespace cremona {

/// Representative scaled so its first nonzero entry (row-major) is 1.
inline CycloMatrix normalize_projective(const CycloMatrix &R) {
  require(R.square() && R.rows() >= 2, ErrorKind::InvalidArgument,
          "projective representative must be square of size >= 2");
  require(!determinant(R).zero(), ErrorKind::NonInvertibleLinearPart,
          "projective representative is singular");
  for (std::size_t i = 0; i < R.rows(); ++i)
    for (std::size_t j = 0; j < R.cols(); ++j)
      if (!R(i, j).zero()) return R.scaled(R(i, j).inv());
  fail(ErrorKind::Internal, "zero representative");
}

/// nu_i phi nu_i^-1 on the chart x_i != 0, coordinates in increasing order of
/// the remaining homogeneous indices.
inline RationalMapComponents chart_restrict(const CycloMatrix &R, std::size_t i) {
  std::size_t d = R.rows();
  require(i < d, ErrorKind::InvalidArgument, "chart index out of range");
  std::vector<std::size_t> order{i};
  for (std::size_t j = 0; j < d; ++j)
    if (j != i) order.push_back(j);
  CycloMatrix Q(d, d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) Q(r, c) = R(order[r], order[c]);
  return components(ProjectiveLinearMap(Q));
}

struct ProjReduction {
  CycloMatrix representative;  // normalized input
  CycloNumber base_eigenvalue;  // of the input matrix, not the representative
  CycloMatrix S;               // S R S^-1 preserves the chart x0 != 0
  AffineMap affine;            // the induced map there
};

/// Chooses the invariant hyperplane w . x = 0 of a left eigenvector w and
/// moves it to x0 = 0.
inline ProjReduction reduce_projective(const CycloMatrix &input, std::int64_t m = 1) {
  ProjReduction out;
  out.representative = normalize_projective(input);
  // rescaling by a leading entry can leave the supported eigenvalue fragment,
  // and the induced affine map does not depend on the scale
  const CycloMatrix &R = input;
  std::size_t d = R.rows(), n = d - 1;
  CycloMatrix Rt = R.transpose();
  std::vector<CycloNumber> hints;
  for (std::size_t i = 0; i < d; ++i) hints.push_back(R(i, i));
  auto eig = eigen_split(charpoly(Rt), m, hints);

  // forced choice: an eigenvalue carrying a non-trivial block; otherwise the
  // largest multiplicity, ties by key
  std::optional<CycloNumber> chosen;
  std::string chosen_key;
  for (const auto &e : eig) {
    std::size_t geo = nullspace(Rt - CycloMatrix::identity(d).scaled(e.value)).size();
    if (geo < static_cast<std::size_t>(e.multiplicity)) {
      std::string k = eigen_key(e.value);
      if (!chosen || k < chosen_key) {
        chosen = e.value;
        chosen_key = k;
      }
    }
  }
  if (!chosen) {
    int best = 0;
    for (const auto &e : eig) {
      std::string k = eigen_key(e.value);
      if (e.multiplicity > best || (e.multiplicity == best && k < chosen_key)) {
        best = e.multiplicity;
        chosen = e.value;
        chosen_key = k;
      }
    }
  }
  out.base_eigenvalue = *chosen;
  auto ker = nullspace(Rt - CycloMatrix::identity(d).scaled(*chosen));
  require(!ker.empty(), ErrorKind::Internal, "eigenvalue without eigenvector");
  const CycloVector &w = ker.front();
  std::size_t pivot = 0;
  while (w[pivot].zero()) ++pivot;
  out.S = CycloMatrix(d, d);
  for (std::size_t j = 0; j < d; ++j) out.S(0, j) = w[j];
  std::size_t row = 1;
  for (std::size_t j = 0; j < d; ++j)
    if (j != pivot) out.S(row++, j) = 1;
  auto Sinv = inverse(out.S);
  require(Sinv.has_value(), ErrorKind::Internal, "chart change is singular");
  CycloMatrix Rp = out.S * R * *Sinv;
  CycloNumber scale = Rp(0, 0).inv();
  CycloMatrix A(n, n);
  CycloVector b(n);
  for (std::size_t i = 0; i < n; ++i) {
    require(Rp(0, i + 1).zero(), ErrorKind::Internal, "hyperplane is not invariant");
    b[i] = Rp(i + 1, 0) * scale;
    for (std::size_t j = 0; j < n; ++j) A(i, j) = Rp(i + 1, j + 1) * scale;
  }
  out.affine = AffineMap(A, b);
  return out;
}

struct ProjCanonicalForm {
  ProjReduction reduction;
  BirCanonicalForm form;
  MapChain conjugator;  // in the chart x0 != 0
};

inline ProjCanonicalForm proj_canonical_form(const CycloMatrix &R, std::int64_t m = 1) {
  ProjCanonicalForm out;
  out.reduction = reduce_projective(R, m);
  out.form = bir_canonical_form(out.reduction.affine, m);
  std::size_t n = R.rows() - 1;
  out.conjugator = MapChain{GroupTag::Bir, n, {}};
  if (!out.reduction.S.is_identity()) out.conjugator.push(ProjectiveLinearMap(out.reduction.S));
  out.conjugator.append(out.form.conjugator);
  return out;
}

/// Conjugacy in Bir(P^n); the certificate conjugates the chart-0 restrictions.
inline Decision proj_conjugate_decision(const CycloMatrix &M, const CycloMatrix &N,
                                        std::int64_t m = 1, std::int64_t search_bound = 10000) {
  require(M.rows() == N.rows(), ErrorKind::ArityMismatch, "maps act on different spaces");
  std::size_t n = M.rows() - 1;
  auto rm = reduce_projective(M, m), rn = reduce_projective(N, m);
  Decision inner = bir_conjugate_decision(rm.affine, rn.affine, m, search_bound);
  Decision out;
  out.verdict = inner.verdict;
  out.reason = inner.reason;
  out.certificate = MapChain{GroupTag::Bir, n, {}};
  if (inner.verdict != Verdict::Conjugate) return out;
  if (!rm.S.is_identity()) out.certificate.push(ProjectiveLinearMap(rm.S));
  out.certificate.append(inner.certificate);
  if (!rn.S.is_identity()) out.certificate.push(ProjectiveLinearMap(rn.S), Direction::Inverse);
  return out;
}

} // namespace cremona
