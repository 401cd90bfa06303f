#include <gtest/gtest.h>

#include "support/generators.hpp"

using namespace cremona;
using namespace cremona::testing;

namespace {

AffineMap aff(const std::string &src) { return parse_affine(src); }

MultiPoly X(std::size_t n, std::size_t i) { return MultiPoly::variable(n, i); }
MultiPoly K(std::size_t n, const Rational &v) { return MultiPoly::constant(n, CycloNumber(v)); }

// alpha^*(F) = F o alpha through the generic rational pullback
MultiPoly star(const AffineMap &a, const MultiPoly &F) {
  return pullback(components(GeoMap(a)), F).as_polynomial();
}

AffineMap full_shift(std::size_t n) {
  CycloMatrix A = CycloMatrix::identity(n);
  for (std::size_t i = 1; i < n; ++i) A(i, i - 1) = 1;
  CycloVector b(n);
  b[0] = 1;
  return AffineMap(A, b);
}

// Listed corrections in five variables, typed in from the source formulas.
MultiPoly listed_P(int m) {
  std::size_t n = 5;
  MultiPoly x1 = X(n, 0);
  auto s = [&](int c) { return x1 + K(n, c); };
  switch (m) {
  case 2: return (x1 * s(-1)).scaled(CycloNumber(Rational(-1, 2)));
  case 3: return -(x1 * X(n, 1)) + (s(-1) * x1 * s(1)).scaled(CycloNumber(Rational(1, 3)));
  case 4:
    return -(x1 * X(n, 2)) + (x1 * s(1) * X(n, 1)).scaled(CycloNumber(Rational(1, 2))) -
           (s(-1) * x1 * s(1) * s(2)).scaled(CycloNumber(Rational(1, 8)));
  }
  return MultiPoly(n);
}

std::vector<Monomial> monomials_up_to(std::size_t n, int d) {
  std::vector<Monomial> out;
  Monomial cur(n, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i == n) {
      out.push_back(cur);
      return;
    }
    for (int e = 0; e <= left; ++e) {
      cur[i] = e;
      rec(i + 1, left - e);
    }
    cur[i] = 0;
  };
  rec(0, d);
  return out;
}

} // namespace

TEST(ClosedForm, MatchesListedLowOrderCorrections) {
  for (int m = 2; m <= 4; ++m) EXPECT_EQ(closed_form_Pm(m, 5), listed_P(m)) << "m=" << m;
}

TEST(ClosedForm, SatisfiesTheDefiningRecurrence) {
  // alpha^*(P_m) = P_m - X_{m-1} for the full shift
  for (int m = 2; m <= 6; ++m) {
    std::size_t n = static_cast<std::size_t>(m);
    MultiPoly P = closed_form_Pm(m, n);
    EXPECT_EQ(star(full_shift(n), P), P - X(n, m - 2)) << "m=" << m;
    EXPECT_LE(P.last_variable(), m - 2);
  }
}

TEST(ClosedForm, FifthCorrectionLeadingTerms) {
  // the last closed-form term is 4 binom(x1 + 3, 5), so x1^5 carries 4/120
  MultiPoly P = closed_form_Pm(5, 5);
  Monomial x1_5{5, 0, 0, 0, 0}, x1x4{1, 0, 0, 1, 0};
  EXPECT_EQ(P.coefficient(x1x4), CycloNumber(-1));
  EXPECT_EQ(P.coefficient(x1_5), CycloNumber(Rational(1, 30)));
}

TEST(Solver, FullShiftMatchesClosedForm) {
  for (std::size_t n = 2; n <= 5; ++n) {
    AffineMap a = full_shift(n);
    for (std::size_t j = 1; j < n; ++j) {
      MultiPoly Q = solve_eigen_correction(a, j);
      EXPECT_EQ(star(a, Q), Q - X(n, j - 1));
      EXPECT_EQ(Q, closed_form_Pm(static_cast<int>(j) + 1, n)) << "n=" << n << " j=" << j;
    }
  }
}

TEST(Solver, EigenvalueTwoBlock) {
  AffineMap a = aff("[x1 + 1, 2*x2, 2*x3 + x2]");
  MultiPoly Q = solve_eigen_correction(a, 2);
  EXPECT_EQ(star(a, Q), Q.scaled(CycloNumber(2)) - X(3, 1));
  EXPECT_LE(Q.last_variable(), 1);
}

TEST(Solver, RejectsBlockStarts) {
  AffineMap a = aff("[x1 + 1, 2*x2, 2*x3 + x2]");
  EXPECT_THROW(solve_eigen_correction(a, 1), Error);
}

TEST(Solver, DefiningEquationOnRandomNormalForms) {
  Rng rng(51);
  for (int t = 0; t < 30; ++t) {
    std::size_t n = uniform(rng, 2, 5);
    auto nf = jordan_form(random_fixed_point_free(rng, n)).normal_form;
    for (std::size_t j = 1; j < n; ++j) {
      // a coordinate continues a block when the subdiagonal entry is 1
      if (nf.A(j, j - 1).zero()) continue;
      MultiPoly Q = solve_eigen_correction(nf, j);
      EXPECT_EQ(star(nf, Q), Q.scaled(nf.A(j, j)) - X(n, j - 1));
      EXPECT_LE(Q.last_variable(), static_cast<int>(j) - 1);
    }
  }
}

TEST(AlmostDiagonal, ShearUsesTheExampleConjugator) {
  auto r = almost_diagonalize(aff("[x1 + 1, x2 + x1]"));
  EXPECT_EQ(r.form.eigenvalues, (std::vector<CycloNumber>{1}));
  ASSERT_EQ(r.conjugator.entries.size(), 1u);
  auto want = parse_components("[x1, x2 - x1*(x1-1)/2]");
  EXPECT_TRUE(equal_maps(components(r.conjugator.entries[0].map), want));
}

TEST(AlmostDiagonal, FullShiftOfLengthFive) {
  AffineMap a = full_shift(5);
  auto r = almost_diagonalize(a);
  EXPECT_EQ(r.form.eigenvalues, (std::vector<CycloNumber>{1, 1, 1, 1}));
  ASSERT_EQ(r.conjugator.entries.size(), 1u);
  const auto &T = std::get<TriangularAuto>(r.conjugator.entries[0].map);
  for (int m = 2; m <= 5; ++m) EXPECT_EQ(T.components[m - 1], X(5, m - 1) + closed_form_Pm(m, 5));
  EXPECT_TRUE(verify_conjugation(r.conjugator, a, r.form.map()));
}

TEST(AlmostDiagonal, AlreadyDiagonalForm) {
  auto r = almost_diagonalize(aff("[x1 + 1, 2*x2]"));
  EXPECT_EQ(r.form.eigenvalues, (std::vector<CycloNumber>{2}));
  EXPECT_TRUE(r.conjugator.entries.empty());
}

TEST(AlmostDiagonal, RejectsMapsWithFixedPoints) {
  EXPECT_THROW(almost_diagonalize(aff("[2*x1, 3*x2 + 1]")), Error);
}

TEST(AlmostDiagonal, EigenvaluesComeFromTheBlocks) {
  Rng rng(52);
  for (int t = 0; t < 30; ++t) {
    std::size_t n = uniform(rng, 1, 4);
    AffineMap a = random_fixed_point_free(rng, n);
    auto jd = jordan_form(a).data;
    std::multiset<std::string> want;
    for (std::size_t i = 0; i < jd.blocks.size(); ++i) {
      // the translation block counts the constant as well
      int count = i == 0 ? jd.blocks[i].size - 2 : jd.blocks[i].size;
      for (int c = 0; c < count; ++c) want.insert(eigen_key(jd.blocks[i].eigenvalue));
    }
    auto r = almost_diagonalize(a);
    std::multiset<std::string> got;
    for (const auto &v : r.form.eigenvalues) got.insert(eigen_key(v));
    EXPECT_EQ(got, want);
    EXPECT_TRUE(verify_conjugation(r.conjugator, a, r.form.map()));
  }
}

TEST(AlmostDiagonal, ConjugatorOfANormalFormIsTriangular) {
  Rng rng(53);
  for (int t = 0; t < 20; ++t) {
    std::size_t n = uniform(rng, 2, 4);
    auto nf = jordan_form(random_fixed_point_free(rng, n)).normal_form;
    auto r = almost_diagonalize(nf);
    for (const auto &e : r.conjugator.entries) {
      ASSERT_TRUE(std::holds_alternative<TriangularAuto>(e.map));
      const auto &T = std::get<TriangularAuto>(e.map);
      for (std::size_t i = 0; i < n; ++i) EXPECT_LE(T.components[i].last_variable(), static_cast<int>(i));
    }
  }
}

TEST(AlmostDiagonal, EigenvectorsAvoidTheFirstVariable) {
  // theta(nu)^* on polynomials of degree <= 4: each eigenspace is spanned by
  // polynomials free of X1
  Rng rng(54);
  for (int t = 0; t < 6; ++t) {
    std::size_t n = uniform(rng, 2, 3);
    std::vector<CycloNumber> nu;
    for (std::size_t i = 1; i < n; ++i) nu.push_back(supported_eigenvalue(rng, 4));
    AffineMap th = theta(nu);
    auto basis = monomials_up_to(n, 4);
    std::map<Monomial, std::size_t> index;
    for (std::size_t i = 0; i < basis.size(); ++i) index[basis[i]] = i;
    std::size_t d = basis.size();
    CycloMatrix L(d, d);
    for (std::size_t c = 0; c < d; ++c) {
      MultiPoly image = star(th, MultiPoly::monomial(n, basis[c], CycloNumber(1)));
      for (const auto &[mono, coef] : image.terms()) L(index.at(mono), c) = coef;
    }
    std::set<std::string> seen;
    for (std::size_t c = 0; c < d; ++c) {
      CycloNumber lambda = L(c, c);
      if (!seen.insert(eigen_key(lambda)).second) continue;
      auto ker = nullspace(L - CycloMatrix::identity(d).scaled(lambda));
      ASSERT_FALSE(ker.empty());
      // a random element of the eigenspace
      CycloVector v(d);
      for (const auto &k : ker) {
        CycloNumber w(nonzero_rational(rng, 4));
        for (std::size_t i = 0; i < d; ++i) v[i] += w * k[i];
      }
      MultiPoly F(n);
      for (std::size_t i = 0; i < d; ++i)
        if (!v[i].zero()) F += MultiPoly::monomial(n, basis[i], v[i]);
      EXPECT_EQ(star(th, F), F.scaled(lambda));
      EXPECT_EQ(F.degree_in(0), 0) << F.to_string(4);
    }
  }
}

TEST(AutDecision, ExampleOnePair) {
  AffineMap a = aff("[x1 + 1, x2 + x1]"), b = aff("[x1 + 1, x2]");
  Decision d = aut_conjugate_decision(a, b);
  ASSERT_EQ(d.verdict, Verdict::Conjugate);
  EXPECT_EQ(d.certificate.group, GroupTag::Aut);
  EXPECT_TRUE(verify_conjugation(d.certificate, a, b));
}

TEST(AutDecision, DifferentMultisets) {
  Decision d = aut_conjugate_decision(aff("[x1 + 1, 2*x2]"), aff("[x1 + 1, x2]"));
  EXPECT_EQ(d.verdict, Verdict::NotConjugate);
  EXPECT_EQ(d.reason, "almost-diagonal eigenvalues differ");
}

TEST(AutDecision, CoordinateSwap) {
  AffineMap a = aff("[x1 + 1, 2*x2, 3*x3]"), b = aff("[x1 + 1, 3*x2, 2*x3]");
  Decision d = aut_conjugate_decision(a, b);
  ASSERT_EQ(d.verdict, Verdict::Conjugate);
  EXPECT_TRUE(verify_conjugation(d.certificate, a, b));
}

TEST(AutDecision, FixedPointMapsDelegateToAff) {
  AffineMap a = aff("[2*x1, 2*x2 + x1]"), b = aff("[2*x1, 2*x2]");
  EXPECT_EQ(aut_conjugate_decision(a, b).verdict, Verdict::NotConjugate);
  EXPECT_EQ(aut_conjugate_decision(a, aff("[2*x1 + 1, 2*x2 + x1 + 3]")).verdict, Verdict::Conjugate);
  EXPECT_EQ(aut_conjugate_decision(a, aff("[x1 + 1, x2]")).reason, "fixed point dichotomy differs");
}

TEST(AutDecision, InvariantUnderAffineConjugation) {
  Rng rng(55);
  for (int t = 0; t < 25; ++t) {
    std::size_t n = uniform(rng, 1, 4);
    AffineMap a = random_fixed_point_free(rng, n);
    AffineMap b = conjugate(random_affine(rng, n), a);
    Decision d = aut_conjugate_decision(a, b);
    ASSERT_EQ(d.verdict, Verdict::Conjugate);
    EXPECT_TRUE(verify_conjugation(d.certificate, a, b));
  }
}
