#include <gtest/gtest.h>

#include "support/generators.hpp"

using namespace cremona;
using namespace cremona::testing;

namespace {

AffineMap aff(const std::string &src, std::int64_t m = 1) { return parse_affine(src, ParseConfig{m}); }

bool has_monomial_step(const MapChain &c) {
  for (const auto &e : c.entries)
    if (std::holds_alternative<MonomialMap>(e.map)) return true;
  return false;
}

void expect_canonical(const AffineMap &a, std::int64_t m = 1) {
  auto f = bir_canonical_form(a, m);
  EXPECT_TRUE(verify_conjugation(f.conjugator, a, f.representative()));
  std::size_t want = f.label == DichotomyLabel::Diagonalizable ? a.n() : a.n() - 1;
  EXPECT_EQ(f.values.size(), want);
}

} // namespace

TEST(Dichotomy, Labels) {
  EXPECT_EQ(dichotomy_label(aff("[2*x1, 3*x2]")), DichotomyLabel::Diagonalizable);
  EXPECT_EQ(dichotomy_label(aff("[x1, x2 + x1]")), DichotomyLabel::BirationallyAlmostDiagonal);
  EXPECT_EQ(dichotomy_label(aff("[x1 + 1, x2]")), DichotomyLabel::BirationallyAlmostDiagonal);
  EXPECT_EQ(label_name(DichotomyLabel::Diagonalizable), "Diagonalizable");
}

TEST(Dichotomy, LabelMatchesTheDefinition) {
  Rng rng(81);
  for (int t = 0; t < 40; ++t) {
    AffineMap a = random_jordan_affine(rng, uniform(rng, 1, 4), 4);
    auto jd = jordan_form(a, 4).data;
    bool semisimple = std::all_of(jd.blocks.begin(), jd.blocks.end(),
                                  [](const JordanBlock &b) { return b.size == 1; });
    bool diag = fixed_point(a).has_value() && semisimple;
    EXPECT_EQ(dichotomy_label(a, 4) == DichotomyLabel::Diagonalizable, diag);
  }
}

TEST(BirCanonical, UnipotentShear) {
  AffineMap a = aff("[x1, x2 + x1]");
  auto f = bir_canonical_form(a);
  EXPECT_EQ(f.label, DichotomyLabel::BirationallyAlmostDiagonal);
  EXPECT_EQ(f.values, (std::vector<CycloNumber>{1}));
  EXPECT_TRUE(has_monomial_step(f.conjugator));
  EXPECT_TRUE(verify_conjugation(f.conjugator, a, f.representative()));
}

TEST(BirCanonical, DiagonalInput) {
  auto f = bir_canonical_form(aff("[2*x1, 3*x2]"));
  EXPECT_EQ(f.label, DichotomyLabel::Diagonalizable);
  EXPECT_EQ(f.values, (std::vector<CycloNumber>{2, 3}));
  EXPECT_TRUE(f.conjugator.entries.empty());
}

TEST(BirCanonical, FixedPointFreeWithBlock) {
  AffineMap a = aff("[x1 + 1, 2*x2, 2*x3 + x2]");
  auto f = bir_canonical_form(a);
  EXPECT_EQ(f.label, DichotomyLabel::BirationallyAlmostDiagonal);
  EXPECT_EQ(f.values, (std::vector<CycloNumber>{2, 2}));
  ASSERT_EQ(f.conjugator.entries.size(), 1u);
  EXPECT_TRUE(std::holds_alternative<TriangularAuto>(f.conjugator.entries[0].map));
  EXPECT_TRUE(verify_conjugation(f.conjugator, a, f.representative()));
}

TEST(BirCanonical, BlockInversionShape) {
  auto comps = components(GeoMap(block_inversion(4, 3)));
  EXPECT_TRUE(equal_maps(comps, parse_components("[x1^-1, x2*x1^-1, x3*x1^-1, x4]")));
}

TEST(BirCanonical, ChainsVerifyOnRandomMaps) {
  Rng rng(82);
  for (int t = 0; t < 30; ++t) {
    std::size_t n = uniform(rng, 1, 4);
    expect_canonical(t % 2 ? random_jordan_affine(rng, n, 3) : random_fixed_point_free(rng, n, 3), 3);
  }
}

TEST(BirDecision, OrderSevenPair) {
  AffineMap a = aff("[z*x1, x2, x3]", 7), b = aff("[z^3*x1, z^5*x2, z*x3]", 7);
  Decision d = bir_conjugate_decision(a, b, 7);
  ASSERT_EQ(d.verdict, Verdict::Conjugate);
  EXPECT_TRUE(has_monomial_step(d.certificate));
  EXPECT_TRUE(verify_conjugation(d.certificate, a, b));
}

TEST(BirDecision, LineTorusRule) {
  Decision d = bir_conjugate_decision(aff("[x1 + 1, 2*x2]"), aff("[x1 + 1, 3*x2]"));
  EXPECT_EQ(d.verdict, Verdict::NotConjugate);
  AffineMap a = aff("[x1 + 1, 2*x2]"), b = aff("[x1 + 1, x2/2]");
  Decision e = bir_conjugate_decision(a, b);
  ASSERT_EQ(e.verdict, Verdict::Conjugate);
  EXPECT_TRUE(verify_conjugation(e.certificate, a, b));
}

TEST(BirDecision, UnipotentShearAgainstTranslation) {
  AffineMap a = aff("[x1, x2 + x1]"), b = aff("[x1 + 1, x2]");
  Decision d = bir_conjugate_decision(a, b);
  ASSERT_EQ(d.verdict, Verdict::Conjugate);
  EXPECT_TRUE(has_monomial_step(d.certificate));
  EXPECT_TRUE(verify_conjugation(d.certificate, a, b));
}

TEST(BirDecision, LabelsAreExclusive) {
  Rng rng(83);
  int cross = 0;
  for (int t = 0; t < 40; ++t) {
    std::size_t n = uniform(rng, 1, 3);
    AffineMap a = random_jordan_affine(rng, n), b = random_jordan_affine(rng, n);
    if (dichotomy_label(a) == dichotomy_label(b)) continue;
    ++cross;
    Decision d = bir_conjugate_decision(a, b);
    EXPECT_EQ(d.verdict, Verdict::NotConjugate);
    EXPECT_EQ(d.reason, "dichotomy labels differ");
  }
  EXPECT_GT(cross, 0);
}

TEST(BirDecision, MonomialConjugatesOfDiagonalMaps) {
  Rng rng(84);
  for (int t = 0; t < 15; ++t) {
    std::size_t n = uniform(rng, 2, 3);
    std::int64_t M = uniform(rng, 1, 6);
    FieldContext ctx(M);
    ctx.register_prime(2);
    ctx.register_prime(3);
    TorusVector mu = random_torus_vector(rng, n, M, 2, 1);
    AffineMap a = rho(mu, ctx), b = rho(act(random_unimodular(rng, n, 3, 1), mu), ctx);
    AffineMap psi = random_affine(rng, n);
    b = conjugate(psi, b);
    Decision d = bir_conjugate_decision(a, b, M);
    ASSERT_EQ(d.verdict, Verdict::Conjugate);
    EXPECT_TRUE(verify_conjugation(d.certificate, a, b));
  }
}

TEST(BirDecision, EqualFiniteOrderIsConjugate) {
  Rng rng(85);
  for (int t = 0; t < 15; ++t) {
    std::size_t n = uniform(rng, 2, 3);
    std::int64_t m = uniform(rng, 2, 12);
    auto diag = [&] {
      CycloVector mu(n);
      std::int64_t lead = 0;
      do lead = uniform(rng, 1, m - 1);
      while (std::gcd(lead, m) != 1);
      mu[0] = CycloNumber::root(m, lead);
      for (std::size_t i = 1; i < n; ++i) mu[i] = CycloNumber::root(m, uniform(rng, 0, m - 1));
      std::shuffle(mu.begin(), mu.end(), rng);
      return conjugate(random_affine(rng, n), rho(mu));
    };
    AffineMap a = diag(), b = diag();
    Decision d = bir_conjugate_decision(a, b, m);
    ASSERT_EQ(d.verdict, Verdict::Conjugate);
    EXPECT_TRUE(verify_conjugation(d.certificate, a, b));
  }
}
