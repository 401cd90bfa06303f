#include <gtest/gtest.h>

#include "support/generators.hpp"

using namespace cremona;
using namespace cremona::testing;

namespace {

ErrorKind kind_of(const std::function<void()> &f) {
  try {
    f();
  } catch (const Error &e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::Internal;
}

std::string message_of(const std::function<void()> &f) {
  try {
    f();
  } catch (const Error &e) {
    return e.what();
  }
  return "";
}

void expect_round_trip(const GeoMap &g, std::int64_t M = 1) {
  std::string s = serialize_map(g, M);
  GeoMap back = read_map(s, ParseConfig{M});
  EXPECT_EQ(back.index(), g.index()) << s;
  EXPECT_TRUE(equal_maps(components(back), components(g))) << s;
  EXPECT_EQ(serialize_map(back, M), s);
}

} // namespace

TEST(ParseMap, InfersKinds) {
  GeoMap a = parse_map("[x1+1, 2*x2]");
  ASSERT_TRUE(std::holds_alternative<AffineMap>(a));
  EXPECT_EQ(arity(a), 2u);
  EXPECT_EQ(std::get<AffineMap>(a).b, (CycloVector{1, 0}));

  GeoMap m = parse_map("[x2*x1^-1, x1^-1]");
  ASSERT_TRUE(std::holds_alternative<MonomialMap>(m));
  EXPECT_EQ(std::get<MonomialMap>(m).A, (IntMatrix{{-1, 1}, {-1, 0}}));

  GeoMap t = parse_map("[x1, x2 - x1*(x1-1)/2]");
  ASSERT_TRUE(std::holds_alternative<TriangularAuto>(t));

  GeoMap r = parse_map("[x1 + x2^2, x2 + x1^2]");
  EXPECT_TRUE(std::holds_alternative<RationalMap>(r));
}

TEST(ParseMap, MatrixVectorForm) {
  AffineMap f = parse_affine("matrix [[1, 0], [1, 1]] vector [1, 0]");
  EXPECT_EQ(f, parse_affine("[x1 + 1, x2 + x1]"));
  AffineMap g = parse_affine("matrix [[z, 0], [0, z^2]] vector [0, 1/2]", ParseConfig{3});
  EXPECT_EQ(g.A(1, 1), CycloNumber::root(3, 2));
  EXPECT_EQ(g.b[1], CycloNumber(Rational(1, 2)));
}

TEST(ParseMap, Precedence) {
  // ^ binds tighter than unary minus, which binds tighter than * and /
  EXPECT_EQ(parse_constant("-2^2"), CycloNumber(-4));
  EXPECT_EQ(parse_constant("2*3^2"), CycloNumber(18));
  EXPECT_EQ(parse_constant("1/2/2"), CycloNumber(Rational(1, 4)));
  EXPECT_EQ(parse_constant("1 - 2 - 3"), CycloNumber(-4));
  EXPECT_EQ(parse_constant("(1 + 2)^2"), CycloNumber(9));
  EXPECT_EQ(parse_constant("z^5", ParseConfig{5}), CycloNumber(1));
  EXPECT_EQ(parse_constant("z^-1", ParseConfig{4}), CycloNumber::root(4, 3));
}

TEST(ParseMap, ErrorsCarryPositions) {
  std::string msg = message_of([] { parse_map("[x1 +\n  * x2]"); });
  EXPECT_NE(msg.find("ParseError"), std::string::npos);
  EXPECT_NE(msg.find("line 2, column 3"), std::string::npos) << msg;
  EXPECT_EQ(kind_of([] { parse_map("[x1+"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_map("[y1]"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_map("[x1, x2] junk"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_map("[x1^99999]"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_map("[g1*x1]"); }), ErrorKind::ParseError);
}

TEST(ParseMap, KindSpecificErrors) {
  EXPECT_EQ(kind_of([] { parse_map("[x1 + x2, 2*x1 + 2*x2]"); }), ErrorKind::NonInvertibleLinearPart);
  EXPECT_EQ(kind_of([] { parse_affine("matrix [[1, 0], [0, 1]] vector [1]"); }),
            ErrorKind::ArityMismatch);
  EXPECT_EQ(kind_of([] { parse_affine("matrix [[1, 2], [2, 4]] vector [0, 0]"); }),
            ErrorKind::NonInvertibleLinearPart);
  EXPECT_EQ(kind_of([] { parse_projective("(x0 : x0)"); }), ErrorKind::NonInvertibleLinearPart);
  EXPECT_EQ(kind_of([] { parse_projective("(x0 : x1^2)"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_map("[x1/x1 - 1]"); }), ErrorKind::NonInvertibleLinearPart);
}

TEST(ParseMap, VariableBeyondTheArity) {
  EXPECT_EQ(kind_of([] { parse_map("[x1, x3]"); }), ErrorKind::ArityMismatch);
}

TEST(TorusInput, SymbolsAndRoots) {
  FieldContext ctx;
  auto v = parse_torus_vectors({"(z, 2*g1)", "(z^2, g1^-1)"}, ctx, ParseConfig{5});
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0].modulus, 5);
  EXPECT_EQ(v[0][0].torsion, 1);
  EXPECT_EQ(v[1][0].torsion, 2);
  ASSERT_TRUE(ctx.index_of_symbol("g1").has_value());
  std::size_t g = *ctx.index_of_symbol("g1");
  EXPECT_EQ(v[0][1].free[g], 1);
  EXPECT_EQ(v[1][1].free[g], -1);
  FieldContext c2;
  EXPECT_EQ(kind_of([&] { parse_torus_vectors({"(0, 1)"}, c2, ParseConfig{}); }),
            ErrorKind::InvalidArgument);
}

TEST(RoundTrip, AllKinds) {
  expect_round_trip(parse_map("[x1 + 1, x2 + x1]"));
  expect_round_trip(parse_map("[x2*x1^-1, x1^-1]"));
  expect_round_trip(parse_map("[x1, x2 - x1*(x1-1)/2]"));
  expect_round_trip(parse_map("[x1/(x2 + 1), x2^2 + x1]"));
  expect_round_trip(ProjectiveLinearMap(parse_projective("(x1 : x2 : x0)")));
  expect_round_trip(parse_map("[z*x1 + z^2, x2 - z]", ParseConfig{3}), 3);
  expect_round_trip(monomial_S(IntMatrix{{2, 1}, {1, 1}}));
}

TEST(RoundTrip, RandomMaps) {
  Rng rng(101);
  for (int t = 0; t < 40; ++t) {
    std::size_t n = uniform(rng, 1, 4);
    switch (t % 4) {
    case 0: expect_round_trip(random_affine(rng, n)); break;
    case 1: expect_round_trip(random_triangular(rng, n)); break;
    case 2: expect_round_trip(monomial_T(random_unimodular(rng, n))); break;
    default: expect_round_trip(random_jordan_affine(rng, n, 6), 6); break;
    }
  }
}

TEST(RoundTrip, ReadMapChecksTheHeader) {
  EXPECT_EQ(kind_of([] { read_map("AFFINE(3): [x1 + 1, x2]", {}); }), ErrorKind::ArityMismatch);
  EXPECT_EQ(kind_of([] { read_map("WIDGET(1): [x1]", {}); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { read_map("MONOMIAL(1): [x1 + 1]", {}); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { read_map("TRIANGULAR(2): [x1 + x2^2, x2]", {}); }), ErrorKind::ParseError);
}
