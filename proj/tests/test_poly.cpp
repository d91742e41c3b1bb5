#include <gtest/gtest.h>

#include "dloci/poly.hpp"

using namespace dloci;

namespace {

const std::vector<std::string> kNames = {"r1", "r2", "r3"};

HomogPoly P(const char* text) { return parse_poly(text, kNames); }

ExactMatrix random_block(std::size_t rows, std::size_t cols, Rng& rng) {
  ExactMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = GR(Rational(rng.integer(-3, 3)), Rational(rng.integer(-1, 1)));
  return m;
}

}  // namespace

TEST(HomogPoly, TextRoundTrip) {
  for (const char* s : {"r1^2 - 1/2*r2*r3", "(1+2i)*r1^3 + r3^3", "r1*r2*r3 - 3*r2^3"}) {
    const HomogPoly p = P(s);
    EXPECT_EQ(parse_poly(p.to_string(), kNames), p);
  }
  EXPECT_THROW(P("r1^2 + r2"), std::invalid_argument);
}

TEST(HomogPoly, ArithmeticAndEvaluation) {
  const HomogPoly a = P("r1 + r2"), b = P("r1 - r2");
  EXPECT_EQ(a * b, P("r1^2 - r2^2"));
  const ExactVector x{GR(2), GR::i(), GR(5)};
  EXPECT_EQ((a * b).evaluate(x), GR(5));
  EXPECT_TRUE((a - a).is_zero());
}

TEST(HomogPoly, Substitute) {
  const HomogPoly p = P("r1^2 - r2*r3");
  const HomogPoly q = p.substitute({P("r1 + r2"), P("r2"), P("r3")});
  EXPECT_EQ(q, P("r1^2 + 2*r1*r2 + r2^2 - r2*r3"));
}

TEST(DivideLinear, ExactQuotientsAndRemainders) {
  const LinearForm l(ExactVector{GR(2), GR(-1), GR::i()});
  const HomogPoly q = P("r1^2 + 3*r2*r3 - r3^2");
  const auto back = divide_linear(l.to_poly() * q, l);
  ASSERT_TRUE(back.has_value());
  EXPECT_EQ(*back * l.to_poly(), l.to_poly() * q);
  EXPECT_FALSE(divide_linear(q, l).has_value());
  EXPECT_EQ(l.coefficients().front(), GR(1));
}

TEST(SymDet, MatchesInstantiateThenDet) {
  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + trial % 3;
    std::vector<ExactMatrix> blocks;
    for (int i = 0; i < 3; ++i) blocks.push_back(random_block(n, n, rng));
    const HomogPoly det = sym_det(symbolic_pencil(blocks));
    EXPECT_EQ(det.degree(), n);
    for (int s = 0; s < 5; ++s) {
      ExactVector x{GR(Rational(rng.integer(-5, 5))), GR(Rational(rng.integer(-5, 5), 2)), GR(Rational(rng.integer(-5, 5)), 1)};
      ExactMatrix f(n, n);
      for (std::size_t i = 0; i < 3; ++i) f += blocks[i] * x[i];
      EXPECT_EQ(det.evaluate(x), det_exact(f));
    }
  }
}

TEST(SymMinors, CountAndValues) {
  Rng rng(8);
  std::vector<ExactMatrix> blocks{random_block(3, 4, rng), random_block(3, 4, rng)};
  const PolyMatrix f = symbolic_pencil(blocks);
  const auto minors = sym_minors(f, 1);
  ASSERT_EQ(minors.size(), minor_index_sets(3, 4, 2).size());
  const ExactVector x{GR(3), GR(-2)};
  const ExactMatrix fx = f.instantiate(x);
  const auto sets = minor_index_sets(3, 4, 2);
  for (std::size_t i = 0; i < sets.size(); ++i)
    EXPECT_EQ(minors[i].evaluate(x), det_exact(fx.submatrix(sets[i].first, sets[i].second)));
}

TEST(Dehomogenize, ChartText) {
  const HomogPoly p = P("r1^2 - r2^2 + r1*r3");
  EXPECT_EQ(affine_to_string(dehomogenize(p, 0), 3, 0, kNames), "-r2^2 + r3 + 1");
}

TEST(FactorScan, LinearProductsAndSmoothCubic) {
  const HomogPoly lines = P("r1 + r2") * P("r1 - 2*r3") * P("r2 + (1+i)*r3");
  const auto a = linear_factor_scan(lines, 1e-8, 3);
  EXPECT_EQ(a.verdict, FactorVerdict::AllLinear);
  EXPECT_EQ(a.factors.size(), 3u);
  const auto b = linear_factor_scan(P("r1^3 + r2^3 + r3^3 - 5*r1*r2*r3"), 1e-8, 3);
  EXPECT_EQ(b.verdict, FactorVerdict::NonlinearWitness);
  EXPECT_TRUE(b.witness.has_value());
  const auto c = linear_factor_scan(P("r1^2 - r2^2") * P("r3"), 1e-8, 4);
  EXPECT_EQ(c.verdict, FactorVerdict::AllLinear);
}
