#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "dloci/exact.hpp"
#include "dloci/numeric.hpp"

using namespace dloci;

namespace {

GR leibniz_det(const ExactMatrix& m) {
  std::vector<std::size_t> perm(m.rows());
  std::iota(perm.begin(), perm.end(), 0);
  GR total;
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < perm.size(); ++i)
      for (std::size_t j = i + 1; j < perm.size(); ++j) inversions += perm[i] > perm[j];
    GR term(inversions % 2 ? -1 : 1);
    for (std::size_t i = 0; i < perm.size(); ++i) term *= m(i, perm[i]);
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

ExactMatrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  ExactMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      m(r, c) = GR(Rational(rng.integer(-4, 4), rng.integer(1, 3)), Rational(rng.integer(-2, 2)));
  return m;
}

}  // namespace

TEST(GaussianRational, ParseAndFormat) {
  EXPECT_EQ(GR::parse("3").to_string(), "3");
  EXPECT_EQ(GR::parse("-1/2i"), GR(Rational(0), Rational(-1, 2)));
  EXPECT_EQ(GR::parse("i"), GR::i());
  EXPECT_EQ(GR::parse("-i"), -GR::i());
  EXPECT_EQ(GR::parse("2/4+6/8i"), GR(Rational(1, 2), Rational(3, 4)));
  for (const char* s : {"0", "7/3", "-1+2i", "1/2-3i", "-5/7i"}) EXPECT_EQ(GR::parse(GR::parse(s).to_string()), GR::parse(s));
  EXPECT_THROW(GR::parse("1/0"), std::invalid_argument);
  EXPECT_THROW(GR::parse("abc"), std::invalid_argument);
}

TEST(GaussianRational, FieldArithmetic) {
  const GR a = GR::parse("1/2-3i"), b = GR::parse("-2+1/3i");
  EXPECT_EQ((a * b) / b, a);
  EXPECT_EQ(a * a.conj(), GR(a.norm2()));
  EXPECT_EQ(GR::i() * GR::i(), GR(-1));
  EXPECT_THROW(a / GR(), std::domain_error);
}

TEST(ExactMatrix, DeterminantMatchesLeibniz) {
  Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + trial % 5;
    const ExactMatrix m = random_matrix(n, n, rng);
    EXPECT_EQ(det_exact(m), leibniz_det(m));
  }
}

TEST(ExactMatrix, RankOfProductsOfThinFactors) {
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t r = 1 + trial % 4;
    const ExactMatrix m = random_matrix(6, r, rng) * random_matrix(r, 5, rng);
    // Generic integer factors have full rank; Leibniz on a square submatrix confirms it.
    EXPECT_LE(rank_exact(m), r);
    bool found = false;
    for (const auto& [rows, cols] : minor_index_sets(6, 5, r)) {
      if (!leibniz_det(m.submatrix(rows, cols)).is_zero()) {
        found = true;
        break;
      }
    }
    EXPECT_EQ(rank_exact(m) == r, found);
  }
  EXPECT_EQ(rank_exact(ExactMatrix(3, 4)), 0u);
}

TEST(ExactMatrix, KronAndDagger) {
  const ExactMatrix a = ExactMatrix::from_rows({{1, GR::i()}, {0, 2}});
  const ExactMatrix b = ExactMatrix::from_rows({{3}, {GR::parse("1/2")}});
  const ExactMatrix k = kron(a, b);
  ASSERT_EQ(k.rows(), 4u);
  EXPECT_EQ(k(1, 1), GR::parse("1/2i"));
  EXPECT_EQ(dagger(dagger(k)), k);
  EXPECT_EQ(dagger(a)(1, 0), -GR::i());
  EXPECT_EQ(det_exact(kron(a, a)), det_exact(a) * det_exact(a) * det_exact(a) * det_exact(a));
}

TEST(Combinatorics, MinorIndexSets) {
  EXPECT_EQ(combinations(5, 2).size(), 10u);
  EXPECT_EQ(combinations(4, 0).size(), 1u);
  const auto sets = minor_index_sets(3, 4, 2);
  EXPECT_EQ(sets.size(), 3u * 6u);
  EXPECT_EQ(sets.front().first, (IndexSet{0, 1}));
  EXPECT_EQ(sets.front().second, (IndexSet{0, 1}));
}
