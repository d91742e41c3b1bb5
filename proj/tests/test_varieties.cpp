#include <gtest/gtest.h>

#include <Eigen/SVD>

#include "dloci/varieties.hpp"

using namespace dloci;

namespace {

ExactVector random_exact(std::size_t d, Rng& rng) {
  ExactVector v(d);
  for (auto& x : v) x = GR(Rational(rng.integer(-3, 3)), Rational(rng.integer(-2, 2)));
  if (std::all_of(v.begin(), v.end(), [](const GR& g) { return g.is_zero(); })) v[0] = GR(1);
  return v;
}

Ensemble separable_ensemble(std::size_t m, std::size_t n, std::size_t terms, Rng& rng) {
  std::vector<ExactVector> vs;
  for (std::size_t u = 0; u < terms; ++u) vs.push_back(kron(random_exact(m, rng), random_exact(n, rng)));
  return Ensemble::exact({m, n}, std::vector<Rational>(terms, Rational(1)), vs);
}

Ensemble bell() { return Ensemble::exact({2, 2}, {Rational(1)}, {ExactVector{GR(1), GR(0), GR(0), GR(1)}}); }

}  // namespace

TEST(Pencil, BlocksFollowCutOrdering) {
  const ExactVector v{GR(1), GR(2), GR(3), GR(4), GR(5), GR(6)};
  const Ensemble e = Ensemble::exact({2, 3}, {Rational(1)}, {v});
  const Pencil ab = pencil_from_ensemble(e, parse_cut("A:B", 2));
  ASSERT_EQ(ab.m(), 2u);
  EXPECT_EQ((*ab.exact_blocks)[1](2, 0), GR(6));
  const Pencil ba = pencil_from_ensemble(e, parse_cut("B:A", 2));
  ASSERT_EQ(ba.m(), 3u);
  EXPECT_EQ((*ba.exact_blocks)[2](1, 0), GR(6));
}

TEST(Membership, BellHasEmptyRankZeroLocus) {
  const Pencil p = pencil_from_ensemble(bell(), default_cut(2));
  Rng rng(1);
  for (int i = 0; i < 20; ++i) EXPECT_FALSE(membership(p, random_unit_vector(2, rng), 0));
  EXPECT_FALSE(membership(p, ExactVector{GR(1), GR(0)}, 0));
  EXPECT_TRUE(membership(p, ExactVector{GR(1), GR(0)}, 1));
}

TEST(Schmidt, MatchesSvdRank) {
  Rng rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t m = 2 + rng.index(3), n = 2 + rng.index(3);
    const std::size_t r = 1 + rng.index(std::min(m, n));
    FloatVector v = FloatVector::Zero(static_cast<Eigen::Index>(m * n));
    FloatMatrix coeff = FloatMatrix::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    for (std::size_t s = 0; s < r; ++s) coeff += random_complex_vector(m, rng) * random_complex_vector(n, rng).transpose();
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) v(static_cast<Eigen::Index>(i * n + j)) = coeff(i, j);
    Eigen::JacobiSVD<FloatMatrix> svd(coeff);
    svd.setThreshold(1e-9);
    EXPECT_EQ(schmidt_number(v, {m, n}, default_cut(2)), static_cast<std::size_t>(svd.rank()));
  }
}

TEST(Separable, CertificateFactorsEveryMinor) {
  Rng rng(23);
  for (int trial = 0; trial < 8; ++trial) {
    const Ensemble e = separable_ensemble(3, 3, 2 + trial % 3, rng);
    const std::size_t k = std::min<std::size_t>(3, e.size()) - 1;
    const auto cert = verify_separable_factorization(e, default_cut(2), k);
    EXPECT_TRUE(cert.certified) << cert.detail;
    EXPECT_GT(cert.nonzero_minors, 0u);
  }
  EXPECT_THROW(verify_separable_factorization(bell(), default_cut(2), 0), std::invalid_argument);
}

TEST(SplitProduct, DetectsProducts) {
  const ExactVector a{GR(1), GR::i()}, b{GR(2), GR(0), GR(-1)};
  const auto s = split_product(kron(a, b), {2, 3}, default_cut(2));
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(kron(s->first, s->second), kron(a, b));
  EXPECT_FALSE(split_product(ExactVector{GR(1), GR(0), GR(0), GR(1)}, {2, 2}, default_cut(2)).has_value());
}

TEST(Probe, SeparableIsLinear) {
  Rng rng(31);
  const Ensemble e = separable_ensemble(3, 3, 3, rng);
  const auto r = linearity_probe(pencil_from_ensemble(e, default_cut(2)), 2, 30, 5);
  EXPECT_EQ(r.verdict, ProbeVerdict::Linear);
  EXPECT_FALSE(r.witness.has_value());
}

TEST(Probe, EntangledSmoothCubicIsNonlinearAndReproducible) {
  // Three generic vectors in C^3 x C^3: det of the pencil is a smooth cubic.
  Rng rng(41);
  std::vector<ExactVector> vs;
  for (int u = 0; u < 3; ++u) vs.push_back(random_exact(9, rng));
  const Ensemble e = Ensemble::exact({3, 3}, std::vector<Rational>(3, Rational(1)), vs);
  const Pencil p = pencil_from_ensemble(e, default_cut(2));
  const auto a = linearity_probe(p, 2, 30, 77);
  const auto b = linearity_probe(p, 2, 30, 77);
  ASSERT_EQ(a.verdict, ProbeVerdict::Nonlinear);
  ASSERT_TRUE(a.witness && b.witness);
  EXPECT_EQ(a.witness->residual, b.witness->residual);
  EXPECT_GT(a.witness->residual, 1e-6);
}

TEST(Sampling, PointsLieOnLocusWithExpectedDimension) {
  Rng rng(43);
  std::vector<ExactVector> vs;
  for (int u = 0; u < 3; ++u) vs.push_back(random_exact(9, rng));
  const Pencil p = pencil_from_ensemble(Ensemble::exact({3, 3}, std::vector<Rational>(3, Rational(1)), vs), default_cut(2));
  const auto pts = sample_points(p, 2, 10, 9);
  ASSERT_GE(pts.size(), 5u);
  for (const auto& x : pts) {
    EXPECT_TRUE(membership(p, x, 2));
    EXPECT_EQ(local_dimension(p, 2, x), 1);
  }
}

TEST(Segre, PullbackOfProductState) {
  // |0>|0>|0> + |1>|1>|1> across A:BC, pulled back along P^1 x P^1 for BC:A.
  ExactVector ghz(8);
  ghz[0] = GR(1);
  ghz[7] = GR(1);
  const Ensemble e = Ensemble::exact({2, 2, 2}, {Rational(1)}, {ghz});
  const Pencil p = pencil_from_ensemble(e, parse_cut("BC:A", 3));
  const auto pb = segre_pullback(p, {2, 2}, 0);
  ASSERT_FALSE(pb.minors.empty());
  for (const auto& m : pb.minors) {
    if (m.is_zero()) continue;
    EXPECT_EQ(m.degree(), 2u);
  }
  EXPECT_EQ(segre_images({2, 2}).size(), 4u);
}

TEST(Bilinear, Rank) {
  const std::vector<std::string> names{"X0", "X1", "Y0", "Y1"};
  EXPECT_EQ(bilinear_rank(parse_poly("X0*Y0 + X1*Y1", names), {2, 2}), 2u);
  EXPECT_EQ(bilinear_rank(parse_poly("X0*Y0 + X0*Y1", names), {2, 2}), 1u);
  EXPECT_THROW(bilinear_rank(parse_poly("X0^2", names), {2, 2}), std::invalid_argument);
}

TEST(BlockSymmetry, DetectsDefects) {
  const ExactMatrix a = ExactMatrix::from_rows({{1, 0}, {0, 1}});
  const ExactMatrix b = ExactMatrix::from_rows({{0, 1}, {0, 0}});
  EXPECT_TRUE(block_symmetry_defects({a, a}).empty());
  EXPECT_EQ(block_symmetry_defects({a, b}).size(), 1u);
}
