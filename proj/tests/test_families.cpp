#include <gtest/gtest.h>

#include <cmath>

#include "dloci/families.hpp"

using namespace dloci;

namespace {

CheckStatus status_of(const VerifyReport& r, const std::string& name) {
  const auto* c = r.find(name);
  EXPECT_NE(c, nullptr) << name;
  return c ? c->status : CheckStatus::Info;
}

}  // namespace

TEST(Example1, HesseDeterminantAndReport) {
  const auto rep = example1_verify(Example1Params::from_exact_cubes(GR(2), GR(3), GR(5)), 1);
  EXPECT_EQ(status_of(rep, "hesse-determinant"), CheckStatus::Pass);
  EXPECT_FALSE(rep.failed());
  ASSERT_TRUE(rep.probe.has_value());
  EXPECT_EQ(rep.probe->verdict, ProbeVerdict::Nonlinear);
}

TEST(Example1, ThreeLinesWhenGCubedIs27) {
  const auto rep = example1_verify(Example1Params::from_exact_tvs(GR(1), GR(1), GR(1)), 2);
  ASSERT_TRUE(rep.probe.has_value());
  EXPECT_EQ(rep.probe->verdict, ProbeVerdict::Linear);
  EXPECT_FALSE(rep.failed());
}

TEST(Example1, ModuliFunction) {
  EXPECT_EQ(moduli_k(GR(0)), GR(0));
  // k(1) = 1 * 217^3 / 26^3.
  EXPECT_EQ(moduli_k(GR(1)), GR(Rational(217 * 217 * 217, 26 * 26 * 26)));
  EXPECT_THROW(moduli_k(GR(3)), std::domain_error);
  EXPECT_NEAR(std::abs(moduli_k(Complex(1.0, 0.0)) - 217.0 * 217 * 217 / (26.0 * 26 * 26)), 0.0, 1e-9);
  EXPECT_NEAR(std::abs(g_value(0, 0, 0) - 3.0), 0.0, 1e-15);
}

TEST(Example1, Theorem4Exclusions) {
  const auto p = Example1Params::isospectral(1.0, 0.0, 0.0, 0.0);  // g = 3, g^3 = 27
  const auto q = Example1Params::isospectral(1.0, 0.3, 0.1, -0.4);
  EXPECT_THROW(theorem4_compare(p, q), std::invalid_argument);
  const auto r = Example1Params::isospectral(1.0, 1.0, 2.0, 0.5);
  const auto res = theorem4_compare(q, r);
  EXPECT_EQ(res.verdict, Theorem4Verdict::Inequivalent);
  EXPECT_EQ(theorem4_compare(q, q).verdict, Theorem4Verdict::Undecided);
}

TEST(Example1, IsospectralSpectra) {
  const auto rep = example1_verify(Example1Params::isospectral(1.0, 0.3, 0.1, -0.4), 3);
  EXPECT_EQ(status_of(rep, "spectra"), CheckStatus::Pass);
  EXPECT_EQ(status_of(rep, "entropy-criterion"), CheckStatus::Pass);
  EXPECT_EQ(status_of(rep, "disorder-criterion"), CheckStatus::Pass);
}

TEST(Tripartite, PartialTraceIsExample1) {
  const auto rep = tripartite_verify({0.3, 0.1, -0.4}, std::array<double, 3>{1.0, 2.0, 0.5}, 4);
  EXPECT_FALSE(rep.failed());
  EXPECT_EQ(status_of(rep, "trace-over-A3"), CheckStatus::Pass);
}

TEST(Example2, ExactChecksOnSubfamily) {
  const auto rep = example2_verify({Rational(0), Rational(1), Rational(2)}, 5);
  EXPECT_EQ(status_of(rep, "block-symmetry"), CheckStatus::Pass);
  EXPECT_EQ(status_of(rep, "pt-invariance"), CheckStatus::Pass);
  EXPECT_EQ(status_of(rep, "chart-block-1 derived"), CheckStatus::Pass);
  EXPECT_EQ(status_of(rep, "chart-block-2 derived"), CheckStatus::Pass);
}

TEST(Example2, PrintedBlocksLoseSymmetryWithE1) {
  EXPECT_FALSE(block_symmetry_defects(example2_blocks({Rational(1), Rational(2), Rational(3)})).empty());
  EXPECT_TRUE(block_symmetry_defects(example2_blocks({Rational(0), Rational(2), Rational(3)})).empty());
}

TEST(Example2, RankSeven) {
  EXPECT_EQ(rank_exact(coefficient_matrix_exact(build_example2({}), default_cut(2))), 7u);
}

TEST(Example3, SmolinDefaults) {
  const auto p = Example3Params::smolin();
  const auto rep = example3_verify(p, std::nullopt, 6);
  EXPECT_EQ(status_of(rep, "pt-invariance AB:CD"), CheckStatus::Pass);
  EXPECT_EQ(status_of(rep, "membership BCD:A"), CheckStatus::Pass);
  EXPECT_EQ(status_of(rep, "probe V_BCD^1"), CheckStatus::Pass);
  EXPECT_EQ(status_of(rep, "segre-pullback"), CheckStatus::Pass);
  EXPECT_EQ(status_of(rep, "bilinear-ranks"), CheckStatus::Pass);
}

TEST(Example3, ValidationRejectsBadParameters) {
  auto p = Example3Params::smolin();
  p.a[3] = GR(0);
  EXPECT_THROW(p.validate(), std::invalid_argument);
  auto q = Example3Params::smolin();
  q.h[1] = q.h[0];
  EXPECT_THROW(q.validate(), std::invalid_argument);
}

TEST(Example3, Theorem5Assignments) {
  const std::array<Complex, 4> lam{-1.0, -1.0, -1.0, -1.0};
  EXPECT_EQ(theorem5_compare(lam, lam).satisfied.size(), 24u);
  EXPECT_EQ(theorem5_compare(lam, lam).verdict, Theorem5Verdict::Undecided);
  const std::array<Complex, 4> other{2.0, 3.0, 5.0, 7.0};
  EXPECT_EQ(theorem5_compare(lam, other).verdict, Theorem5Verdict::Inequivalent);
}

TEST(Reports, DeterministicGivenSeed) {
  const auto a = example3_verify(Example3Params::random_a(3), std::nullopt, 9).text();
  const auto b = example3_verify(Example3Params::random_a(3), std::nullopt, 9).text();
  EXPECT_EQ(a, b);
}
