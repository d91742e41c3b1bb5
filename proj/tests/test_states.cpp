#include <gtest/gtest.h>

#include <cmath>

#include "dloci/states.hpp"

using namespace dloci;

namespace {

Ensemble bell() { return Ensemble::exact({2, 2}, {Rational(1)}, {ExactVector{GR(1), GR(0), GR(0), GR(1)}}); }

// Direct index loop, independent of the permutation-based implementation.
FloatMatrix naive_pt_second(const FloatMatrix& rho, std::size_t m, std::size_t n) {
  FloatMatrix out(rho.rows(), rho.cols());
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l < n; ++l)
          out(static_cast<Eigen::Index>(i * n + l), static_cast<Eigen::Index>(k * n + j)) =
              rho(static_cast<Eigen::Index>(i * n + j), static_cast<Eigen::Index>(k * n + l));
  return out;
}

}  // namespace

TEST(Cut, ParseAndValidate) {
  const Cut c = parse_cut("BCD:A", 4);
  EXPECT_EQ(c.first, (std::vector<std::size_t>{1, 2, 3}));
  EXPECT_EQ(c.second, (std::vector<std::size_t>{0}));
  EXPECT_EQ(c.to_string(), "BCD:A");
  EXPECT_THROW(parse_cut("AB:B", 3), std::invalid_argument);
  EXPECT_THROW(parse_cut("AB:", 2), std::invalid_argument);
  EXPECT_THROW(parse_cut("A:C", 2), std::invalid_argument);
  EXPECT_EQ(default_cut(3).to_string(), "A:BC");
  EXPECT_EQ(cut_shape({2, 3, 5}, parse_cut("AC:B", 3)), (std::pair<std::size_t, std::size_t>{10, 3}));
}

TEST(Density, TraceOneAndExact) {
  const DensityMatrix rho = from_ensemble(bell());
  ASSERT_TRUE(rho.is_exact());
  EXPECT_EQ((*rho.exact)(0, 3), GR(Rational(1, 2)));
  EXPECT_NEAR(rho.matrix.trace().real(), 1.0, 1e-15);
  EXPECT_THROW(Ensemble::exact({2, 2}, {Rational(-1)}, {ExactVector(4, GR(1))}), std::invalid_argument);
}

TEST(PartialTranspose, MatchesIndexLoop) {
  Rng rng(2);
  for (std::size_t m : {2u, 3u})
    for (std::size_t n : {2u, 3u, 4u}) {
      const FloatMatrix g = random_complex_matrix(m * n, m * n, rng);
      const FloatMatrix rho = g * g.adjoint();
      const FloatMatrix pt = partial_transpose(rho, {m, n}, default_cut(2));
      EXPECT_LT((pt - naive_pt_second(rho, m, n)).norm(), 1e-12);
      EXPECT_LT((partial_transpose(pt, {m, n}, default_cut(2)) - rho).norm(), 1e-12);
    }
}

TEST(PartialTranspose, BellIsNpt) {
  const auto r = is_ppt(from_ensemble(bell()), default_cut(2));
  EXPECT_FALSE(r.ppt);
  EXPECT_NEAR(r.min_eigenvalue, -0.5, 1e-12);
  EXPECT_FALSE(pt_invariant_exact(from_ensemble(bell()), default_cut(2)));
}

TEST(PartialTrace, ProductState) {
  const ExactVector a{GR(1), GR(2)}, b{GR(0), GR(1), GR::i()};
  const Ensemble e = Ensemble::exact({2, 3}, {Rational(1)}, {kron(a, b)});
  const DensityMatrix ra = partial_trace(from_ensemble(e), {0});
  EXPECT_NEAR(ra.matrix(0, 0).real(), 0.2, 1e-12);
  EXPECT_NEAR(ra.matrix(1, 1).real(), 0.8, 1e-12);
  EXPECT_NEAR(std::abs(ra.matrix(0, 1) - Complex(0.4, 0.0)), 0.0, 1e-12);
}

TEST(Spectra, ProductAndBell) {
  const ExactVector a{GR(1), GR(0)};
  const auto prod = spectra_report(from_ensemble(Ensemble::exact({2, 2}, {Rational(1)}, {kron(a, a)})));
  EXPECT_NEAR(prod.global_entropy, 0.0, 1e-12);
  for (bool b : prod.entropy_criterion_fulfilled) EXPECT_TRUE(b);
  for (bool b : prod.disorder_criterion_fulfilled) EXPECT_TRUE(b);
  const auto s = spectra_report(from_ensemble(bell()));
  EXPECT_NEAR(s.local_entropies[0], std::log(2.0), 1e-12);
  EXPECT_FALSE(s.entropy_criterion_fulfilled[0]);
  EXPECT_FALSE(s.disorder_criterion_fulfilled[1]);
}

TEST(Majorization, PartialSums) {
  EXPECT_TRUE(majorized_by({0.5, 0.5}, {1.0}));
  EXPECT_FALSE(majorized_by({1.0}, {0.5, 0.5}));
  EXPECT_TRUE(majorized_by({0.25, 0.25, 0.25, 0.25}, {0.5, 0.3, 0.2}));
  EXPECT_NEAR(von_neumann_entropy({0.5, 0.5, 0.0}), std::log(2.0), 1e-15);
}
