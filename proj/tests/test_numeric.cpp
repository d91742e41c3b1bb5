#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>

#include "dloci/numeric.hpp"

using namespace dloci;

TEST(Jacobi, EigenvaluesMatchEigenSolver) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto n = static_cast<std::size_t>(2 + trial % 7);
    const FloatMatrix g = random_complex_matrix(n, n, rng);
    const FloatMatrix h = g + g.adjoint();
    const auto ours = eig_hermitian(h);
    Eigen::SelfAdjointEigenSolver<FloatMatrix> ref(h);
    std::vector<double> expect(ref.eigenvalues().data(), ref.eigenvalues().data() + n);
    std::vector<double> got = ours.values;
    std::sort(expect.begin(), expect.end());
    std::sort(got.begin(), got.end());
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(got[i], expect[i], 1e-10);
    Eigen::VectorXd lam = Eigen::Map<const Eigen::VectorXd>(ours.values.data(), static_cast<Eigen::Index>(n));
    const FloatMatrix recon = ours.vectors * lam.cast<Complex>().asDiagonal() * ours.vectors.adjoint();
    EXPECT_LT((recon - h).norm(), 1e-10);
  }
}

TEST(Jacobi, SingularValuesMatchEigenJacobiSVD) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto rows = static_cast<std::size_t>(1 + trial % 6);
    const auto cols = static_cast<std::size_t>(1 + (trial * 7) % 5);
    const FloatMatrix m = random_complex_matrix(rows, cols, rng);
    const auto ours = singular_values(m);
    Eigen::JacobiSVD<FloatMatrix> ref(m);
    for (Eigen::Index i = 0; i < ref.singularValues().size(); ++i) EXPECT_NEAR(ours[i], ref.singularValues()(i), 1e-10);
    const auto full = svd_jacobi(m);
    EXPECT_LT((full.v.adjoint() * full.v - FloatMatrix::Identity(m.cols(), m.cols())).norm(), 1e-10);
  }
}

TEST(Rank, NumericalRankAndNullSpace) {
  Rng rng(9);
  const FloatMatrix m = random_complex_matrix(5, 2, rng) * random_complex_matrix(2, 4, rng);
  EXPECT_EQ(numerical_rank(m), 2u);
  const FloatMatrix k = null_space(m, 1e-9);
  EXPECT_EQ(k.cols(), 2);
  EXPECT_LT((m * k).norm(), 1e-10);
  EXPECT_LT((left_null_space(m, 1e-9).adjoint() * m).norm(), 1e-10);
}

TEST(Roots, RecoverKnownRoots) {
  // (z - 1)(z + 2i)(z - 3) expanded, ascending coefficients.
  const std::vector<Complex> c{Complex(0, 6), Complex(3, -8), Complex(-4, 2), 1.0};
  auto roots = polynomial_roots(c);
  ASSERT_EQ(roots.size(), 3u);
  for (Complex expect : {Complex(1, 0), Complex(0, -2), Complex(3, 0)}) {
    const double best = std::abs(*std::min_element(roots.begin(), roots.end(), [&](Complex a, Complex b) {
      return std::abs(a - expect) < std::abs(b - expect);
    }) - expect);
    EXPECT_LT(best, 1e-10);
  }
}

TEST(Rng, DeterministicStreams) {
  Rng a(42), b(42);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  const FloatMatrix u = random_unitary(4, 99);
  EXPECT_LT((u.adjoint() * u - FloatMatrix::Identity(4, 4)).norm(), 1e-12);
  EXPECT_EQ(u, random_unitary(4, 99));
}

TEST(Policy, ValidationAndEnvironment) {
  TolerancePolicy p;
  p.rank_tol = 0.5;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  setenv("DLOCI_MEMBERSHIP_TOL", "1e-7", 1);
  EXPECT_DOUBLE_EQ(TolerancePolicy::from_env().membership_tol, 1e-7);
  unsetenv("DLOCI_MEMBERSHIP_TOL");
}
