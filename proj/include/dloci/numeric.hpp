#pragma once

// Complex double-precision linear algebra: Jacobi eigensolver, one-sided
// Jacobi SVD, numerical rank, seeded randomness and polynomial roots.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dloci/exact.hpp"

namespace dloci {

using Complex = std::complex<double>;
using FloatMatrix = Eigen::MatrixXcd;
using FloatVector = Eigen::VectorXcd;

struct TolerancePolicy {
  double rank_tol = 1e-9;
  double eig_tol = 1e-10;
  double membership_tol = 1e-8;

  /// Throws std::invalid_argument unless every tolerance lies in (0, 1e-4].
  void validate() const;

  /// Defaults overridden by DLOCI_RANK_TOL, DLOCI_EIG_TOL and
  /// DLOCI_MEMBERSHIP_TOL when those are set.
  static TolerancePolicy from_env();
};

struct EigenDecomposition {
  std::vector<double> values;  // descending
  FloatMatrix vectors;         // column j pairs with values[j]
  double reconstruction_error = 0.0;
};

/// Cyclic complex Jacobi. Rejects input whose Hermitian defect exceeds
/// policy.eig_tol, naming the worst entry.
EigenDecomposition eig_hermitian(const FloatMatrix& m, const TolerancePolicy& policy = {});

struct SingularValueDecomposition {
  std::vector<double> sigma;  // descending, length cols
  FloatMatrix u;              // rows x cols; zero columns where sigma vanishes
  FloatMatrix v;              // cols x cols unitary
};

/// One-sided (Hestenes) Jacobi SVD, M = U diag(sigma) V^dagger.
SingularValueDecomposition svd_jacobi(const FloatMatrix& m);

std::vector<double> singular_values(const FloatMatrix& m);

/// Count of singular values above rel_tol * sigma_max. Zero for the zero matrix.
std::size_t rank_from_singular_values(const std::vector<double>& sigma, double rel_tol);
std::size_t numerical_rank(const FloatMatrix& m, const TolerancePolicy& policy = {});

/// Orthonormal basis (as columns) of {x : M x = 0}, using rel_tol on sigma.
FloatMatrix null_space(const FloatMatrix& m, double rel_tol);
/// Orthonormal basis of {y : y^dagger M = 0}.
FloatMatrix left_null_space(const FloatMatrix& m, double rel_tol);

/// mt19937_64 with hand-written uniform and normal transforms so streams are
/// identical on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal (Box-Muller).
  double normal();
  /// Real and imaginary parts independent N(0, 1/2).
  Complex complex_normal();
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n; }
  std::int64_t integer(std::int64_t lo, std::int64_t hi);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// splitmix64 finalizer; derives independent child seeds from (master, counter).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter);

FloatVector random_complex_vector(std::size_t dim, Rng& rng);
/// Uniform on the unit sphere of C^dim.
FloatVector random_unit_vector(std::size_t dim, Rng& rng);
FloatMatrix random_complex_matrix(std::size_t rows, std::size_t cols, Rng& rng);

/// Modified Gram-Schmidt (two passes) on a seeded complex Gaussian matrix.
FloatMatrix random_unitary(std::size_t dim, std::uint64_t seed);

FloatMatrix to_float(const ExactMatrix& m);
FloatVector to_float(const ExactVector& v);

/// Largest |M_ij|.
double max_abs(const FloatMatrix& m);

/// Roots of sum_k coeffs[k] x^k. Leading zero coefficients (relative to the
/// largest) are dropped first; companion eigenvalues are Newton-polished.
std::vector<Complex> polynomial_roots(const std::vector<Complex>& coeffs);

/// Scales so the max-modulus coordinate is exactly 1.
FloatVector normalize_projective(const FloatVector& x);

}  // namespace dloci
