#pragma once

// Degenerating loci {r : rank(sum_i r_i A_i) <= k} of a state's pencil:
// membership, symbolic minors, sampling, local dimension, the linearity probe
// and pullbacks along Segre maps.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dloci/exact.hpp"
#include "dloci/numeric.hpp"
#include "dloci/poly.hpp"
#include "dloci/states.hpp"

namespace dloci {

/// The m blocks A_i (each n x t) of a coefficient matrix split along a cut.
struct Pencil {
  std::vector<FloatMatrix> blocks;
  /// Unweighted exact blocks when the source was exact. They differ from the
  /// float blocks by a positive column scaling, which leaves every rank alone.
  std::optional<std::vector<ExactMatrix>> exact_blocks;

  std::size_t m() const { return blocks.size(); }
  std::size_t n() const { return blocks.empty() ? 0 : static_cast<std::size_t>(blocks.front().rows()); }
  std::size_t t() const { return blocks.empty() ? 0 : static_cast<std::size_t>(blocks.front().cols()); }
  bool is_exact() const { return exact_blocks.has_value(); }

  FloatMatrix evaluate(const FloatVector& x) const;
  ExactMatrix evaluate(const ExactVector& x) const;
  /// rank_residual of F(x) for k >= 1. For k = 0 the ratio is 0 or 1, so
  /// sigma_1(F(x)) is scaled by sum_i |x_i| |A_i|_F instead.
  double residual(const FloatVector& x, std::size_t k) const;
  /// sum_i r_i A_i as a matrix of linear forms (exact pencils only).
  SymbolicPencil symbolic() const;

  static Pencil from_blocks(std::vector<FloatMatrix> blocks);
  static Pencil from_exact_blocks(std::vector<ExactMatrix> blocks);
};

/// Float blocks absorb sqrt(weight) into the columns; exact blocks keep the
/// coefficients as they are.
Pencil pencil_from_ensemble(const Ensemble& e, const Cut& cut);

/// Columns sqrt(lambda_j) v_j for eigenpairs with lambda_j > rank_tol.
Pencil pencil_from_density(const DensityMatrix& rho, const Cut& cut, const TolerancePolicy& policy = {});

/// sigma_{k+1} / sigma_1 of M (0 when rank(M) <= k trivially or M = 0).
double rank_residual(const FloatMatrix& m, std::size_t k);

/// rank(sum x_i A_i) <= k. Float points use sigma_{k+1} <= membership_tol * sigma_1.
bool membership(const Pencil& p, const FloatVector& x, std::size_t k, const TolerancePolicy& policy = {});
bool membership(const Pencil& p, const ExactVector& x, std::size_t k);

/// sum_ij x_i conj(x_j) rho_ij.
FloatMatrix hermitian_form(const DensityMatrix& rho, const FloatVector& x, const Cut& cut);
ExactMatrix hermitian_form(const DensityMatrix& rho, const ExactVector& x, const Cut& cut);

/// Codimension of V_A^0 for the pure state v across cut.
std::size_t schmidt_number(const FloatVector& v, const std::vector<std::size_t>& dims, const Cut& cut,
                           const TolerancePolicy& policy = {});
std::size_t schmidt_number(const ExactVector& v, const std::vector<std::size_t>& dims, const Cut& cut);

/// A point of a product of projective spaces, one unit vector per factor.
using ProductPoint = std::vector<FloatVector>;

/// Locus in CP^{d_1-1} x ... x CP^{d_L-1} pulled back from an ambient pencil
/// in prod d_f parameters along the Segre map. A single factor is the plain
/// locus V^k itself.
class Locus {
 public:
  Locus(Pencil pencil, std::size_t k, std::vector<std::size_t> factor_dims = {});

  const Pencil& pencil() const { return pencil_; }
  std::size_t k() const { return k_; }
  const std::vector<std::size_t>& factor_dims() const { return factor_dims_; }
  std::size_t factors() const { return factor_dims_.size(); }
  /// sum_f (d_f - 1).
  std::size_t ambient_dimension() const;

  FloatVector embed(const ProductPoint& x) const;
  FloatMatrix evaluate(const ProductPoint& x) const { return pencil_.evaluate(embed(x)); }
  double residual(const ProductPoint& x) const { return pencil_.residual(embed(x), k_); }
  bool contains(const ProductPoint& x, const TolerancePolicy& policy = {}) const;

  /// Gauss-Newton on [I | Y] Q F(x) = 0 with one affine chart per factor.
  /// Returns the converged point or nullopt.
  std::optional<ProductPoint> project(const ProductPoint& start, Rng& rng) const;

  /// Zeros of a (k+1)-minor of L F R (random L, R) along a random line in a
  /// random factor, filtered by membership. Appends to out.
  void slice_line(Rng& rng, const TolerancePolicy& policy, std::vector<ProductPoint>& out) const;

  /// Jacobian of the rank-k conditions pulled back to the factor coordinates,
  /// columns grouped by factor.
  FloatMatrix tangent_jacobian(const ProductPoint& x) const;
  /// Numerical rank of rank(F(x)), sigma_k / sigma_1 guard applied by callers.
  std::size_t pencil_rank(const ProductPoint& x, const TolerancePolicy& policy = {}) const;

 private:
  Pencil pencil_;
  std::size_t k_;
  std::vector<std::size_t> factor_dims_;
};

struct SampleOptions {
  /// Random lines tried before giving up on line slicing.
  std::size_t max_lines = 60;
  /// Newton projections from random starts, per requested point.
  std::size_t newton_attempts = 4;
  bool use_newton = true;
};

/// Points of the locus: random line slices first, then Newton projections
/// from random starts when slices come up short. May return fewer than count.
std::vector<ProductPoint> sample_points(const Locus& locus, std::size_t count, std::uint64_t seed,
                                        const TolerancePolicy& policy = {}, const SampleOptions& opts = {});
/// Plain-locus form returning ambient points.
std::vector<FloatVector> sample_points(const Pencil& p, std::size_t k, std::size_t count, std::uint64_t seed,
                                       const TolerancePolicy& policy = {}, const SampleOptions& opts = {});

/// Projective dimension of the locus at x (sum(d_f - 1) minus the Jacobian rank).
/// Throws std::invalid_argument when x is not on the locus.
int local_dimension(const Locus& locus, const ProductPoint& x, const TolerancePolicy& policy = {});
int local_dimension(const Pencil& p, std::size_t k, const FloatVector& x, const TolerancePolicy& policy = {});

enum class ProbeVerdict { Linear, Nonlinear, Inconclusive };
std::string to_string(ProbeVerdict v);

struct ProbeWitness {
  ProductPoint point;
  ProductPoint direction;
  double step = 0.0;
  double residual = 0.0;
  double residual_half_step = 0.0;
  std::size_t sample_index = 0;
};

struct ProbeReport {
  ProbeVerdict verdict = ProbeVerdict::Inconclusive;
  std::optional<ProbeWitness> witness;
  std::size_t samples_used = 0;
  std::size_t smooth_points = 0;
  std::size_t tangent_tests = 0;
  std::uint64_t seed = 0;
  double max_passing_residual = 0.0;
  /// Per factor, how many smooth points had their max-modulus coordinate at
  /// each index (affine chart used).
  std::vector<std::vector<std::size_t>> chart_coverage;
  std::vector<std::string> notes;
};

struct ProbeOptions {
  std::vector<double> steps{0.05, 0.1, 0.2};
  std::size_t directions_per_point = 3;
  std::size_t min_linear_samples = 20;
  /// Stop at the first reproducible failure.
  bool stop_at_witness = true;
};

ProbeReport linearity_probe(const Locus& locus, std::size_t samples, std::uint64_t seed,
                            const TolerancePolicy& policy = {}, const ProbeOptions& opts = {});
ProbeReport linearity_probe(const Pencil& p, std::size_t k, std::size_t samples, std::uint64_t seed,
                            const TolerancePolicy& policy = {}, const ProbeOptions& opts = {});

struct MinorFactorization {
  IndexSet rows;
  IndexSet cols;
  /// Zero minors carry constant 0 and no factors.
  GaussianRational constant;
  std::vector<std::size_t> factors;  // indices into the predicted forms
};

struct SeparableCertificate {
  bool certified = false;
  std::vector<LinearForm> forms;  // L_u = sum_i r_i a_u^i, canonical scaling
  std::vector<MinorFactorization> minors;
  std::size_t nonzero_minors = 0;
  std::string detail;
};

/// Factors a_u (x) b_u of a product vector in the cut ordering; nullopt when
/// the vector is not a product.
std::optional<std::pair<ExactVector, ExactVector>> split_product(const ExactVector& v,
                                                                  const std::vector<std::size_t>& dims,
                                                                  const Cut& cut);

/// Certifies that every nonzero (k+1)-minor is a constant times the product of
/// the predicted linear forms of its column set. Rejects non-product vectors.
SeparableCertificate verify_separable_factorization(const Ensemble& e, const Cut& cut, std::size_t k);

/// Symbolic side of a Segre pullback: minors as polynomials in the factor
/// coordinates r^f_j (named "r<f>_<j>", 1-based factor, 0-based coordinate).
struct SegrePullback {
  std::vector<std::size_t> factor_dims;
  std::vector<std::string> names;
  std::vector<HomogPoly> minors;
};

SegrePullback segre_pullback(const Pencil& p, const std::vector<std::size_t>& factor_dims, std::size_t k);
/// r_{i...} -> prod_f x^f_{i_f} as polynomials in sum d_f variables.
std::vector<HomogPoly> segre_images(const std::vector<std::size_t>& factor_dims);

/// Rank of the coefficient matrix of a (1,1) form in dims.first + dims.second
/// variables. Throws for other bidegrees.
std::size_t bilinear_rank(const HomogPoly& form, std::pair<std::size_t, std::size_t> dims);

/// Pairs (i, j) with A_i P A_j^dagger != A_j P A_i^dagger, P = diag(weights)
/// (identity when weights is empty). No defects means rho^PT = rho.
std::vector<std::pair<std::size_t, std::size_t>> block_symmetry_defects(const std::vector<ExactMatrix>& blocks,
                                                                        const std::vector<Rational>& weights = {});

}  // namespace dloci
