#pragma once

// The three example families (Hesse-cubic pencil, the PT-invariant 4x6 family,
// the four-qubit Smolin generalization), the tripartite pure family, and their
// verification suites.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dloci/exact.hpp"
#include "dloci/numeric.hpp"
#include "dloci/poly.hpp"
#include "dloci/states.hpp"
#include "dloci/varieties.hpp"

namespace dloci {

enum class CheckStatus { Pass, Fail, Discrepancy, Info };
std::string to_string(CheckStatus s);

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::Info;
  std::string detail;
};

/// Outcome of a verify suite. Discrepancy marks a disagreement with printed
/// data whose derived counterpart is checked separately; it does not fail.
struct VerifyReport {
  std::string example;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<CheckResult> checks;
  std::optional<ProbeReport> probe;
  std::uint64_t seed = 0;
  /// Command line that reruns the suite.
  std::string reproduce;

  void add(std::string name, CheckStatus status, std::string detail);
  void add(std::string name, bool ok, std::string detail) {
    add(std::move(name), ok ? CheckStatus::Pass : CheckStatus::Fail, std::move(detail));
  }
  bool failed() const;
  const CheckResult* find(const std::string& name) const;
  std::string text() const;
};

// ---------------------------------------------------------------------------
// Example 1

/// The cubes t^3, v^3, s^3 of the three complex parameters. The isospectral
/// slice sets each cube to h e^{i theta_j}.
struct Example1Params {
  std::array<Complex, 3> cubes{};
  std::optional<std::array<GR, 3>> exact_cubes;
  std::optional<std::array<double, 3>> theta;
  double h = 1.0;

  static Example1Params from_exact_cubes(const GR& a, const GR& b, const GR& c);
  /// Parameters t, v, s themselves (exact); the cubes are formed exactly.
  static Example1Params from_exact_tvs(const GR& t, const GR& v, const GR& s);
  static Example1Params from_complex_tvs(Complex t, Complex v, Complex s);
  static Example1Params isospectral(double h, double theta1, double theta2, double theta3);

  /// Throws std::invalid_argument on a zero parameter or h <= 0.
  void validate() const;
  bool is_exact() const { return exact_cubes.has_value(); }
};

/// v_1 = t^3|11>+|22>+|33>, v_2 = v^3|12>+|23>+|31>, v_3 = s^3|13>+|21>+|32>,
/// each with total weight 1/3 after normalization.
Ensemble build_example1(const Example1Params& p);

/// a b c r1^3 + r2^3 + r3^3 - (a+b+c) r1 r2 r3.
HomogPoly hesse_cubic(const GR& a, const GR& b, const GR& c);

/// (e^{i theta1} + e^{i theta2} + e^{i theta3}) / e^{i (theta1+theta2+theta3)/3}.
Complex g_value(double theta1, double theta2, double theta3);
/// The Hesse invariant (a+b+c)/(abc)^{1/3}, principal cube root.
Complex g_value(const Example1Params& p);

/// x^3 (x^3+216)^3 / (27 - x^3)^3. Throws std::domain_error at the pole.
Complex moduli_k(Complex x);
GR moduli_k(const GR& x);

enum class Theorem4Verdict { Inequivalent, Undecided };
std::string to_string(Theorem4Verdict v);

struct Theorem4Result {
  Theorem4Verdict verdict = Theorem4Verdict::Undecided;
  Complex g_p, g_q, k_p, k_q;
  double distance = 0.0;
};

/// Both parameter sets must lie on the isospectral slice with g^3 away from
/// {0, -216, 27}; throws std::invalid_argument naming the violated exclusion.
Theorem4Result theorem4_compare(const Example1Params& p, const Example1Params& q);

/// Distance of g^3 to the printed exclusion set {0, -216, 27}.
double hesse_exclusion_distance(Complex g);

VerifyReport example1_verify(const Example1Params& p, std::uint64_t seed, const TolerancePolicy& policy = {});

// ---------------------------------------------------------------------------
// Tripartite pure family

/// (1/sqrt 3) sum_l |v_l> (x) |l> with v_l from the unit-modulus slice, as a
/// one-vector ensemble in dims [3,3,3].
Ensemble build_tripartite_pure(double theta1, double theta2, double theta3);

VerifyReport tripartite_verify(const std::array<double, 3>& theta, const std::optional<std::array<double, 3>>& other,
                               std::uint64_t seed, const TolerancePolicy& policy = {});

// ---------------------------------------------------------------------------
// Example 2

struct Example2Params {
  Rational e1{0}, e2{0}, e3{1};
};

/// A1..A4, each 6 x 7.
std::vector<ExactMatrix> example2_blocks(const Example2Params& p);
/// The seven columns of the stacked 24 x 7 matrix, weight 1 each, dims [4,6].
Ensemble build_example2(const Example2Params& p);
/// The fixed rational parameter grid used for generic claims.
std::vector<Example2Params> example2_grid();

/// F' with the first column homogenized: col4 += col7, col1 <- r1 col1 + r2 col7.
PolyMatrix example2_chart_matrix(const Example2Params& p);

VerifyReport example2_verify(const Example2Params& p, std::uint64_t seed, const TolerancePolicy& policy = {});

// ---------------------------------------------------------------------------
// Example 3

/// h vectors are rows in C^4. Exact h may share any common norm (the Smolin
/// set is stored as (1,1,0,0) etc.); only their directions and mutual
/// orthogonality enter the normalized state.
struct Example3Params {
  std::array<ExactVector, 4> h;
  std::array<GR, 8> a;
  /// Float h vectors, used instead of h when set.
  std::optional<std::array<FloatVector, 4>> h_float;

  static Example3Params smolin();
  /// Smolin h vectors with random nonzero Gaussian-integer a's in [-5, 5] + i[-5, 5].
  static Example3Params random_a(std::uint64_t seed);

  /// Throws std::invalid_argument on zero a's or non-orthogonal or unequal-norm h's.
  void validate() const;
  std::array<Complex, 4> lambdas() const;
  std::array<GR, 4> lambdas_exact() const;
};

/// The 16 x 4 matrix T in the printed interleaving.
ExactMatrix example3_T(const Example3Params& p);
/// Normalized columns of T with weight 1/4 each, dims [2,2,2,2].
Ensemble build_example3(const Example3Params& p);

/// The printed 2 x 4 matrix whose rank-1 locus is V_BCD^1; x indexed by
/// 4b + 2c + d.
FloatMatrix example3_printed_matrix(const Example3Params& p, const FloatVector& x);

/// The four factors (a1 X0 Y0 + a7 X1 Y1), (a3 X0 Y1 + a5 X1 Y0),
/// (a4 X0 Y1 + a6 X1 Y0), (a2 X0 Y0 + a8 X1 Y1) in variables X0, X1, Y0, Y1.
std::array<HomogPoly, 4> example3_printed_factors(const Example3Params& p);

enum class Theorem5Verdict { Inequivalent, Undecided };
std::string to_string(Theorem5Verdict v);

struct Theorem5Result {
  Theorem5Verdict verdict = Theorem5Verdict::Undecided;
  /// Assignments sigma (V_i -> V'_{sigma(i)}) whose relation holds.
  std::vector<std::array<std::size_t, 4>> satisfied;
  double min_relative_gap = 0.0;
};

/// Evaluates lambda_1 lambda'_{s3} lambda'_{s4} = lambda'_{s1} lambda'_{s2} lambda_4
/// over all 24 assignments.
Theorem5Result theorem5_compare(const std::array<Complex, 4>& lambda, const std::array<Complex, 4>& lambda_other);

VerifyReport example3_verify(const Example3Params& p, const std::optional<Example3Params>& other, std::uint64_t seed,
                             const TolerancePolicy& policy = {});

}  // namespace dloci
