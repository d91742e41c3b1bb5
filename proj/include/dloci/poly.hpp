#pragma once

// Sparse homogeneous polynomials over Q(i), matrices of such polynomials and
// their symbolic determinants, exact division by linear forms and a numeric
// product-of-linear-forms detector.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dloci/exact.hpp"
#include "dloci/numeric.hpp"

namespace dloci {

inline constexpr std::size_t kMaxVars = 8;
inline constexpr unsigned kMaxDegree = 8;

using Exponent = std::array<std::uint8_t, kMaxVars>;

class LinearForm;

class HomogPoly {
 public:
  /// Lexicographically largest exponent first (r1 > r2 > ...).
  using TermMap = std::map<Exponent, GaussianRational, std::greater<Exponent>>;

  HomogPoly() = default;
  /// The zero polynomial in `nvars` variables, tagged with `degree`.
  HomogPoly(std::size_t nvars, unsigned degree);

  static HomogPoly constant(std::size_t nvars, const GaussianRational& c);
  /// r_{index+1}; index is 0-based.
  static HomogPoly variable(std::size_t nvars, std::size_t index);
  static HomogPoly linear(const ExactVector& coeffs);

  std::size_t nvars() const { return nvars_; }
  unsigned degree() const { return degree_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Adds c * x^e. Rejects exponents whose sum differs from degree().
  void add_term(const Exponent& e, const GaussianRational& c);
  GaussianRational coefficient(const Exponent& e) const;

  HomogPoly operator-() const;
  HomogPoly& operator+=(const HomogPoly& o);
  HomogPoly& operator-=(const HomogPoly& o);
  HomogPoly& operator*=(const GaussianRational& s);

  friend HomogPoly operator+(HomogPoly a, const HomogPoly& b) { return a += b; }
  friend HomogPoly operator-(HomogPoly a, const HomogPoly& b) { return a -= b; }
  friend HomogPoly operator*(HomogPoly a, const GaussianRational& s) { return a *= s; }
  friend HomogPoly operator*(const HomogPoly& a, const HomogPoly& b);
  /// Structural equality of term maps; zero polynomials compare equal at any degree.
  friend bool operator==(const HomogPoly& a, const HomogPoly& b);

  GaussianRational evaluate(const ExactVector& x) const;
  Complex evaluate(const FloatVector& x) const;

  /// Replaces r_i by images[i]; every image must share nvars and degree.
  HomogPoly substitute(const std::vector<HomogPoly>& images) const;

  /// Canonical text "c*r1^a*r2^b + ...". Custom variable names may be given.
  std::string to_string(const std::vector<std::string>& names = {}) const;

 private:
  std::size_t nvars_ = 0;
  unsigned degree_ = 0;
  TermMap terms_;
};

/// Default names r1..rn.
std::vector<std::string> default_var_names(std::size_t nvars);

/// Parses the canonical text form back into a polynomial. Unmentioned
/// variables may be absent; `homogenize_var`, when given, raises each term with
/// that variable up to the maximal term degree (affine-chart input).
HomogPoly parse_poly(std::string_view text, const std::vector<std::string>& names,
                     std::optional<std::size_t> homogenize_var = std::nullopt);

/// Nonzero linear form scaled so that its first nonzero coefficient is 1.
class LinearForm {
 public:
  /// Throws std::invalid_argument for the zero vector.
  explicit LinearForm(ExactVector coeffs);

  const ExactVector& coefficients() const { return coeffs_; }
  std::size_t nvars() const { return coeffs_.size(); }
  /// The exact scalar removed by canonical scaling (input = scale * canonical).
  const GaussianRational& scale() const { return scale_; }
  HomogPoly to_poly() const { return HomogPoly::linear(coeffs_); }
  GaussianRational evaluate(const ExactVector& x) const;
  std::string to_string(const std::vector<std::string>& names = {}) const { return to_poly().to_string(names); }

  friend bool operator==(const LinearForm& a, const LinearForm& b) { return a.coeffs_ == b.coeffs_; }

 private:
  ExactVector coeffs_;
  GaussianRational scale_{1};
};

/// Exact quotient q with q*L == poly, or nullopt when the remainder is nonzero.
/// Leading-term elimination in lexicographic order.
std::optional<HomogPoly> divide_linear(const HomogPoly& poly, const LinearForm& l);

/// Dense matrix of homogeneous polynomials in a common variable set.
class PolyMatrix {
 public:
  PolyMatrix() = default;
  PolyMatrix(std::size_t rows, std::size_t cols, std::size_t nvars);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nvars() const { return nvars_; }

  HomogPoly& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const HomogPoly& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  PolyMatrix submatrix(const IndexSet& row_ids, const IndexSet& col_ids) const;
  ExactMatrix instantiate(const ExactVector& x) const;
  FloatMatrix instantiate(const FloatVector& x) const;
  /// True when every entry is zero or homogeneous of degree one.
  bool is_linear() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t nvars_ = 0;
  std::vector<HomogPoly> entries_;
};

/// A pencil sum_i r_i A_i held symbolically.
using SymbolicPencil = PolyMatrix;

/// Builds sum_i r_i blocks[i].
SymbolicPencil symbolic_pencil(const std::vector<ExactMatrix>& blocks);

/// Cofactor expansion along rows, memoized on the set of remaining columns.
HomogPoly sym_det(const PolyMatrix& p);

/// All (k+1)x(k+1) minors in minor_index_sets order, zeros included.
std::vector<HomogPoly> sym_minors(const PolyMatrix& p, std::size_t k);

/// Terms of `p` with the exponent of `var` dropped, i.e. p restricted to the
/// affine chart r_var = 1.
HomogPoly::TermMap dehomogenize(const HomogPoly& p, std::size_t var);
std::string affine_to_string(const HomogPoly::TermMap& terms, std::size_t nvars, std::size_t chart_var,
                             const std::vector<std::string>& names);

enum class FactorVerdict { AllLinear, NonlinearWitness, Inconclusive };
std::string to_string(FactorVerdict v);

struct FactorScanResult {
  FactorVerdict verdict = FactorVerdict::Inconclusive;
  /// Distinct hyperplanes (unit-normalized coefficients) with multiplicities.
  std::vector<FloatVector> factors;
  std::vector<std::size_t> multiplicities;
  Complex constant{0.0, 0.0};
  double residual = 0.0;
  /// A zero of poly not lying on any certified hyperplane.
  std::optional<FloatVector> witness;
  std::string detail;
};

/// Numeric test of whether poly is a product of linear forms over C, by
/// factoring restrictions to random planes and lifting matching roots.
FactorScanResult linear_factor_scan(const HomogPoly& poly, double tol, std::uint64_t seed);

}  // namespace dloci
