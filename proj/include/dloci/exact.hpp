#pragma once

// Exact arithmetic over the Gaussian rationals Q(i) and small dense matrices
// over that field.

#include <complex>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace dloci {

using Rational = mpq_class;

/// Parses "p", "p/q" or "-p/q" into a canonical rational.
Rational parse_rational(std::string_view text);
std::string format_rational(const Rational& q);

/// A complex number re + im*i with arbitrary-precision rational parts.
///
/// Both parts are kept in canonical form (reduced, positive denominator) after
/// every operation, so operator== is structural equality.
class GaussianRational {
 public:
  GaussianRational() = default;
  GaussianRational(long value) : re_(value) {}  // NOLINT(google-explicit-constructor)
  GaussianRational(Rational re) : re_(std::move(re)) { re_.canonicalize(); }  // NOLINT
  GaussianRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }

  static GaussianRational i() { return {Rational(0), Rational(1)}; }

  /// Accepts "a/b+c/di" with either part omitted: "3", "1/2i", "-1+2i", "i", "-i".
  static GaussianRational parse(std::string_view text);

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }

  GaussianRational conj() const { return {re_, -im_}; }
  /// |z|^2, always a non-negative rational.
  Rational norm2() const { return re_ * re_ + im_ * im_; }

  std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }
  std::string to_string() const;

  GaussianRational operator-() const { return {-re_, -im_}; }
  GaussianRational& operator+=(const GaussianRational& o);
  GaussianRational& operator-=(const GaussianRational& o);
  GaussianRational& operator*=(const GaussianRational& o);
  /// Throws std::domain_error on division by zero.
  GaussianRational& operator/=(const GaussianRational& o);

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }

  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

 private:
  Rational re_{0};
  Rational im_{0};
};

using GR = GaussianRational;
using ExactVector = std::vector<GaussianRational>;

/// Dense row-major matrix over the Gaussian rationals.
class ExactMatrix {
 public:
  ExactMatrix() = default;
  ExactMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {}
  ExactMatrix(std::size_t rows, std::size_t cols, std::vector<GaussianRational> entries);
  /// Row-major nested initializer, convenient for small literal matrices.
  static ExactMatrix from_rows(const std::vector<std::vector<GaussianRational>>& rows);
  static ExactMatrix identity(std::size_t n);
  static ExactMatrix column(const ExactVector& v);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const std::vector<GaussianRational>& entries() const { return entries_; }

  GaussianRational& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const GaussianRational& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  ExactMatrix transpose() const;
  ExactMatrix submatrix(const std::vector<std::size_t>& row_ids, const std::vector<std::size_t>& col_ids) const;
  /// Rows [r0, r0+nr) and columns [c0, c0+nc).
  ExactMatrix slice(std::size_t r0, std::size_t nr, std::size_t c0, std::size_t nc) const;
  bool is_zero() const;

  ExactMatrix& operator+=(const ExactMatrix& o);
  ExactMatrix& operator-=(const ExactMatrix& o);
  ExactMatrix& operator*=(const GaussianRational& s);

  friend ExactMatrix operator+(ExactMatrix a, const ExactMatrix& b) { return a += b; }
  friend ExactMatrix operator-(ExactMatrix a, const ExactMatrix& b) { return a -= b; }
  friend ExactMatrix operator*(ExactMatrix a, const GaussianRational& s) { return a *= s; }
  friend ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b);
  friend bool operator==(const ExactMatrix& a, const ExactMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<GaussianRational> entries_;
};

/// Conjugate transpose.
ExactMatrix dagger(const ExactMatrix& m);

/// Rank over Q(i). Rows are scaled to Gaussian integers and reduced with
/// Bareiss fraction-free elimination, so every intermediate division is exact.
std::size_t rank_exact(const ExactMatrix& m);

/// Determinant via Bareiss elimination. Throws std::invalid_argument for
/// non-square input.
GaussianRational det_exact(const ExactMatrix& m);

/// Kronecker product in the basis order |11>,...,|1n>,...,|m1>,...,|mn>.
ExactMatrix kron(const ExactMatrix& a, const ExactMatrix& b);
ExactVector kron(const ExactVector& a, const ExactVector& b);

using IndexSet = std::vector<std::size_t>;
using MinorIndex = std::pair<IndexSet, IndexSet>;

/// All k-subsets of {0..n-1} in lexicographic order.
std::vector<IndexSet> combinations(std::size_t n, std::size_t k);

/// Every (row-subset, col-subset) pair of size k, row subsets outermost, both
/// in lexicographic order. Requires 1 <= k <= min(rows, cols).
std::vector<MinorIndex> minor_index_sets(std::size_t rows, std::size_t cols, std::size_t k);

}  // namespace dloci
