#include "dloci/exact.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace dloci {

namespace {

// Gaussian integer used inside fraction-free elimination.
struct GaussInt {
  mpz_class re;
  mpz_class im;

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
};

GaussInt mul_sub(const GaussInt& a, const GaussInt& b, const GaussInt& c, const GaussInt& d) {
  // a*b - c*d
  GaussInt out;
  out.re = a.re * b.re - a.im * b.im - (c.re * d.re - c.im * d.im);
  out.im = a.re * b.im + a.im * b.re - (c.re * d.im + c.im * d.re);
  return out;
}

// Exact division; the caller guarantees that b divides a in Z[i].
GaussInt div_exact(const GaussInt& a, const GaussInt& b) {
  const mpz_class n = b.re * b.re + b.im * b.im;
  mpz_class re = a.re * b.re + a.im * b.im;
  mpz_class im = a.im * b.re - a.re * b.im;
  GaussInt out;
  mpz_divexact(out.re.get_mpz_t(), re.get_mpz_t(), n.get_mpz_t());
  mpz_divexact(out.im.get_mpz_t(), im.get_mpz_t(), n.get_mpz_t());
  return out;
}

struct IntegerRows {
  std::vector<std::vector<GaussInt>> rows;
  // Product of the per-row scale factors (the integer matrix is diag(scale)*M).
  mpz_class scale = 1;
};

IntegerRows to_integer_rows(const ExactMatrix& m) {
  IntegerRows out;
  out.rows.resize(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    mpz_class l = 1;
    for (std::size_t c = 0; c < m.cols(); ++c) {
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(r, c).re().get_den_mpz_t());
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(r, c).im().get_den_mpz_t());
    }
    out.scale *= l;
    auto& row = out.rows[r];
    row.resize(m.cols());
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const Rational re = m(r, c).re() * l;
      const Rational im = m(r, c).im() * l;
      row[c].re = re.get_num();
      row[c].im = im.get_num();
    }
  }
  return out;
}

// Bareiss elimination in place. Returns the rank; `sign` tracks row swaps and
// `last_pivot` holds the final leading pivot (the determinant for full-rank
// square input).
std::size_t bareiss(std::vector<std::vector<GaussInt>>& a, std::size_t cols, int& sign, GaussInt& last_pivot) {
  const std::size_t rows = a.size();
  GaussInt prev{1, 0};
  std::size_t r = 0;
  sign = 1;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c].is_zero()) ++p;
    if (p == rows) continue;
    if (p != r) {
      std::swap(a[p], a[r]);
      sign = -sign;
    }
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        a[i][j] = div_exact(mul_sub(a[r][c], a[i][j], a[i][c], a[r][j]), prev);
      }
      a[i][c] = GaussInt{0, 0};
    }
    prev = a[r][c];
    ++r;
  }
  last_pivot = prev;
  return r;
}

long parse_sign_prefix(std::string_view& s) {
  long sign = 1;
  while (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    if (s.front() == '-') sign = -sign;
    s.remove_prefix(1);
  }
  return sign;
}

std::string trim(std::string_view s) {
  std::string out;
  for (char ch : s) {
    if (!std::isspace(static_cast<unsigned char>(ch))) out.push_back(ch);
  }
  return out;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty rational");
  Rational q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("malformed rational: " + s);
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
  q.canonicalize();
  return q;
}

std::string format_rational(const Rational& q) { return q.get_str(10); }

GaussianRational GaussianRational::parse(std::string_view text) {
  const std::string s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty Gaussian rational");
  if (s.back() != 'i') return GaussianRational(parse_rational(s));

  // Imaginary part starts at the last sign that is not the leading character.
  std::string body = s.substr(0, s.size() - 1);
  std::size_t split = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if (body[k] == '+' || body[k] == '-') {
      split = k;
      break;
    }
  }
  std::string_view re_part;
  std::string_view im_part = body;
  if (split != std::string::npos) {
    re_part = std::string_view(body).substr(0, split);
    im_part = std::string_view(body).substr(split);
  }
  const long sign = parse_sign_prefix(im_part);
  Rational im = im_part.empty() ? Rational(1) : parse_rational(im_part);
  im *= sign;
  Rational re = re_part.empty() ? Rational(0) : parse_rational(re_part);
  return {re, im};
}

std::string GaussianRational::to_string() const {
  const bool has_re = sgn(re_) != 0;
  const bool has_im = sgn(im_) != 0;
  if (!has_re && !has_im) return "0";
  std::string out;
  if (has_re) out = format_rational(re_);
  if (has_im) {
    Rational mag = abs(im_);
    if (sgn(im_) < 0) {
      out += "-";
    } else if (has_re) {
      out += "+";
    }
    if (mag != 1) out += format_rational(mag);
    out += "i";
  }
  return out;
}

GaussianRational& GaussianRational::operator+=(const GaussianRational& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
  Rational re = re_ * o.re_ - im_ * o.im_;
  Rational im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
  if (o.is_zero()) throw std::domain_error("division by zero Gaussian rational");
  const Rational n = o.norm2();
  Rational re = (re_ * o.re_ + im_ * o.im_) / n;
  Rational im = (im_ * o.re_ - re_ * o.im_) / n;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

ExactMatrix::ExactMatrix(std::size_t rows, std::size_t cols, std::vector<GaussianRational> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_) throw std::invalid_argument("ExactMatrix: entry count != rows*cols");
}

ExactMatrix ExactMatrix::from_rows(const std::vector<std::vector<GaussianRational>>& rows) {
  const std::size_t nr = rows.size();
  const std::size_t nc = nr == 0 ? 0 : rows.front().size();
  ExactMatrix out(nr, nc);
  for (std::size_t r = 0; r < nr; ++r) {
    if (rows[r].size() != nc) throw std::invalid_argument("ExactMatrix::from_rows: ragged rows");
    for (std::size_t c = 0; c < nc; ++c) out(r, c) = rows[r][c];
  }
  return out;
}

ExactMatrix ExactMatrix::identity(std::size_t n) {
  ExactMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = 1;
  return out;
}

ExactMatrix ExactMatrix::column(const ExactVector& v) { return ExactMatrix(v.size(), 1, v); }

ExactMatrix ExactMatrix::transpose() const {
  ExactMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

ExactMatrix ExactMatrix::submatrix(const std::vector<std::size_t>& row_ids,
                                   const std::vector<std::size_t>& col_ids) const {
  ExactMatrix out(row_ids.size(), col_ids.size());
  for (std::size_t r = 0; r < row_ids.size(); ++r)
    for (std::size_t c = 0; c < col_ids.size(); ++c) out(r, c) = (*this)(row_ids[r], col_ids[c]);
  return out;
}

ExactMatrix ExactMatrix::slice(std::size_t r0, std::size_t nr, std::size_t c0, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw std::out_of_range("ExactMatrix::slice out of range");
  ExactMatrix out(nr, nc);
  for (std::size_t r = 0; r < nr; ++r)
    for (std::size_t c = 0; c < nc; ++c) out(r, c) = (*this)(r0 + r, c0 + c);
  return out;
}

bool ExactMatrix::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const GR& z) { return z.is_zero(); });
}

ExactMatrix& ExactMatrix::operator+=(const ExactMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("ExactMatrix +: shape mismatch");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += o.entries_[k];
  return *this;
}

ExactMatrix& ExactMatrix::operator-=(const ExactMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("ExactMatrix -: shape mismatch");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= o.entries_[k];
  return *this;
}

ExactMatrix& ExactMatrix::operator*=(const GaussianRational& s) {
  for (auto& e : entries_) e *= s;
  return *this;
}

ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("ExactMatrix *: inner dimension mismatch");
  ExactMatrix out(a.rows_, b.cols_);
  for (std::size_t r = 0; r < a.rows_; ++r) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const GR& x = a(r, k);
      if (x.is_zero()) continue;
      for (std::size_t c = 0; c < b.cols_; ++c) {
        if (!b(k, c).is_zero()) out(r, c) += x * b(k, c);
      }
    }
  }
  return out;
}

ExactMatrix dagger(const ExactMatrix& m) {
  ExactMatrix out(m.cols(), m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(c, r) = m(r, c).conj();
  return out;
}

std::size_t rank_exact(const ExactMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  IntegerRows ints = to_integer_rows(m);
  int sign = 1;
  GaussInt pivot;
  return bareiss(ints.rows, m.cols(), sign, pivot);
}

GaussianRational det_exact(const ExactMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("det_exact: matrix is not square");
  if (m.rows() == 0) return 1;
  IntegerRows ints = to_integer_rows(m);
  int sign = 1;
  GaussInt pivot;
  const std::size_t r = bareiss(ints.rows, m.cols(), sign, pivot);
  if (r < m.rows()) return 0;
  GaussianRational det(Rational(pivot.re), Rational(pivot.im));
  det *= GaussianRational(Rational(sign));
  det /= GaussianRational(Rational(ints.scale));
  return det;
}

ExactMatrix kron(const ExactMatrix& a, const ExactMatrix& b) {
  ExactMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a(i, j).is_zero()) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    }
  return out;
}

ExactVector kron(const ExactVector& a, const ExactVector& b) {
  ExactVector out(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
  return out;
}

std::vector<IndexSet> combinations(std::size_t n, std::size_t k) {
  std::vector<IndexSet> out;
  if (k > n) return out;
  IndexSet cur(k);
  for (std::size_t i = 0; i < k; ++i) cur[i] = i;
  while (true) {
    out.push_back(cur);
    std::size_t i = k;
    while (i > 0 && cur[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) break;
    ++cur[i - 1];
    for (std::size_t j = i; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

std::vector<MinorIndex> minor_index_sets(std::size_t rows, std::size_t cols, std::size_t k) {
  if (k == 0 || k > std::min(rows, cols)) {
    throw std::invalid_argument("minor_index_sets: k=" + std::to_string(k) + " outside [1, " +
                                std::to_string(std::min(rows, cols)) + "]");
  }
  const auto row_sets = combinations(rows, k);
  const auto col_sets = combinations(cols, k);
  std::vector<MinorIndex> out;
  out.reserve(row_sets.size() * col_sets.size());
  for (const auto& rs : row_sets)
    for (const auto& cs : col_sets) out.emplace_back(rs, cs);
  return out;
}

}  // namespace dloci
