#include "dloci/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace dloci {

namespace {

constexpr int kMaxSweeps = 80;

// Unitary G with G^dagger [[a, b], [conj(b), d]] G diagonal.
struct Rotation {
  Complex g00, g01, g10, g11;
};

Rotation jacobi_rotation(double a, double d, Complex b) {
  const double mag = std::abs(b);
  const Complex phase = std::conj(b) / mag;  // e^{-i phi}
  const double theta = (d - a) / (2.0 * mag);
  double t;
  if (std::abs(theta) > 1e150) {
    t = 0.5 / theta;
  } else {
    t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
  }
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;
  return {c, s, -s * phase, c * phase};
}

void rotate_columns(FloatMatrix& m, Eigen::Index p, Eigen::Index q, const Rotation& g) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const Complex x = m(r, p);
    const Complex y = m(r, q);
    m(r, p) = x * g.g00 + y * g.g10;
    m(r, q) = x * g.g01 + y * g.g11;
  }
}

void rotate_rows_adjoint(FloatMatrix& m, Eigen::Index p, Eigen::Index q, const Rotation& g) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    const Complex x = m(p, c);
    const Complex y = m(q, c);
    m(p, c) = std::conj(g.g00) * x + std::conj(g.g10) * y;
    m(q, c) = std::conj(g.g01) * x + std::conj(g.g11) * y;
  }
}

double parse_env_tol(const char* name, double fallback) {
  const char* raw = std::getenv(name);
  if (raw == nullptr || *raw == '\0') return fallback;
  char* end = nullptr;
  const double v = std::strtod(raw, &end);
  if (end == raw || *end != '\0') throw std::invalid_argument(std::string(name) + " is not a number: " + raw);
  return v;
}

Complex horner(const std::vector<Complex>& c, Complex x) {
  Complex acc = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * x + c[k];
  return acc;
}

Complex horner_derivative(const std::vector<Complex>& c, Complex x) {
  Complex acc = 0.0;
  for (std::size_t k = c.size(); k-- > 1;) acc = acc * x + static_cast<double>(k) * c[k];
  return acc;
}

}  // namespace

void TolerancePolicy::validate() const {
  auto check = [](const char* name, double v) {
    if (!(v > 0.0 && v <= 1e-4)) {
      std::ostringstream os;
      os << name << " = " << v << " outside (0, 1e-4]";
      throw std::invalid_argument(os.str());
    }
  };
  check("rank_tol", rank_tol);
  check("eig_tol", eig_tol);
  check("membership_tol", membership_tol);
}

TolerancePolicy TolerancePolicy::from_env() {
  TolerancePolicy p;
  p.rank_tol = parse_env_tol("DLOCI_RANK_TOL", p.rank_tol);
  p.eig_tol = parse_env_tol("DLOCI_EIG_TOL", p.eig_tol);
  p.membership_tol = parse_env_tol("DLOCI_MEMBERSHIP_TOL", p.membership_tol);
  p.validate();
  return p;
}

EigenDecomposition eig_hermitian(const FloatMatrix& m, const TolerancePolicy& policy) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eig_hermitian: matrix is not square");
  const Eigen::Index n = m.rows();
  double worst = 0.0;
  Eigen::Index wr = 0, wc = 0;
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = r; c < n; ++c) {
      const double d = std::abs(m(r, c) - std::conj(m(c, r)));
      if (d > worst) {
        worst = d;
        wr = r;
        wc = c;
      }
    }
  if (worst > policy.eig_tol) {
    std::ostringstream os;
    os << "eig_hermitian: not Hermitian at (" << wr << ", " << wc << "), |M - M^dagger| = " << worst;
    throw std::invalid_argument(os.str());
  }

  FloatMatrix a = 0.5 * (m + m.adjoint());
  FloatMatrix v = FloatMatrix::Identity(n, n);
  const double scale = std::max(a.norm(), 1e-300);
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (std::sqrt(off) <= 1e-17 * scale) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) <= 1e-300) continue;
        const Rotation g = jacobi_rotation(a(p, p).real(), a(q, q).real(), a(p, q));
        rotate_columns(a, p, q, g);
        rotate_rows_adjoint(a, p, q, g);
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        rotate_columns(v, p, q, g);
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return a(x, x).real() > a(y, y).real(); });
  EigenDecomposition out;
  out.vectors.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    out.values.push_back(a(order[j], order[j]).real());
    out.vectors.col(j) = v.col(order[j]);
  }
  Eigen::VectorXd lambda = Eigen::Map<const Eigen::VectorXd>(out.values.data(), n);
  const FloatMatrix rebuilt = out.vectors * lambda.cast<Complex>().asDiagonal() * out.vectors.adjoint();
  out.reconstruction_error = n == 0 ? 0.0 : max_abs(m - rebuilt);
  return out;
}

SingularValueDecomposition svd_jacobi(const FloatMatrix& m) {
  const Eigen::Index cols = m.cols();
  FloatMatrix a = m;
  FloatMatrix v = FloatMatrix::Identity(cols, cols);
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (Eigen::Index p = 0; p < cols; ++p) {
      for (Eigen::Index q = p + 1; q < cols; ++q) {
        const double alpha = a.col(p).squaredNorm();
        const double beta = a.col(q).squaredNorm();
        const Complex gamma = a.col(p).dot(a.col(q));
        if (std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta) || std::abs(gamma) < 1e-300) continue;
        rotated = true;
        const Rotation g = jacobi_rotation(alpha, beta, gamma);
        rotate_columns(a, p, q, g);
        rotate_columns(v, p, q, g);
      }
    }
    if (!rotated) break;
  }

  std::vector<double> norms(static_cast<std::size_t>(cols));
  for (Eigen::Index j = 0; j < cols; ++j) norms[j] = a.col(j).norm();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(cols));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) { return norms[x] > norms[y]; });

  SingularValueDecomposition out;
  out.u = FloatMatrix::Zero(m.rows(), cols);
  out.v.resize(cols, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    const double s = norms[order[j]];
    out.sigma.push_back(s);
    out.v.col(j) = v.col(order[j]);
    if (s > 0.0) out.u.col(j) = a.col(order[j]) / s;
  }
  return out;
}

std::vector<double> singular_values(const FloatMatrix& m) {
  // The Gram side with fewer columns converges faster.
  if (m.cols() > m.rows()) {
    auto s = svd_jacobi(m.adjoint()).sigma;
    s.resize(static_cast<std::size_t>(m.cols()), 0.0);
    return s;
  }
  return svd_jacobi(m).sigma;
}

std::size_t rank_from_singular_values(const std::vector<double>& sigma, double rel_tol) {
  if (sigma.empty()) return 0;
  const double top = *std::max_element(sigma.begin(), sigma.end());
  if (top <= 0.0) return 0;
  return static_cast<std::size_t>(
      std::count_if(sigma.begin(), sigma.end(), [&](double s) { return s > rel_tol * top; }));
}

std::size_t numerical_rank(const FloatMatrix& m, const TolerancePolicy& policy) {
  if (m.size() == 0) return 0;
  return rank_from_singular_values(singular_values(m), policy.rank_tol);
}

FloatMatrix null_space(const FloatMatrix& m, double rel_tol) {
  const auto svd = svd_jacobi(m);
  const std::size_t r = rank_from_singular_values(svd.sigma, rel_tol);
  return svd.v.rightCols(m.cols() - static_cast<Eigen::Index>(r));
}

FloatMatrix left_null_space(const FloatMatrix& m, double rel_tol) { return null_space(m.adjoint(), rel_tol); }

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return Complex(re, im) * M_SQRT1_2;
}

std::int64_t Rng::integer(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw std::invalid_argument("Rng::integer: empty range");
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(engine_() % span);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (counter + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

FloatVector random_complex_vector(std::size_t dim, Rng& rng) {
  FloatVector v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.complex_normal();
  return v;
}

FloatVector random_unit_vector(std::size_t dim, Rng& rng) {
  FloatVector v = random_complex_vector(dim, rng);
  while (v.norm() == 0.0) v = random_complex_vector(dim, rng);
  return v / v.norm();
}

FloatMatrix random_complex_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  FloatMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = rng.complex_normal();
  return m;
}

FloatMatrix random_unitary(std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw std::invalid_argument("random_unitary: dim must be >= 1");
  Rng rng(seed);
  FloatMatrix q = random_complex_matrix(dim, dim, rng);
  const auto n = static_cast<Eigen::Index>(dim);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index k = 0; k < j; ++k) {
        const Complex proj = q.col(k).dot(q.col(j));
        q.col(j) -= proj * q.col(k);
      }
    }
    q.col(j) /= q.col(j).norm();
  }
  return q;
}

FloatMatrix to_float(const ExactMatrix& m) {
  FloatMatrix out(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c).to_complex();
  return out;
}

FloatVector to_float(const ExactVector& v) {
  FloatVector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(i) = v[i].to_complex();
  return out;
}

double max_abs(const FloatMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

std::vector<Complex> polynomial_roots(const std::vector<Complex>& coeffs) {
  double top = 0.0;
  for (const auto& c : coeffs) top = std::max(top, std::abs(c));
  if (top == 0.0) return {};
  std::vector<Complex> c = coeffs;
  while (!c.empty() && std::abs(c.back()) <= 1e-13 * top) c.pop_back();
  std::vector<Complex> roots;
  std::size_t low = 0;
  while (low < c.size() && c[low] == 0.0) {
    roots.emplace_back(0.0);
    ++low;
  }
  std::vector<Complex> reduced(c.begin() + static_cast<std::ptrdiff_t>(low), c.end());
  const std::size_t deg = reduced.empty() ? 0 : reduced.size() - 1;
  if (deg == 0) return roots;

  FloatMatrix companion = FloatMatrix::Zero(static_cast<Eigen::Index>(deg), static_cast<Eigen::Index>(deg));
  for (std::size_t i = 1; i < deg; ++i) companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
  for (std::size_t i = 0; i < deg; ++i)
    companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(deg - 1)) = -reduced[i] / reduced[deg];
  Eigen::ComplexEigenSolver<FloatMatrix> solver(companion, false);
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    Complex x = solver.eigenvalues()(i);
    for (int it = 0; it < 4; ++it) {
      const Complex f = horner(reduced, x);
      const Complex df = horner_derivative(reduced, x);
      if (df == 0.0) break;
      const Complex next = x - f / df;
      if (!(std::abs(horner(reduced, next)) < std::abs(f))) break;
      x = next;
    }
    roots.push_back(x);
  }
  return roots;
}

FloatVector normalize_projective(const FloatVector& x) {
  Eigen::Index best = 0;
  double mag = -1.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (std::abs(x(i)) > mag * (1.0 + 1e-12)) {
      mag = std::abs(x(i));
      best = i;
    }
  }
  if (mag <= 0.0) throw std::invalid_argument("normalize_projective: zero vector");
  return x / x(best);
}

}  // namespace dloci
