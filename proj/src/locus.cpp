#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/QR>

#include "dloci/varieties.hpp"

namespace dloci {

namespace {

constexpr int kNewtonIterations = 60;
constexpr double kJacobianRankTol = 1e-7;
// sigma_k / sigma_1 below this means the point sits on a lower rank stratum.
constexpr double kStratumGuard = 1e-5;
constexpr double kPerturbation = 1e-6;

FloatVector unit(const FloatVector& v) { return v / v.norm(); }

ProductPoint random_product_point(const std::vector<std::size_t>& dims, Rng& rng) {
  ProductPoint x;
  for (auto d : dims) x.push_back(random_unit_vector(d, rng));
  return x;
}

std::vector<double> svals(const FloatMatrix& f) { return singular_values(f); }

double projective_distance(const ProductPoint& a, const ProductPoint& b) {
  double worst = 0.0;
  for (std::size_t f = 0; f < a.size(); ++f) {
    const double overlap = std::abs(unit(a[f]).dot(unit(b[f])));
    worst = std::max(worst, std::sqrt(std::max(0.0, 1.0 - overlap * overlap)));
  }
  return worst;
}

// Orthonormal basis for the span of the columns (rank tolerance relative).
// Columns of m have norm at most 1, so tol is absolute: a column that was
// projected to rounding noise must not survive as a direction.
FloatMatrix orthonormal_columns(const FloatMatrix& m, double tol) {
  if (m.cols() == 0) return m;
  const auto svd = svd_jacobi(m.adjoint());
  // Right singular vectors of m^dagger are left singular vectors of m.
  std::size_t r = 0;
  while (r < svd.sigma.size() && svd.sigma[r] > tol) ++r;
  return svd.v.leftCols(static_cast<Eigen::Index>(r));
}

std::size_t chart_index(const FloatVector& x) {
  Eigen::Index best = 0;
  x.cwiseAbs().maxCoeff(&best);
  return static_cast<std::size_t>(best);
}

}  // namespace

Locus::Locus(Pencil pencil, std::size_t k, std::vector<std::size_t> factor_dims)
    : pencil_(std::move(pencil)), k_(k), factor_dims_(std::move(factor_dims)) {
  if (factor_dims_.empty()) factor_dims_.push_back(pencil_.m());
  std::size_t prod = 1;
  for (auto d : factor_dims_) {
    if (d == 0) throw std::invalid_argument("Locus: factor dimension 0");
    prod *= d;
  }
  if (prod != pencil_.m()) throw std::invalid_argument("Locus: product of factor dims != pencil parameter count");
  if (k_ >= pencil_.n()) throw std::invalid_argument("Locus: k must be below the block row count");
}

std::size_t Locus::ambient_dimension() const {
  std::size_t d = 0;
  for (auto f : factor_dims_) d += f - 1;
  return d;
}

FloatVector Locus::embed(const ProductPoint& x) const {
  if (x.size() != factor_dims_.size()) throw std::invalid_argument("Locus::embed: wrong number of factors");
  FloatVector r = FloatVector::Ones(1);
  for (std::size_t f = 0; f < x.size(); ++f) {
    if (static_cast<std::size_t>(x[f].size()) != factor_dims_[f]) throw std::invalid_argument("Locus::embed: factor length mismatch");
    FloatVector next(r.size() * x[f].size());
    for (Eigen::Index i = 0; i < r.size(); ++i) next.segment(i * x[f].size(), x[f].size()) = r(i) * x[f];
    r = std::move(next);
  }
  return r;
}

bool Locus::contains(const ProductPoint& x, const TolerancePolicy& policy) const {
  return residual(x) <= policy.membership_tol;
}

std::size_t Locus::pencil_rank(const ProductPoint& x, const TolerancePolicy& policy) const {
  return numerical_rank(evaluate(x), policy);
}

std::optional<ProductPoint> Locus::project(const ProductPoint& start, Rng& rng) const {
  const std::size_t n = pencil_.n();
  const std::size_t t = pencil_.t();
  const std::size_t L = factor_dims_.size();
  const std::size_t rows = n - k_;
  ProductPoint x;
  for (const auto& s : start) x.push_back(unit(s));
  const ProductPoint chart = x;

  const FloatMatrix q = random_unitary(n, rng.next_u64());
  const FloatMatrix q1 = q.topRows(static_cast<Eigen::Index>(rows));
  const FloatMatrix q2 = q.bottomRows(static_cast<Eigen::Index>(k_));

  FloatMatrix y = FloatMatrix::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(k_));
  if (k_ > 0) {
    const FloatMatrix f0 = evaluate(x);
    const FloatMatrix g = q2 * f0;
    const FloatMatrix rhs = -(q1 * f0);
    y = g.transpose().completeOrthogonalDecomposition().solve(rhs.transpose()).transpose();
  }

  std::size_t coords = 0;
  for (auto d : factor_dims_) coords += d;
  const std::size_t unknowns = coords + rows * k_;
  const std::size_t equations = rows * t + L;

  for (int it = 0; it <= kNewtonIterations; ++it) {
    const FloatMatrix f = evaluate(x);
    const FloatMatrix w = q1 + y * q2;
    const FloatMatrix e = w * f;
    FloatVector res(static_cast<Eigen::Index>(equations));
    for (std::size_t a = 0; a < rows; ++a)
      for (std::size_t b = 0; b < t; ++b) res(static_cast<Eigen::Index>(a * t + b)) = e(a, b);
    for (std::size_t fct = 0; fct < L; ++fct) res(static_cast<Eigen::Index>(rows * t + fct)) = chart[fct].dot(x[fct]) - 1.0;
    const double fnorm = f.norm();
    if (!std::isfinite(res.norm())) return std::nullopt;
    if (res.norm() <= 1e-14 * (1.0 + fnorm)) {
      for (auto& v : x) v = unit(v);
      return x;
    }
    if (it == kNewtonIterations) break;

    FloatMatrix jac = FloatMatrix::Zero(static_cast<Eigen::Index>(equations), static_cast<Eigen::Index>(unknowns));
    std::size_t col = 0;
    for (std::size_t fct = 0; fct < L; ++fct) {
      for (std::size_t j = 0; j < factor_dims_[fct]; ++j, ++col) {
        ProductPoint dir = x;
        dir[fct] = FloatVector::Unit(static_cast<Eigen::Index>(factor_dims_[fct]), static_cast<Eigen::Index>(j));
        const FloatMatrix de = w * evaluate(dir);
        for (std::size_t a = 0; a < rows; ++a)
          for (std::size_t b = 0; b < t; ++b) jac(static_cast<Eigen::Index>(a * t + b), static_cast<Eigen::Index>(col)) = de(a, b);
        jac(static_cast<Eigen::Index>(rows * t + fct), static_cast<Eigen::Index>(col)) = std::conj(chart[fct](j));
      }
    }
    const FloatMatrix q2f = q2 * f;
    for (std::size_t a = 0; a < rows; ++a)
      for (std::size_t c = 0; c < k_; ++c, ++col)
        for (std::size_t b = 0; b < t; ++b) jac(static_cast<Eigen::Index>(a * t + b), static_cast<Eigen::Index>(col)) = q2f(c, b);

    const FloatVector delta = jac.completeOrthogonalDecomposition().solve(-res);
    col = 0;
    for (std::size_t fct = 0; fct < L; ++fct) {
      x[fct] += delta.segment(static_cast<Eigen::Index>(col), static_cast<Eigen::Index>(factor_dims_[fct]));
      col += factor_dims_[fct];
    }
    for (std::size_t a = 0; a < rows; ++a)
      for (std::size_t c = 0; c < k_; ++c, ++col) y(a, c) += delta(static_cast<Eigen::Index>(col));
  }
  return std::nullopt;
}

void Locus::slice_line(Rng& rng, const TolerancePolicy& policy, std::vector<ProductPoint>& out) const {
  const std::size_t n = pencil_.n();
  const std::size_t t = pencil_.t();
  const std::size_t size = k_ + 1;
  if (size > std::min(n, t)) return;
  ProductPoint base = random_product_point(factor_dims_, rng);
  const std::size_t fct = rng.index(factor_dims_.size());
  const FloatVector a = random_unit_vector(factor_dims_[fct], rng);
  const FloatVector b = random_unit_vector(factor_dims_[fct], rng);
  ProductPoint pa = base, pb = base;
  pa[fct] = a;
  pb[fct] = b;
  const FloatMatrix f0 = evaluate(pa);
  const FloatMatrix f1 = evaluate(pb);
  const FloatMatrix left = random_complex_matrix(size, n, rng);
  const FloatMatrix right = random_complex_matrix(t, size, rng);

  const std::size_t samples = size + 1;
  std::vector<Complex> values(samples);
  double scale = 0.0;
  for (std::size_t j = 0; j < samples; ++j) {
    const Complex s = std::polar(1.0, 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(samples));
    const FloatMatrix g = left * (f0 + s * f1) * right;
    values[j] = g.determinant();
    scale = std::max(scale, std::pow(g.norm(), static_cast<double>(size)));
  }
  std::vector<Complex> coeffs(samples);
  double cmax = 0.0;
  for (std::size_t kk = 0; kk < samples; ++kk) {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < samples; ++j)
      acc += values[j] * std::polar(1.0, -2.0 * M_PI * static_cast<double>(j * kk) / static_cast<double>(samples));
    coeffs[kk] = acc / static_cast<double>(samples);
    cmax = std::max(cmax, std::abs(coeffs[kk]));
  }

  auto accept = [&](ProductPoint p) {
    for (auto& v : p) v = unit(v);
    if (contains(p, policy)) {
      out.push_back(std::move(p));
      return;
    }
    // Clustered roots lose accuracy; a Newton polish recovers them.
    auto polished = project(p, rng);
    if (polished && contains(*polished, policy) && projective_distance(*polished, p) < 1e-3) out.push_back(std::move(*polished));
  };

  if (cmax <= 1e-11 * std::max(scale, 1e-300)) {
    // The minor vanishes along the whole line; keep points if the line is inside.
    for (int probe = 0; probe < 3; ++probe) {
      const Complex s = rng.complex_normal();
      ProductPoint p = base;
      p[fct] = a + s * b;
      if (!contains(p, policy)) return;
    }
    for (int probe = 0; probe < 3; ++probe) {
      ProductPoint p = base;
      p[fct] = a + rng.complex_normal() * b;
      accept(std::move(p));
    }
    return;
  }
  const auto roots = polynomial_roots(coeffs);
  for (const Complex& s : roots) {
    ProductPoint p = base;
    p[fct] = a + s * b;
    accept(std::move(p));
  }
  if (roots.size() < size) accept(pb);
}

FloatMatrix Locus::tangent_jacobian(const ProductPoint& x) const {
  const FloatMatrix f = evaluate(x);
  const std::size_t n = pencil_.n();
  const std::size_t t = pencil_.t();
  const auto right = svd_jacobi(f);
  const auto left = svd_jacobi(f.adjoint());
  const FloatMatrix kappa = right.v.rightCols(static_cast<Eigen::Index>(t - k_));
  const FloatMatrix c = left.v.rightCols(static_cast<Eigen::Index>(n - k_));
  const std::size_t m = pencil_.m();
  const std::size_t eqs = (n - k_) * (t - k_);
  FloatMatrix amb(static_cast<Eigen::Index>(eqs), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    const FloatMatrix g = c.adjoint() * pencil_.blocks[i] * kappa;
    for (Eigen::Index a = 0; a < g.rows(); ++a)
      for (Eigen::Index b = 0; b < g.cols(); ++b) amb(a * g.cols() + b, static_cast<Eigen::Index>(i)) = g(a, b);
  }
  std::size_t coords = 0;
  for (auto d : factor_dims_) coords += d;
  FloatMatrix dphi(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(coords));
  std::size_t col = 0;
  for (std::size_t fct = 0; fct < factor_dims_.size(); ++fct) {
    for (std::size_t j = 0; j < factor_dims_[fct]; ++j, ++col) {
      ProductPoint dir = x;
      dir[fct] = FloatVector::Unit(static_cast<Eigen::Index>(factor_dims_[fct]), static_cast<Eigen::Index>(j));
      dphi.col(static_cast<Eigen::Index>(col)) = embed(dir);
    }
  }
  return amb * dphi;
}

std::vector<ProductPoint> sample_points(const Locus& locus, std::size_t count, std::uint64_t seed,
                                        const TolerancePolicy& policy, const SampleOptions& opts) {
  std::vector<ProductPoint> out;
  for (std::size_t line = 0; line < opts.max_lines && out.size() < count; ++line) {
    Rng rng(derive_seed(seed, line));
    locus.slice_line(rng, policy, out);
  }
  if (opts.use_newton) {
    const std::size_t attempts = opts.newton_attempts * count;
    for (std::size_t a = 0; a < attempts && out.size() < count; ++a) {
      Rng rng(derive_seed(seed, opts.max_lines + a));
      auto p = locus.project(random_product_point(locus.factor_dims(), rng), rng);
      if (p && locus.contains(*p, policy)) out.push_back(std::move(*p));
    }
  }
  if (out.size() > count) out.resize(count);
  return out;
}

std::vector<FloatVector> sample_points(const Pencil& p, std::size_t k, std::size_t count, std::uint64_t seed,
                                       const TolerancePolicy& policy, const SampleOptions& opts) {
  const Locus locus(p, k);
  std::vector<FloatVector> out;
  for (auto& x : sample_points(locus, count, seed, policy, opts)) out.push_back(normalize_projective(x.front()));
  return out;
}

int local_dimension(const Locus& locus, const ProductPoint& x, const TolerancePolicy& policy) {
  if (!locus.contains(x, policy)) throw std::invalid_argument("local_dimension: point is not on the locus");
  const auto ambient = static_cast<int>(locus.ambient_dimension());
  if (locus.pencil_rank(x, policy) < locus.k()) return ambient;  // every active minor has vanishing gradient
  const FloatMatrix jac = locus.tangent_jacobian(x);
  const auto r = static_cast<int>(rank_from_singular_values(singular_values(jac), kJacobianRankTol));
  return ambient - r;
}

int local_dimension(const Pencil& p, std::size_t k, const FloatVector& x, const TolerancePolicy& policy) {
  return local_dimension(Locus(p, k), ProductPoint{x}, policy);
}

std::string to_string(ProbeVerdict v) {
  switch (v) {
    case ProbeVerdict::Linear:
      return "linear";
    case ProbeVerdict::Nonlinear:
      return "nonlinear";
    case ProbeVerdict::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

ProbeReport linearity_probe(const Locus& locus, std::size_t samples, std::uint64_t seed, const TolerancePolicy& policy,
                            const ProbeOptions& opts) {
  ProbeReport report;
  report.seed = seed;
  const auto& dims = locus.factor_dims();
  for (auto d : dims) report.chart_coverage.emplace_back(d, 0);
  const std::size_t n = locus.pencil().n();
  const std::size_t t = locus.pencil().t();
  const std::size_t k = locus.k();
  const double fail_threshold = 100.0 * policy.membership_tol;

  {
    Rng rng(derive_seed(seed, 0xFFFFFFFFULL));
    bool everywhere = k + 1 > std::min(n, t);
    if (!everywhere) {
      everywhere = true;
      for (int trial = 0; trial < 3 && everywhere; ++trial)
        everywhere = locus.contains(random_product_point(dims, rng), policy);
    }
    if (everywhere) {
      report.verdict = ProbeVerdict::Linear;
      report.notes.push_back("rank <= k at generic points: all minors vanish identically and the locus is the whole space");
      return report;
    }
  }

  const std::size_t L = dims.size();
  std::size_t coords = 0;
  for (auto d : dims) coords += d;
  const std::size_t max_attempts = std::max<std::size_t>(8 * samples, 40);

  for (std::size_t attempt = 0; attempt < max_attempts && report.smooth_points < samples; ++attempt) {
    Rng rng(derive_seed(seed, attempt));
    std::optional<ProductPoint> x;
    if (attempt % 2 == 0) {
      std::vector<ProductPoint> found;
      locus.slice_line(rng, policy, found);
      if (!found.empty()) x = found[rng.index(found.size())];
    } else {
      x = locus.project(random_product_point(dims, rng), rng);
      if (x && !locus.contains(*x, policy)) x.reset();
    }
    if (!x) continue;
    ++report.samples_used;

    // Smoothness screen.
    const auto sigma = svals(locus.evaluate(*x));
    if (k > 0 && (sigma.front() <= 0.0 || sigma[k - 1] / sigma.front() < kStratumGuard)) continue;
    const FloatMatrix jac = locus.tangent_jacobian(*x);
    const std::size_t jrank = rank_from_singular_values(singular_values(jac), kJacobianRankTol);
    ProductPoint shifted = *x;
    for (auto& v : shifted) v = unit(v + kPerturbation * random_complex_vector(static_cast<std::size_t>(v.size()), rng));
    auto nearby = locus.project(shifted, rng);
    if (!nearby || !locus.contains(*nearby, policy)) continue;
    const auto nsigma = svals(locus.evaluate(*nearby));
    if (k > 0 && nsigma[k - 1] / nsigma.front() < kStratumGuard) continue;
    if (rank_from_singular_values(singular_values(locus.tangent_jacobian(*nearby)), kJacobianRankTol) != jrank) continue;

    ++report.smooth_points;
    for (std::size_t f = 0; f < L; ++f) ++report.chart_coverage[f][chart_index((*x)[f])];

    // Tangent space with the per-factor scaling directions removed.
    FloatMatrix kernel = null_space(jac, kJacobianRankTol);
    std::size_t offset = 0;
    for (std::size_t f = 0; f < L; ++f) {
      const auto d = static_cast<Eigen::Index>(dims[f]);
      for (Eigen::Index c = 0; c < kernel.cols(); ++c) {
        auto seg = kernel.col(c).segment(static_cast<Eigen::Index>(offset), d);
        const Complex along = (*x)[f].dot(seg);
        seg -= along * (*x)[f];
      }
      offset += dims[f];
    }
    const FloatMatrix basis = orthonormal_columns(kernel, 1e-8);

    std::vector<FloatVector> directions;
    for (std::size_t d = 0; d < opts.directions_per_point && basis.cols() > 0; ++d) {
      const FloatVector mix = random_complex_vector(static_cast<std::size_t>(basis.cols()), rng);
      directions.push_back(unit(basis * mix));
    }
    if (L > 1) {
      offset = 0;
      for (std::size_t f = 0; f < L; ++f) {
        const auto d = static_cast<Eigen::Index>(dims[f]);
        const FloatMatrix sub = jac.middleCols(static_cast<Eigen::Index>(offset), d);
        FloatMatrix fk = null_space(sub, kJacobianRankTol);
        for (Eigen::Index c = 0; c < fk.cols(); ++c) fk.col(c) -= (*x)[f].dot(fk.col(c)) * (*x)[f];
        const FloatMatrix fb = orthonormal_columns(fk, 1e-8);
        if (fb.cols() > 0) {
          FloatVector dir = FloatVector::Zero(static_cast<Eigen::Index>(coords));
          dir.segment(static_cast<Eigen::Index>(offset), d) = fb * random_complex_vector(static_cast<std::size_t>(fb.cols()), rng);
          directions.push_back(unit(dir));
        }
        offset += dims[f];
      }
    }

    auto step_point = [&](const FloatVector& dir, double s) {
      ProductPoint y = *x;
      std::size_t off = 0;
      for (std::size_t f = 0; f < L; ++f) {
        const auto d = static_cast<Eigen::Index>(dims[f]);
        y[f] = unit((*x)[f] + s * dir.segment(static_cast<Eigen::Index>(off), d));
        off += dims[f];
      }
      return y;
    };

    for (const auto& dir : directions) {
      for (double s : opts.steps) {
        ++report.tangent_tests;
        const ProductPoint y = step_point(dir, s);
        const double r = locus.residual(y);
        if (r <= fail_threshold) {
          report.max_passing_residual = std::max(report.max_passing_residual, r);
          continue;
        }
        const double half = locus.residual(step_point(dir, 0.5 * s));
        if (half <= fail_threshold) continue;
        if (!report.witness) {
          ProbeWitness w;
          w.point = *x;
          std::size_t off = 0;
          for (std::size_t f = 0; f < L; ++f) {
            w.direction.push_back(dir.segment(static_cast<Eigen::Index>(off), static_cast<Eigen::Index>(dims[f])));
            off += dims[f];
          }
          w.step = s;
          w.residual = r;
          w.residual_half_step = half;
          w.sample_index = attempt;
          report.witness = std::move(w);
        }
        break;
      }
      if (report.witness && opts.stop_at_witness) break;
    }
    if (report.witness && opts.stop_at_witness) break;
  }

  if (report.witness) {
    report.verdict = ProbeVerdict::Nonlinear;
  } else if (report.smooth_points >= opts.min_linear_samples) {
    report.verdict = ProbeVerdict::Linear;
  } else if (report.samples_used == 0) {
    report.verdict = ProbeVerdict::Linear;
    report.notes.push_back("no point of the locus found by slicing or projection: treated as empty (dimension -1), hence linear");
  } else {
    report.verdict = ProbeVerdict::Inconclusive;
    report.notes.push_back("only " + std::to_string(report.smooth_points) + " smooth points passed the screen");
  }
  return report;
}

ProbeReport linearity_probe(const Pencil& p, std::size_t k, std::size_t samples, std::uint64_t seed,
                            const TolerancePolicy& policy, const ProbeOptions& opts) {
  return linearity_probe(Locus(p, k), samples, seed, policy, opts);
}

}  // namespace dloci
