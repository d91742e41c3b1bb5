#include <cmath>
#include <stdexcept>

#include "dloci/varieties.hpp"

namespace dloci {

namespace {

std::vector<FloatMatrix> split_rows(const FloatMatrix& a, std::size_t m, std::size_t n) {
  std::vector<FloatMatrix> blocks;
  for (std::size_t i = 0; i < m; ++i)
    blocks.push_back(a.middleRows(static_cast<Eigen::Index>(i * n), static_cast<Eigen::Index>(n)));
  return blocks;
}

std::vector<ExactMatrix> split_rows(const ExactMatrix& a, std::size_t m, std::size_t n) {
  std::vector<ExactMatrix> blocks;
  for (std::size_t i = 0; i < m; ++i) blocks.push_back(a.slice(i * n, n, 0, a.cols()));
  return blocks;
}

FloatMatrix permuted(const FloatMatrix& rho, const std::vector<std::size_t>& perm) {
  const auto n = static_cast<Eigen::Index>(perm.size());
  FloatMatrix out(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) out(r, c) = rho(perm[r], perm[c]);
  return out;
}

}  // namespace

FloatMatrix Pencil::evaluate(const FloatVector& x) const {
  if (static_cast<std::size_t>(x.size()) != m()) throw std::invalid_argument("Pencil::evaluate: point has wrong length");
  FloatMatrix f = FloatMatrix::Zero(static_cast<Eigen::Index>(n()), static_cast<Eigen::Index>(t()));
  for (std::size_t i = 0; i < m(); ++i)
    if (x(static_cast<Eigen::Index>(i)) != 0.0) f += x(static_cast<Eigen::Index>(i)) * blocks[i];
  return f;
}

ExactMatrix Pencil::evaluate(const ExactVector& x) const {
  if (!exact_blocks) throw std::invalid_argument("Pencil::evaluate: pencil has no exact blocks");
  if (x.size() != m()) throw std::invalid_argument("Pencil::evaluate: point has wrong length");
  ExactMatrix f(n(), t());
  for (std::size_t i = 0; i < m(); ++i)
    if (!x[i].is_zero()) f += (*exact_blocks)[i] * x[i];
  return f;
}

SymbolicPencil Pencil::symbolic() const {
  if (!exact_blocks) throw std::invalid_argument("Pencil::symbolic: pencil has no exact blocks");
  return symbolic_pencil(*exact_blocks);
}

Pencil Pencil::from_blocks(std::vector<FloatMatrix> blocks) {
  if (blocks.empty()) throw std::invalid_argument("Pencil: no blocks");
  for (const auto& b : blocks)
    if (b.rows() != blocks.front().rows() || b.cols() != blocks.front().cols())
      throw std::invalid_argument("Pencil: blocks differ in shape");
  Pencil p;
  p.blocks = std::move(blocks);
  return p;
}

Pencil Pencil::from_exact_blocks(std::vector<ExactMatrix> blocks) {
  std::vector<FloatMatrix> fl;
  for (const auto& b : blocks) fl.push_back(to_float(b));
  Pencil p = from_blocks(std::move(fl));
  p.exact_blocks = std::move(blocks);
  return p;
}

Pencil pencil_from_ensemble(const Ensemble& e, const Cut& cut) {
  e.validate();
  const auto [m, n] = cut_shape(e.dims, cut);
  FloatMatrix a = coefficient_matrix(e, cut);
  for (std::size_t l = 0; l < e.size(); ++l) a.col(static_cast<Eigen::Index>(l)) *= std::sqrt(e.weights[l].get_d());
  Pencil p = Pencil::from_blocks(split_rows(a, m, n));
  if (e.is_exact()) p.exact_blocks = split_rows(coefficient_matrix_exact(e, cut), m, n);
  return p;
}

Pencil pencil_from_density(const DensityMatrix& rho, const Cut& cut, const TolerancePolicy& policy) {
  const auto [m, n] = cut_shape(rho.dims, cut);
  const FloatMatrix ordered = permuted(rho.matrix, cut_permutation(rho.dims, cut));
  const auto eig = eig_hermitian(ordered, policy);
  std::vector<Eigen::Index> kept;
  for (std::size_t j = 0; j < eig.values.size(); ++j)
    if (eig.values[j] > policy.rank_tol) kept.push_back(static_cast<Eigen::Index>(j));
  if (kept.empty()) throw std::invalid_argument("pencil_from_density: density matrix has no eigenvalue above rank_tol");
  FloatMatrix a(ordered.rows(), static_cast<Eigen::Index>(kept.size()));
  for (std::size_t c = 0; c < kept.size(); ++c)
    a.col(static_cast<Eigen::Index>(c)) = std::sqrt(eig.values[kept[c]]) * eig.vectors.col(kept[c]);
  return Pencil::from_blocks(split_rows(a, m, n));
}

double rank_residual(const FloatMatrix& m, std::size_t k) {
  if (k >= static_cast<std::size_t>(std::min(m.rows(), m.cols()))) return 0.0;
  const auto sigma = singular_values(m);
  if (sigma.front() <= 0.0) return 0.0;
  return sigma[k] / sigma.front();
}

double Pencil::residual(const FloatVector& x, std::size_t k) const {
  const FloatMatrix f = evaluate(x);
  if (k > 0) return rank_residual(f, k);
  double scale = 0.0;
  for (std::size_t i = 0; i < blocks.size(); ++i) scale += std::abs(x(static_cast<Eigen::Index>(i))) * blocks[i].norm();
  if (scale <= 0.0) return 0.0;
  return singular_values(f).front() / scale;
}

bool membership(const Pencil& p, const FloatVector& x, std::size_t k, const TolerancePolicy& policy) {
  if (k >= p.n()) throw std::invalid_argument("membership: k must be below the block row count");
  return p.residual(x, k) <= policy.membership_tol;
}

bool membership(const Pencil& p, const ExactVector& x, std::size_t k) {
  if (k >= p.n()) throw std::invalid_argument("membership: k must be below the block row count");
  return rank_exact(p.evaluate(x)) <= k;
}

FloatMatrix hermitian_form(const DensityMatrix& rho, const FloatVector& x, const Cut& cut) {
  const auto [m, n] = cut_shape(rho.dims, cut);
  if (static_cast<std::size_t>(x.size()) != m) throw std::invalid_argument("hermitian_form: point has wrong length");
  const FloatMatrix ordered = permuted(rho.matrix, cut_permutation(rho.dims, cut));
  const auto nn = static_cast<Eigen::Index>(n);
  FloatMatrix h = FloatMatrix::Zero(nn, nn);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      h += x(static_cast<Eigen::Index>(i)) * std::conj(x(static_cast<Eigen::Index>(j))) *
           ordered.block(static_cast<Eigen::Index>(i) * nn, static_cast<Eigen::Index>(j) * nn, nn, nn);
  return h;
}

ExactMatrix hermitian_form(const DensityMatrix& rho, const ExactVector& x, const Cut& cut) {
  const auto [m, n] = cut_shape(rho.dims, cut);
  if (x.size() != m) throw std::invalid_argument("hermitian_form: point has wrong length");
  ExactMatrix h(n, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const GR w = x[i] * x[j].conj();
      if (!w.is_zero()) h += block_exact(rho, i, j, cut) * w;
    }
  return h;
}

std::size_t schmidt_number(const FloatVector& v, const std::vector<std::size_t>& dims, const Cut& cut,
                           const TolerancePolicy& policy) {
  if (v.norm() == 0.0) throw std::invalid_argument("schmidt_number: zero vector");
  const auto [m, n] = cut_shape(dims, cut);
  const auto perm = cut_permutation(dims, cut);
  // Column i is A_i, the n x 1 block of the first-party index i; V_A^0 is the
  // projectivized kernel of r -> sum r_i A_i.
  FloatMatrix map(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) map(j, i) = v(perm[i * n + j]);
  const auto kernel = static_cast<std::size_t>(null_space(map, policy.rank_tol).cols());
  const int dim_v0 = static_cast<int>(kernel) - 1;  // -1 for the empty locus
  return static_cast<std::size_t>(static_cast<int>(m) - 1 - dim_v0);
}

std::size_t schmidt_number(const ExactVector& v, const std::vector<std::size_t>& dims, const Cut& cut) {
  const auto [m, n] = cut_shape(dims, cut);
  const auto perm = cut_permutation(dims, cut);
  ExactMatrix map(n, m);
  bool nonzero = false;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      map(j, i) = v[perm[i * n + j]];
      nonzero = nonzero || !map(j, i).is_zero();
    }
  if (!nonzero) throw std::invalid_argument("schmidt_number: zero vector");
  const std::size_t kernel = m - rank_exact(map);
  const int dim_v0 = static_cast<int>(kernel) - 1;
  return static_cast<std::size_t>(static_cast<int>(m) - 1 - dim_v0);
}

std::vector<HomogPoly> segre_images(const std::vector<std::size_t>& factor_dims) {
  std::size_t nvars = 0;
  std::size_t ambient = 1;
  for (auto d : factor_dims) {
    nvars += d;
    ambient *= d;
  }
  std::vector<HomogPoly> images;
  for (std::size_t idx = 0; idx < ambient; ++idx) {
    Exponent e{};
    std::size_t rest = idx;
    std::size_t offset = nvars;
    for (std::size_t f = factor_dims.size(); f-- > 0;) {
      offset -= factor_dims[f];
      e[offset + rest % factor_dims[f]] = 1;
      rest /= factor_dims[f];
    }
    HomogPoly mono(nvars, static_cast<unsigned>(factor_dims.size()));
    mono.add_term(e, GR(1));
    images.push_back(std::move(mono));
  }
  return images;
}

SegrePullback segre_pullback(const Pencil& p, const std::vector<std::size_t>& factor_dims, std::size_t k) {
  std::size_t ambient = 1;
  for (auto d : factor_dims) ambient *= d;
  if (ambient != p.m()) throw std::invalid_argument("segre_pullback: product of factor dims != pencil parameter count");
  SegrePullback out;
  out.factor_dims = factor_dims;
  for (std::size_t f = 0; f < factor_dims.size(); ++f)
    for (std::size_t j = 0; j < factor_dims[f]; ++j) out.names.push_back("r" + std::to_string(f + 1) + "_" + std::to_string(j));
  const auto images = segre_images(factor_dims);
  for (const auto& minor : sym_minors(p.symbolic(), k)) out.minors.push_back(minor.substitute(images));
  return out;
}

std::size_t bilinear_rank(const HomogPoly& form, std::pair<std::size_t, std::size_t> dims) {
  const auto [m, n] = dims;
  if (form.nvars() != m + n) throw std::invalid_argument("bilinear_rank: variable count != m + n");
  ExactMatrix coeffs(m, n);
  if (form.is_zero()) return 0;
  if (form.degree() != 2) throw std::invalid_argument("bilinear_rank: form is not of bidegree (1,1)");
  for (const auto& [e, c] : form.terms()) {
    std::size_t i = m, j = n;
    for (std::size_t v = 0; v < m + n; ++v) {
      if (e[v] == 0) continue;
      if (e[v] != 1) throw std::invalid_argument("bilinear_rank: form is not of bidegree (1,1)");
      if (v < m) {
        if (i != m) throw std::invalid_argument("bilinear_rank: form is not of bidegree (1,1)");
        i = v;
      } else {
        if (j != n) throw std::invalid_argument("bilinear_rank: form is not of bidegree (1,1)");
        j = v - m;
      }
    }
    if (i == m || j == n) throw std::invalid_argument("bilinear_rank: form is not of bidegree (1,1)");
    coeffs(i, j) = c;
  }
  return rank_exact(coeffs);
}

std::vector<std::pair<std::size_t, std::size_t>> block_symmetry_defects(const std::vector<ExactMatrix>& blocks,
                                                                        const std::vector<Rational>& weights) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (blocks.empty()) return out;
  std::vector<ExactMatrix> weighted = blocks;
  if (!weights.empty()) {
    if (weights.size() != blocks.front().cols()) throw std::invalid_argument("block_symmetry_defects: one weight per column");
    for (auto& b : weighted)
      for (std::size_t r = 0; r < b.rows(); ++r)
        for (std::size_t c = 0; c < b.cols(); ++c) b(r, c) *= GR(weights[c]);
  }
  for (std::size_t i = 0; i < blocks.size(); ++i)
    for (std::size_t j = i + 1; j < blocks.size(); ++j)
      if (!(weighted[i] * dagger(blocks[j]) == weighted[j] * dagger(blocks[i]))) out.emplace_back(i, j);
  return out;
}

}  // namespace dloci
