#include "dloci/states.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace dloci {

namespace {

std::vector<std::size_t> digits_of(std::size_t index, const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> d(dims.size());
  for (std::size_t s = dims.size(); s-- > 0;) {
    d[s] = index % dims[s];
    index /= dims[s];
  }
  return d;
}

std::size_t index_of(const std::vector<std::size_t>& digits, const std::vector<std::size_t>& dims) {
  std::size_t idx = 0;
  for (std::size_t s = 0; s < dims.size(); ++s) idx = idx * dims[s] + digits[s];
  return idx;
}

void check_cut(const Cut& cut, std::size_t subsystems) {
  std::vector<int> seen(subsystems, 0);
  if (cut.first.empty() || cut.second.empty()) throw std::invalid_argument("cut: both sides must be nonempty");
  for (auto s : cut.first) {
    if (s >= subsystems) throw std::invalid_argument("cut: subsystem index out of range");
    ++seen[s];
  }
  for (auto s : cut.second) {
    if (s >= subsystems) throw std::invalid_argument("cut: subsystem index out of range");
    ++seen[s];
  }
  for (int c : seen)
    if (c != 1) throw std::invalid_argument("cut: every subsystem must appear exactly once");
}

template <class Get, class Set>
void pt_apply(std::size_t n, const std::vector<std::size_t>& dims, const Cut& cut, Get get, Set set) {
  check_cut(cut, dims.size());
  for (std::size_t r = 0; r < n; ++r) {
    const auto dr = digits_of(r, dims);
    for (std::size_t c = 0; c < n; ++c) {
      auto a = dr;
      auto b = digits_of(c, dims);
      for (auto s : cut.second) std::swap(a[s], b[s]);
      set(index_of(a, dims), index_of(b, dims), get(r, c));
    }
  }
}

// Calls visit(reduced_row, reduced_col, full_row, full_col) for every pair of
// full indices that agree on the traced-out subsystems.
void trace_pairs(const std::vector<std::size_t>& dims, const std::vector<std::size_t>& keep,
                 const std::function<void(std::size_t, std::size_t, std::size_t, std::size_t)>& visit) {
  const std::size_t n = total_dimension(dims);
  std::vector<bool> kept(dims.size(), false);
  for (auto s : keep) kept[s] = true;
  std::vector<std::size_t> kdims;
  for (auto s : keep) kdims.push_back(dims[s]);
  for (std::size_t r = 0; r < n; ++r) {
    const auto dr = digits_of(r, dims);
    for (std::size_t c = 0; c < n; ++c) {
      const auto dc = digits_of(c, dims);
      bool match = true;
      for (std::size_t s = 0; s < dims.size() && match; ++s) match = kept[s] || dr[s] == dc[s];
      if (!match) continue;
      std::vector<std::size_t> kr, kc;
      for (auto s : keep) {
        kr.push_back(dr[s]);
        kc.push_back(dc[s]);
      }
      visit(index_of(kr, kdims), index_of(kc, kdims), r, c);
    }
  }
}

}  // namespace

std::string Cut::to_string() const {
  std::string out;
  for (auto s : first) out.push_back(static_cast<char>('A' + s));
  out.push_back(':');
  for (auto s : second) out.push_back(static_cast<char>('A' + s));
  return out;
}

Cut parse_cut(std::string_view text, std::size_t subsystems) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw std::invalid_argument("cut must look like AB:CD, got '" + std::string(text) + "'");
  Cut cut;
  auto side = [&](std::string_view part, std::vector<std::size_t>& out) {
    for (char ch : part) {
      const char up = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
      if (up < 'A' || up > 'Z') throw std::invalid_argument("cut: bad subsystem letter '" + std::string(1, ch) + "'");
      out.push_back(static_cast<std::size_t>(up - 'A'));
    }
  };
  side(text.substr(0, colon), cut.first);
  side(text.substr(colon + 1), cut.second);
  check_cut(cut, subsystems);
  return cut;
}

Cut default_cut(std::size_t subsystems) {
  if (subsystems < 2) throw std::invalid_argument("default_cut: need at least two subsystems");
  Cut cut{{0}, {}};
  for (std::size_t s = 1; s < subsystems; ++s) cut.second.push_back(s);
  return cut;
}

std::size_t total_dimension(const std::vector<std::size_t>& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

std::vector<std::size_t> cut_permutation(const std::vector<std::size_t>& dims, const Cut& cut) {
  check_cut(cut, dims.size());
  std::vector<std::size_t> order = cut.first;
  order.insert(order.end(), cut.second.begin(), cut.second.end());
  std::vector<std::size_t> new_dims;
  for (auto s : order) new_dims.push_back(dims[s]);
  const std::size_t n = total_dimension(dims);
  std::vector<std::size_t> perm(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto nd = digits_of(k, new_dims);
    std::vector<std::size_t> od(dims.size());
    for (std::size_t p = 0; p < order.size(); ++p) od[order[p]] = nd[p];
    perm[k] = index_of(od, dims);
  }
  return perm;
}

std::pair<std::size_t, std::size_t> cut_shape(const std::vector<std::size_t>& dims, const Cut& cut) {
  check_cut(cut, dims.size());
  std::size_t m = 1, n = 1;
  for (auto s : cut.first) m *= dims[s];
  for (auto s : cut.second) n *= dims[s];
  return {m, n};
}

void Ensemble::validate() const {
  if (dims.empty()) throw std::invalid_argument("ensemble: dims must be nonempty");
  for (auto d : dims)
    if (d == 0) throw std::invalid_argument("ensemble: subsystem dimension 0");
  if (weights.size() != vectors.size()) throw std::invalid_argument("ensemble: one weight per vector required");
  if (vectors.empty()) throw std::invalid_argument("ensemble: no vectors");
  const std::size_t n = total_dimension(dims);
  for (const auto& w : weights)
    if (sgn(w) <= 0) throw std::invalid_argument("ensemble: weights must be strictly positive");
  for (const auto& v : vectors)
    if (static_cast<std::size_t>(v.size()) != n) throw std::invalid_argument("ensemble: vector length != product of dims");
  for (const auto& v : exact_vectors)
    if (v.size() != n) throw std::invalid_argument("ensemble: vector length != product of dims");
}

Ensemble Ensemble::exact(std::vector<std::size_t> dims, std::vector<Rational> weights, std::vector<ExactVector> vectors) {
  Ensemble e;
  e.dims = std::move(dims);
  e.weights = std::move(weights);
  for (const auto& v : vectors) e.vectors.push_back(to_float(v));
  e.exact_vectors = std::move(vectors);
  e.validate();
  return e;
}

Ensemble Ensemble::floating(std::vector<std::size_t> dims, std::vector<Rational> weights,
                            std::vector<FloatVector> vectors) {
  Ensemble e;
  e.dims = std::move(dims);
  e.weights = std::move(weights);
  e.vectors = std::move(vectors);
  e.validate();
  return e;
}

ExactMatrix coefficient_matrix_exact(const Ensemble& e, const Cut& cut) {
  if (!e.is_exact()) throw std::invalid_argument("coefficient_matrix_exact: ensemble has float vectors");
  const auto perm = cut_permutation(e.dims, cut);
  ExactMatrix a(perm.size(), e.size());
  for (std::size_t l = 0; l < e.size(); ++l)
    for (std::size_t k = 0; k < perm.size(); ++k) a(k, l) = e.exact_vectors[l][perm[k]];
  return a;
}

FloatMatrix coefficient_matrix(const Ensemble& e, const Cut& cut) {
  const auto perm = cut_permutation(e.dims, cut);
  FloatMatrix a(static_cast<Eigen::Index>(perm.size()), static_cast<Eigen::Index>(e.size()));
  for (std::size_t l = 0; l < e.size(); ++l)
    for (std::size_t k = 0; k < perm.size(); ++k) a(k, l) = e.vectors[l](perm[k]);
  return a;
}

DensityMatrix DensityMatrix::from_exact(std::vector<std::size_t> dims, ExactMatrix m) {
  DensityMatrix rho;
  rho.dims = std::move(dims);
  rho.matrix = to_float(m);
  rho.exact = std::move(m);
  return rho;
}

DensityMatrix DensityMatrix::from_float(std::vector<std::size_t> dims, FloatMatrix m) {
  DensityMatrix rho;
  rho.dims = std::move(dims);
  rho.matrix = std::move(m);
  return rho;
}

DensityMatrix from_ensemble(const Ensemble& e) {
  e.validate();
  const std::size_t n = total_dimension(e.dims);
  if (e.is_exact()) {
    ExactMatrix rho(n, n);
    Rational trace = 0;
    for (std::size_t l = 0; l < e.size(); ++l) {
      const auto& v = e.exact_vectors[l];
      const GR w(e.weights[l]);
      for (std::size_t r = 0; r < n; ++r) {
        if (v[r].is_zero()) continue;
        const GR wr = w * v[r];
        for (std::size_t c = 0; c < n; ++c)
          if (!v[c].is_zero()) rho(r, c) += wr * v[c].conj();
        trace += e.weights[l] * v[r].norm2();
      }
    }
    if (sgn(trace) == 0) throw std::invalid_argument("from_ensemble: every vector is zero");
    rho *= GR(Rational(1) / trace);
    return DensityMatrix::from_exact(e.dims, std::move(rho));
  }
  FloatMatrix rho = FloatMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t l = 0; l < e.size(); ++l) rho += e.weights[l].get_d() * e.vectors[l] * e.vectors[l].adjoint();
  const double trace = rho.trace().real();
  if (!(trace > 0.0)) throw std::invalid_argument("from_ensemble: every vector is zero");
  return DensityMatrix::from_float(e.dims, rho / trace);
}

FloatMatrix block(const DensityMatrix& rho, std::size_t i, std::size_t j, const Cut& cut) {
  const auto [m, n] = cut_shape(rho.dims, cut);
  if (i >= m || j >= m) throw std::out_of_range("block: index outside the first party's dimension");
  const auto perm = cut_permutation(rho.dims, cut);
  FloatMatrix out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) out(a, b) = rho.matrix(perm[i * n + a], perm[j * n + b]);
  return out;
}

ExactMatrix block_exact(const DensityMatrix& rho, std::size_t i, std::size_t j, const Cut& cut) {
  if (!rho.is_exact()) throw std::invalid_argument("block_exact: density matrix is not exact");
  const auto [m, n] = cut_shape(rho.dims, cut);
  if (i >= m || j >= m) throw std::out_of_range("block: index outside the first party's dimension");
  const auto perm = cut_permutation(rho.dims, cut);
  ExactMatrix out(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) out(a, b) = (*rho.exact)(perm[i * n + a], perm[j * n + b]);
  return out;
}

FloatMatrix partial_transpose(const FloatMatrix& m, const std::vector<std::size_t>& dims, const Cut& cut) {
  FloatMatrix out(m.rows(), m.cols());
  pt_apply(static_cast<std::size_t>(m.rows()), dims, cut, [&](std::size_t r, std::size_t c) { return m(r, c); },
           [&](std::size_t r, std::size_t c, Complex v) { out(r, c) = v; });
  return out;
}

ExactMatrix partial_transpose(const ExactMatrix& m, const std::vector<std::size_t>& dims, const Cut& cut) {
  ExactMatrix out(m.rows(), m.cols());
  pt_apply(m.rows(), dims, cut, [&](std::size_t r, std::size_t c) -> const GR& { return m(r, c); },
           [&](std::size_t r, std::size_t c, const GR& v) { out(r, c) = v; });
  return out;
}

DensityMatrix partial_transpose(const DensityMatrix& rho, const Cut& cut) {
  if (rho.is_exact()) return DensityMatrix::from_exact(rho.dims, partial_transpose(*rho.exact, rho.dims, cut));
  return DensityMatrix::from_float(rho.dims, partial_transpose(rho.matrix, rho.dims, cut));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<std::size_t> keep) {
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  if (keep.empty() || keep.size() >= rho.dims.size())
    throw std::invalid_argument("partial_trace: keep must be a nonempty proper subset of subsystems");
  for (auto s : keep)
    if (s >= rho.dims.size()) throw std::invalid_argument("partial_trace: subsystem index out of range");
  std::vector<std::size_t> kdims;
  for (auto s : keep) kdims.push_back(rho.dims[s]);
  const std::size_t k = total_dimension(kdims);
  if (rho.is_exact()) {
    ExactMatrix out(k, k);
    trace_pairs(rho.dims, keep, [&](std::size_t a, std::size_t b, std::size_t r, std::size_t c) {
      out(a, b) += (*rho.exact)(r, c);
    });
    return DensityMatrix::from_exact(kdims, std::move(out));
  }
  FloatMatrix out = FloatMatrix::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  trace_pairs(rho.dims, keep,
              [&](std::size_t a, std::size_t b, std::size_t r, std::size_t c) { out(a, b) += rho.matrix(r, c); });
  return DensityMatrix::from_float(kdims, std::move(out));
}

PptResult is_ppt(const DensityMatrix& rho, const Cut& cut, const TolerancePolicy& policy) {
  const FloatMatrix pt = partial_transpose(rho.matrix, rho.dims, cut);
  const auto eig = eig_hermitian(pt, policy);
  PptResult out;
  out.min_eigenvalue = eig.values.empty() ? 0.0 : eig.values.back();
  out.ppt = out.min_eigenvalue >= -policy.eig_tol;
  return out;
}

bool pt_invariant_exact(const DensityMatrix& rho, const Cut& cut) {
  if (!rho.is_exact()) throw std::invalid_argument("pt_invariant_exact: density matrix is not exact");
  return partial_transpose(*rho.exact, rho.dims, cut) == *rho.exact;
}

double von_neumann_entropy(const std::vector<double>& spectrum) {
  double s = 0.0;
  for (double p : spectrum)
    if (p > 0.0) s -= p * std::log(p);
  return s;
}

bool majorized_by(std::vector<double> x, std::vector<double> y, double slack) {
  const std::size_t n = std::max(x.size(), y.size());
  x.resize(n, 0.0);
  y.resize(n, 0.0);
  std::sort(x.begin(), x.end(), std::greater<>());
  std::sort(y.begin(), y.end(), std::greater<>());
  double sx = 0.0, sy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sx += x[k];
    sy += y[k];
    if (sx > sy + slack) return false;
  }
  return true;
}

SpectraReport spectra_report(const DensityMatrix& rho, const TolerancePolicy& policy) {
  SpectraReport out;
  out.global_spectrum = eig_hermitian(rho.matrix, policy).values;
  out.global_entropy = von_neumann_entropy(out.global_spectrum);
  for (std::size_t s = 0; s < rho.dims.size(); ++s) {
    std::vector<double> local;
    if (rho.dims.size() == 1) {
      local = out.global_spectrum;
    } else {
      local = eig_hermitian(partial_trace(rho, {s}).matrix, policy).values;
    }
    const double entropy = von_neumann_entropy(local);
    out.local_entropies.push_back(entropy);
    out.entropy_criterion_fulfilled.push_back(entropy <= out.global_entropy + 1e-9);
    out.disorder_criterion_fulfilled.push_back(majorized_by(out.global_spectrum, local));
    out.local_spectra.push_back(std::move(local));
  }
  return out;
}

}  // namespace dloci
