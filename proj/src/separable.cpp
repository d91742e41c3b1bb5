#include <stdexcept>

#include "dloci/varieties.hpp"

namespace dloci {

std::optional<std::pair<ExactVector, ExactVector>> split_product(const ExactVector& v,
                                                                  const std::vector<std::size_t>& dims,
                                                                  const Cut& cut) {
  const auto [m, n] = cut_shape(dims, cut);
  const auto perm = cut_permutation(dims, cut);
  if (v.size() != m * n) throw std::invalid_argument("split_product: vector length mismatch");
  ExactMatrix c(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) c(i, j) = v[perm[i * n + j]];
  if (c.is_zero()) return std::nullopt;
  std::size_t i0 = 0, j0 = 0;
  while (c(i0, j0).is_zero()) {
    if (++j0 == n) {
      j0 = 0;
      ++i0;
    }
  }
  ExactVector a(m), b(n);
  for (std::size_t j = 0; j < n; ++j) b[j] = c(i0, j);
  for (std::size_t i = 0; i < m; ++i) a[i] = c(i, j0) / c(i0, j0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!(a[i] * b[j] == c(i, j))) return std::nullopt;
  return std::make_pair(std::move(a), std::move(b));
}

SeparableCertificate verify_separable_factorization(const Ensemble& e, const Cut& cut, std::size_t k) {
  if (!e.is_exact()) throw std::invalid_argument("verify_separable_factorization: ensemble must be exact");
  SeparableCertificate cert;
  for (std::size_t u = 0; u < e.size(); ++u) {
    auto split = split_product(e.exact_vectors[u], e.dims, cut);
    if (!split) throw std::invalid_argument("verify_separable_factorization: vector " + std::to_string(u) + " is not a product vector");
    cert.forms.emplace_back(split->first);
  }
  const Pencil pencil = pencil_from_ensemble(e, cut);
  const SymbolicPencil sym = pencil.symbolic();
  if (k + 1 > std::min(sym.rows(), sym.cols())) {
    cert.certified = true;
    cert.detail = "no (k+1)-minors: the locus is the whole space";
    return cert;
  }
  const auto index_sets = minor_index_sets(sym.rows(), sym.cols(), k + 1);
  const auto minors = sym_minors(sym, k);
  cert.certified = true;
  for (std::size_t idx = 0; idx < minors.size(); ++idx) {
    MinorFactorization mf;
    mf.rows = index_sets[idx].first;
    mf.cols = index_sets[idx].second;
    mf.constant = 0;
    if (minors[idx].is_zero()) {
      cert.minors.push_back(std::move(mf));
      continue;
    }
    ++cert.nonzero_minors;
    HomogPoly rest = minors[idx];
    bool ok = true;
    for (auto u : mf.cols) {
      auto q = divide_linear(rest, cert.forms[u]);
      if (!q) {
        ok = false;
        break;
      }
      rest = std::move(*q);
      mf.factors.push_back(u);
    }
    if (ok && rest.degree() == 0 && rest.size() == 1) {
      mf.constant = rest.terms().begin()->second;
    } else {
      ok = false;
    }
    if (!ok && cert.certified) {
      cert.certified = false;
      cert.detail = "minor " + std::to_string(idx) + " is not a constant times its predicted forms";
    }
    cert.minors.push_back(std::move(mf));
  }
  if (cert.certified)
    cert.detail = std::to_string(cert.nonzero_minors) + " nonzero minors factor into predicted linear forms";
  return cert;
}

}  // namespace dloci
