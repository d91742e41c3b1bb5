#pragma once

// Ensembles, density matrices in the product basis, cuts, partial transpose and
// trace, PPT and spectral criteria.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dloci/exact.hpp"
#include "dloci/numeric.hpp"

namespace dloci {

/// Ordered grouping of subsystem indices into two parties, e.g. "BCD:A".
struct Cut {
  std::vector<std::size_t> first;
  std::vector<std::size_t> second;

  std::string to_string() const;
  friend bool operator==(const Cut&, const Cut&) = default;
};

/// Letters A, B, C, ... name subsystems 0, 1, 2, ...; both sides must be
/// nonempty and together cover every subsystem exactly once.
Cut parse_cut(std::string_view text, std::size_t subsystems);
/// "A:B" for two subsystems; otherwise the first subsystem against the rest.
Cut default_cut(std::size_t subsystems);

std::size_t total_dimension(const std::vector<std::size_t>& dims);

/// perm[new_index] = old_index when subsystems are reordered to cut.first
/// followed by cut.second (the paper's |ij> ordering for that cut).
std::vector<std::size_t> cut_permutation(const std::vector<std::size_t>& dims, const Cut& cut);
/// (m, n) = product of dimensions on each side.
std::pair<std::size_t, std::size_t> cut_shape(const std::vector<std::size_t>& dims, const Cut& cut);

/// Weighted family of (not necessarily normalized) vectors.
struct Ensemble {
  std::vector<std::size_t> dims;
  std::vector<Rational> weights;
  /// Float coordinates, always populated.
  std::vector<FloatVector> vectors;
  /// Exact coordinates, populated when every vector is Gaussian rational.
  std::vector<ExactVector> exact_vectors;

  bool is_exact() const { return !exact_vectors.empty() && exact_vectors.size() == vectors.size(); }
  std::size_t size() const { return vectors.size(); }

  /// Throws std::invalid_argument on non-positive weights or wrong lengths.
  void validate() const;

  static Ensemble exact(std::vector<std::size_t> dims, std::vector<Rational> weights, std::vector<ExactVector> vectors);
  static Ensemble floating(std::vector<std::size_t> dims, std::vector<Rational> weights,
                           std::vector<FloatVector> vectors);
};

/// Coefficient matrix with one column per ensemble vector, rows in the cut's
/// ordering. Weights are not applied.
ExactMatrix coefficient_matrix_exact(const Ensemble& e, const Cut& cut);
FloatMatrix coefficient_matrix(const Ensemble& e, const Cut& cut);

struct DensityMatrix {
  std::vector<std::size_t> dims;
  FloatMatrix matrix;
  std::optional<ExactMatrix> exact;

  bool is_exact() const { return exact.has_value(); }
  std::size_t dimension() const { return static_cast<std::size_t>(matrix.rows()); }

  static DensityMatrix from_exact(std::vector<std::size_t> dims, ExactMatrix m);
  static DensityMatrix from_float(std::vector<std::size_t> dims, FloatMatrix m);
};

/// rho = A P A^dagger / trace.
DensityMatrix from_ensemble(const Ensemble& e);

/// n x n block (i, j), 0-based, of rho written in the cut ordering.
FloatMatrix block(const DensityMatrix& rho, std::size_t i, std::size_t j, const Cut& cut);
ExactMatrix block_exact(const DensityMatrix& rho, std::size_t i, std::size_t j, const Cut& cut);

/// <ij|rho|kl> = <il|rho^PT|kj>: transposes the subsystems of cut.second.
/// Result keeps the original basis ordering.
DensityMatrix partial_transpose(const DensityMatrix& rho, const Cut& cut);
FloatMatrix partial_transpose(const FloatMatrix& m, const std::vector<std::size_t>& dims, const Cut& cut);
ExactMatrix partial_transpose(const ExactMatrix& m, const std::vector<std::size_t>& dims, const Cut& cut);

/// Traces out every subsystem not in keep (kept in ascending order).
DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<std::size_t> keep);

struct PptResult {
  bool ppt = false;
  double min_eigenvalue = 0.0;
};

PptResult is_ppt(const DensityMatrix& rho, const Cut& cut, const TolerancePolicy& policy = {});

/// Structural check rho^PT == rho on the exact path.
bool pt_invariant_exact(const DensityMatrix& rho, const Cut& cut);

struct SpectraReport {
  std::vector<double> global_spectrum;
  std::vector<std::vector<double>> local_spectra;  // one per subsystem
  double global_entropy = 0.0;
  std::vector<double> local_entropies;
  std::vector<bool> entropy_criterion_fulfilled;   // S(rho_s) <= S(rho)
  std::vector<bool> disorder_criterion_fulfilled;  // lambda(rho) majorized by lambda(rho_s)
};

/// Von Neumann entropy (natural log) of a spectrum; nonpositive entries skipped.
double von_neumann_entropy(const std::vector<double>& spectrum);
/// x majorized by y after descending sort and zero padding, with slack.
bool majorized_by(std::vector<double> x, std::vector<double> y, double slack = 1e-9);

SpectraReport spectra_report(const DensityMatrix& rho, const TolerancePolicy& policy = {});

}  // namespace dloci
