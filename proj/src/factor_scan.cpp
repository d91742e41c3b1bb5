#include <cmath>
#include <functional>

#include "dloci/poly.hpp"

namespace dloci {

namespace {

constexpr double kRootMatchTol = 1e-6;

struct Slice {
  std::vector<FloatVector> zeros;  // unit-norm points of the slice where poly vanishes
};

// Zeros of poly on the plane {u*a + w*b}, from the binary form f(1, s) sampled at
// roots of unity; a degree drop contributes the point b at infinity.
Slice slice_zeros(const HomogPoly& poly, const FloatVector& a, const FloatVector& b) {
  const unsigned d = poly.degree();
  const std::size_t samples = d + 1;
  std::vector<Complex> values(samples);
  for (std::size_t j = 0; j < samples; ++j) {
    const Complex w = std::polar(1.0, 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(samples));
    values[j] = poly.evaluate(FloatVector(a + w * b));
  }
  std::vector<Complex> coeffs(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < samples; ++j)
      acc += values[j] * std::polar(1.0, -2.0 * M_PI * static_cast<double>(j * k) / static_cast<double>(samples));
    coeffs[k] = acc / static_cast<double>(samples);
  }
  Slice out;
  for (const Complex& s : polynomial_roots(coeffs)) {
    FloatVector p = a + s * b;
    out.zeros.push_back(p / p.norm());
  }
  while (out.zeros.size() < d) out.zeros.push_back(b / b.norm());
  return out;
}

double incidence(const FloatVector& l, const FloatVector& p) { return std::abs(l.cwiseProduct(p).sum()); }

bool same_line(const FloatVector& x, const FloatVector& y) { return std::abs(x.dot(y)) >= 1.0 - 1e-8; }

Complex product_value(const std::vector<FloatVector>& factors, const std::vector<std::size_t>& mult,
                      const FloatVector& x) {
  Complex acc = 1.0;
  for (std::size_t f = 0; f < factors.size(); ++f) {
    const Complex v = factors[f].transpose() * x;
    for (std::size_t k = 0; k < mult[f]; ++k) acc *= v;
  }
  return acc;
}

}  // namespace

FactorScanResult linear_factor_scan(const HomogPoly& poly, double tol, std::uint64_t seed) {
  FactorScanResult out;
  const std::size_t nvars = poly.nvars();
  if (poly.is_zero()) {
    out.detail = "zero polynomial";
    return out;
  }
  if (poly.degree() == 0) {
    out.verdict = FactorVerdict::AllLinear;
    out.constant = poly.terms().begin()->second.to_complex();
    out.detail = "nonzero constant";
    return out;
  }
  if (nvars > 4) {
    out.detail = "scan supports at most 4 variables";
    return out;
  }
  if (nvars == 1) {
    out.verdict = FactorVerdict::AllLinear;
    out.factors.push_back(FloatVector::Ones(1));
    out.multiplicities.push_back(poly.degree());
    out.constant = poly.terms().begin()->second.to_complex();
    return out;
  }

  Rng rng(seed);
  const std::size_t slice_count = std::max<std::size_t>(3, nvars + 1);
  std::vector<Slice> slices;
  for (std::size_t s = 0; s < slice_count; ++s) {
    const FloatVector a = random_unit_vector(nvars, rng);
    const FloatVector b = random_unit_vector(nvars, rng);
    slices.push_back(slice_zeros(poly, a, b));
  }

  // A hyperplane meets each plane slice in one point; N-1 slices pin it down.
  const std::size_t pinned = nvars - 1;
  std::vector<FloatVector> candidates;
  std::vector<std::size_t> choice(pinned, 0);
  std::function<void(std::size_t)> enumerate = [&](std::size_t depth) {
    if (depth == pinned) {
      FloatMatrix m(static_cast<Eigen::Index>(pinned), static_cast<Eigen::Index>(nvars));
      for (std::size_t r = 0; r < pinned; ++r) m.row(static_cast<Eigen::Index>(r)) = slices[r].zeros[choice[r]].transpose();
      const auto svd = svd_jacobi(m);
      FloatVector l = svd.v.col(static_cast<Eigen::Index>(nvars) - 1);
      for (std::size_t s = pinned; s < slices.size(); ++s) {
        bool hit = false;
        for (const auto& z : slices[s].zeros) hit = hit || incidence(l, z) <= kRootMatchTol;
        if (!hit) return;
      }
      for (const auto& c : candidates)
        if (same_line(c, l)) return;
      candidates.push_back(l);
      return;
    }
    for (std::size_t k = 0; k < slices[depth].zeros.size(); ++k) {
      choice[depth] = k;
      enumerate(depth + 1);
    }
  };
  enumerate(0);

  std::size_t total = 0;
  for (const auto& l : candidates) {
    std::size_t mult = 0;
    for (const auto& z : slices.front().zeros) mult += incidence(l, z) <= kRootMatchTol ? 1 : 0;
    out.factors.push_back(l);
    out.multiplicities.push_back(mult);
    total += mult;
  }

  auto uncovered = [&]() -> std::optional<FloatVector> {
    for (const auto& z : slices.front().zeros) {
      bool covered = false;
      for (const auto& l : candidates) covered = covered || incidence(l, z) <= kRootMatchTol;
      if (!covered) return z;
    }
    return std::nullopt;
  };

  if (total == poly.degree()) {
    FloatVector x0 = random_unit_vector(nvars, rng);
    out.constant = poly.evaluate(x0) / product_value(out.factors, out.multiplicities, x0);
    double scale = 0.0;
    for (const auto& [e, c] : poly.terms()) scale += std::abs(c.to_complex());
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const FloatVector x = random_unit_vector(nvars, rng);
      worst = std::max(worst, std::abs(poly.evaluate(x) - out.constant * product_value(out.factors, out.multiplicities, x)));
    }
    out.residual = worst / scale;
    if (out.residual <= tol) {
      out.verdict = FactorVerdict::AllLinear;
      out.detail = std::to_string(candidates.size()) + " distinct linear factors";
      return out;
    }
  }

  out.witness = uncovered();
  if (out.witness) {
    out.verdict = FactorVerdict::NonlinearWitness;
    out.detail = "zero on a random plane lies on no hyperplane consistent with all slices";
  } else {
    out.detail = "every sampled zero is covered but the product does not certify";
  }
  return out;
}

}  // namespace dloci
