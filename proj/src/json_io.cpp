#include <stdexcept>

#include "dloci/json_io.hpp"

namespace dloci {

namespace {

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_number()) return Rational(j.get<double>());
  throw std::invalid_argument("expected a rational string or number");
}

bool all_strings(const Json& arr) {
  for (const auto& x : arr)
    if (!x.is_string()) return false;
  return true;
}

std::pair<std::size_t, std::size_t> matrix_shape(const Json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("entries"))
    throw std::invalid_argument("matrix JSON needs rows, cols and entries");
  const auto rows = j.at("rows").get<std::size_t>();
  const auto cols = j.at("cols").get<std::size_t>();
  if (j.at("entries").size() != rows * cols) throw std::invalid_argument("matrix JSON: entry count != rows * cols");
  return {rows, cols};
}

Json point_json(const ProductPoint& x) {
  Json out = Json::array();
  for (const auto& f : x) out.push_back(to_json(f));
  return out;
}

}  // namespace

Json to_json(const GR& z) { return z.to_string(); }

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const ExactVector& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_json(x));
  return out;
}

Json to_json(const FloatVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

Json to_json(const ExactMatrix& m) {
  Json entries = Json::array();
  for (const auto& x : m.entries()) entries.push_back(to_json(x));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

Json to_json(const FloatMatrix& m) {
  Json entries = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) entries.push_back(to_json(m(r, c)));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

Json to_json(const HomogPoly& p, const std::vector<std::string>& names) {
  Json terms = Json::array();
  for (const auto& [e, c] : p.terms()) {
    Json exp = Json::array();
    for (std::size_t v = 0; v < p.nvars(); ++v) exp.push_back(e[v]);
    terms.push_back({{"exponent", exp}, {"coeff", to_json(c)}});
  }
  return {{"nvars", p.nvars()}, {"degree", p.degree()}, {"text", p.to_string(names)}, {"terms", terms}};
}

Json to_json(const Ensemble& e) {
  Json weights = Json::array();
  for (const auto& w : e.weights) weights.push_back(format_rational(w));
  Json vectors = Json::array();
  if (e.is_exact())
    for (const auto& v : e.exact_vectors) vectors.push_back(to_json(v));
  else
    for (const auto& v : e.vectors) vectors.push_back(to_json(v));
  return {{"dims", e.dims}, {"weights", weights}, {"vectors", vectors}};
}

Json to_json(const DensityMatrix& rho) {
  Json out = {{"dims", rho.dims}};
  if (rho.exact) out["matrix"] = to_json(*rho.exact);
  else out["matrix"] = to_json(rho.matrix);
  return out;
}

Json to_json(const EigenDecomposition& eig) {
  return {{"eigenvalues", eig.values}, {"reconstruction_error", eig.reconstruction_error}};
}

Json to_json(const SpectraReport& s) {
  Json entropy = Json::array(), disorder = Json::array();
  for (bool b : s.entropy_criterion_fulfilled) entropy.push_back(b);
  for (bool b : s.disorder_criterion_fulfilled) disorder.push_back(b);
  return {{"global_spectrum", s.global_spectrum},
          {"local_spectra", s.local_spectra},
          {"global_entropy", s.global_entropy},
          {"local_entropies", s.local_entropies},
          {"entropy_criterion_fulfilled", entropy},
          {"disorder_criterion_fulfilled", disorder}};
}

Json to_json(const ProbeReport& r) {
  Json out = {{"verdict", to_string(r.verdict)},
              {"samples_used", r.samples_used},
              {"smooth_points", r.smooth_points},
              {"tangent_tests", r.tangent_tests},
              {"seed", r.seed},
              {"max_passing_residual", r.max_passing_residual},
              {"chart_coverage", r.chart_coverage},
              {"notes", r.notes}};
  if (r.witness) {
    out["witness"] = {{"point", point_json(r.witness->point)},
                      {"direction", point_json(r.witness->direction)},
                      {"step", r.witness->step},
                      {"residual", r.witness->residual},
                      {"residual_half_step", r.witness->residual_half_step},
                      {"sample_index", r.witness->sample_index}};
  } else {
    out["witness"] = nullptr;
  }
  return out;
}

Json to_json(const VerifyReport& r) {
  Json params = Json::object();
  for (const auto& [k, v] : r.params) params[k] = v;
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"status", to_string(c.status)}, {"detail", c.detail}});
  Json out = {{"example", r.example}, {"params", params}, {"checks", checks}, {"seed", r.seed},
              {"failed", r.failed()}, {"reproduce", r.reproduce}};
  out["probe"] = r.probe ? to_json(*r.probe) : Json(nullptr);
  return out;
}

GR gr_from_json(const Json& j) {
  if (j.is_string()) return GR::parse(j.get<std::string>());
  if (j.is_number_integer()) return GR(j.get<long>());
  throw std::invalid_argument("expected a Gaussian rational string");
}

Complex complex_from_json(const Json& j) {
  if (j.is_string()) return GR::parse(j.get<std::string>()).to_complex();
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  throw std::invalid_argument("expected a complex value as [re, im]");
}

ExactMatrix exact_matrix_from_json(const Json& j) {
  const auto [rows, cols] = matrix_shape(j);
  std::vector<GR> entries;
  for (const auto& x : j.at("entries")) entries.push_back(gr_from_json(x));
  return ExactMatrix(rows, cols, std::move(entries));
}

FloatMatrix float_matrix_from_json(const Json& j) {
  const auto [rows, cols] = matrix_shape(j);
  FloatMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  const auto& e = j.at("entries");
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = complex_from_json(e[r * cols + c]);
  return m;
}

Ensemble ensemble_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dims") || !j.contains("vectors"))
    throw std::invalid_argument("state JSON needs dims and vectors");
  const auto dims = j.at("dims").get<std::vector<std::size_t>>();
  const auto& vecs = j.at("vectors");
  if (!vecs.is_array() || vecs.empty()) throw std::invalid_argument("state JSON: vectors must be a nonempty array");
  std::vector<Rational> weights;
  if (j.contains("weights")) {
    for (const auto& w : j.at("weights")) weights.push_back(rational_from_json(w));
  } else {
    weights.assign(vecs.size(), Rational(1));
  }
  bool exact = true;
  for (const auto& v : vecs) exact = exact && v.is_array() && all_strings(v);
  if (exact) {
    std::vector<ExactVector> vs;
    for (const auto& v : vecs) {
      ExactVector x;
      for (const auto& z : v) x.push_back(gr_from_json(z));
      vs.push_back(std::move(x));
    }
    return Ensemble::exact(dims, std::move(weights), std::move(vs));
  }
  std::vector<FloatVector> vs;
  for (const auto& v : vecs) vs.push_back(point_from_json(v));
  return Ensemble::floating(dims, std::move(weights), std::move(vs));
}

FloatVector point_from_json(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected an array of coordinates");
  FloatVector x(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) x(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
  return x;
}

}  // namespace dloci
