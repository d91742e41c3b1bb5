#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dloci/families.hpp"
#include "dloci/json_io.hpp"

namespace py = pybind11;
using namespace dloci;

namespace {

Ensemble parse_ensemble(const std::string& text) { return ensemble_from_json(Json::parse(text)); }

ExactMatrix parse_exact(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::vector<GR>> parsed;
  for (const auto& r : rows) {
    auto& out = parsed.emplace_back();
    for (const auto& s : r) out.push_back(GR::parse(s));
  }
  return ExactMatrix::from_rows(parsed);
}

Cut cut_for(const Ensemble& e, const std::string& cut) {
  return cut.empty() ? default_cut(e.dims.size()) : parse_cut(cut, e.dims.size());
}

TolerancePolicy policy_from(double rank_tol, double eig_tol, double membership_tol) {
  TolerancePolicy p{rank_tol, eig_tol, membership_tol};
  p.validate();
  return p;
}

}  // namespace

PYBIND11_MODULE(_dloci, m) {
  m.doc() = "Degenerating loci of mixed states";
  m.attr("__version__") = DLOCI_VERSION;

  py::register_exception<std::domain_error>(m, "DomainError", PyExc_ValueError);

  m.def("rank_exact", [](const std::vector<std::vector<std::string>>& rows) { return rank_exact(parse_exact(rows)); });
  m.def("det_exact", [](const std::vector<std::vector<std::string>>& rows) {
    return det_exact(parse_exact(rows)).to_string();
  });

  m.def("eigvalsh", [](const FloatMatrix& a) { return eig_hermitian(a).values; });
  m.def("singular_values", [](const FloatMatrix& a) { return singular_values(a); });

  m.def("density", [](const std::string& ens) { return from_ensemble(parse_ensemble(ens)).matrix; });
  m.def(
      "partial_transpose",
      [](const FloatMatrix& rho, const std::vector<std::size_t>& dims, const std::string& cut) {
        return partial_transpose(rho, dims, cut.empty() ? default_cut(dims.size()) : parse_cut(cut, dims.size()));
      },
      py::arg("rho"), py::arg("dims"), py::arg("cut") = "");
  m.def(
      "is_ppt",
      [](const std::string& ens, const std::string& cut) {
        const Ensemble e = parse_ensemble(ens);
        const auto r = is_ppt(from_ensemble(e), cut_for(e, cut));
        return std::make_pair(r.ppt, r.min_eigenvalue);
      },
      py::arg("ensemble"), py::arg("cut") = "");
  m.def("spectra", [](const std::string& ens) { return to_json(spectra_report(from_ensemble(parse_ensemble(ens)))).dump(); });

  m.def(
      "pencil_blocks",
      [](const std::string& ens, const std::string& cut) {
        const Ensemble e = parse_ensemble(ens);
        return pencil_from_ensemble(e, cut_for(e, cut)).blocks;
      },
      py::arg("ensemble"), py::arg("cut") = "");
  m.def(
      "pencil_det",
      [](const std::string& ens, const std::string& cut) {
        const Ensemble e = parse_ensemble(ens);
        const Pencil p = pencil_from_ensemble(e, cut_for(e, cut));
        if (!p.is_exact()) throw std::invalid_argument("pencil_det needs an exact ensemble");
        return sym_det(symbolic_pencil(*p.exact_blocks)).to_string();
      },
      py::arg("ensemble"), py::arg("cut") = "");
  m.def(
      "membership",
      [](const std::string& ens, const FloatVector& x, std::size_t k, const std::string& cut, double tol) {
        const Ensemble e = parse_ensemble(ens);
        TolerancePolicy pol;
        pol.membership_tol = tol;
        pol.validate();
        return membership(pencil_from_ensemble(e, cut_for(e, cut)), x, k, pol);
      },
      py::arg("ensemble"), py::arg("point"), py::arg("k"), py::arg("cut") = "", py::arg("tol") = 1e-8);
  m.def(
      "linearity_probe",
      [](const std::string& ens, std::size_t k, const std::string& cut, std::size_t samples, std::uint64_t seed,
         double rank_tol, double eig_tol, double membership_tol) {
        const Ensemble e = parse_ensemble(ens);
        const auto pol = policy_from(rank_tol, eig_tol, membership_tol);
        py::gil_scoped_release release;
        return to_json(linearity_probe(pencil_from_ensemble(e, cut_for(e, cut)), k, samples, seed, pol)).dump();
      },
      py::arg("ensemble"), py::arg("k"), py::arg("cut") = "", py::arg("samples") = 40, py::arg("seed") = 20260101,
      py::arg("rank_tol") = 1e-9, py::arg("eig_tol") = 1e-10, py::arg("membership_tol") = 1e-8);

  m.def("hesse_cubic", [](const std::string& a, const std::string& b, const std::string& c) {
    return hesse_cubic(GR::parse(a), GR::parse(b), GR::parse(c)).to_string();
  });
  m.def("moduli_k", [](Complex x) { return moduli_k(x); });
  m.def("g_value", [](double t1, double t2, double t3) { return g_value(t1, t2, t3); });

  m.def(
      "example1_verify",
      [](std::array<std::string, 3> cubes, std::uint64_t seed) {
        const auto p = Example1Params::from_exact_cubes(GR::parse(cubes[0]), GR::parse(cubes[1]), GR::parse(cubes[2]));
        py::gil_scoped_release release;
        return to_json(example1_verify(p, seed)).dump();
      },
      py::arg("cubes") = std::array<std::string, 3>{"2", "3", "5"}, py::arg("seed") = 20260101);
  m.def(
      "example1_isospectral_verify",
      [](std::array<double, 3> theta, std::uint64_t seed) {
        const auto p = Example1Params::isospectral(1.0, theta[0], theta[1], theta[2]);
        py::gil_scoped_release release;
        return to_json(example1_verify(p, seed)).dump();
      },
      py::arg("theta"), py::arg("seed") = 20260101);
  m.def(
      "example2_verify",
      [](std::array<std::string, 3> e, std::uint64_t seed) {
        const Example2Params p{parse_rational(e[0]), parse_rational(e[1]), parse_rational(e[2])};
        py::gil_scoped_release release;
        return to_json(example2_verify(p, seed)).dump();
      },
      py::arg("e") = std::array<std::string, 3>{"0", "0", "1"}, py::arg("seed") = 20260101);
  m.def(
      "example3_verify",
      [](std::optional<std::array<std::string, 8>> a, std::uint64_t seed) {
        auto p = Example3Params::smolin();
        if (a)
          for (std::size_t i = 0; i < 8; ++i) p.a[i] = GR::parse((*a)[i]);
        p.validate();
        py::gil_scoped_release release;
        return to_json(example3_verify(p, std::nullopt, seed)).dump();
      },
      py::arg("a") = py::none(), py::arg("seed") = 20260101);
  m.def(
      "tripartite_verify",
      [](std::array<double, 3> theta, std::optional<std::array<double, 3>> other, std::uint64_t seed) {
        py::gil_scoped_release release;
        return to_json(tripartite_verify(theta, other, seed)).dump();
      },
      py::arg("theta"), py::arg("other") = py::none(), py::arg("seed") = 20260101);
}
