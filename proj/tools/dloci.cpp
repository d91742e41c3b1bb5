// dloci: command-line front end for states, loci and the example suites.

#include <gmp.h>

#include <Eigen/Core>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dloci/families.hpp"
#include "dloci/json_io.hpp"

using namespace dloci;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur += ch;
    }
  }
  if (!cur.empty() || !out.empty()) out.push_back(cur);
  return out;
}

std::vector<Rational> rational_list(const std::string& text, std::size_t expected, const char* what) {
  const auto parts = split_list(text);
  if (parts.size() != expected) throw UsageError(std::string(what) + ": expected " + std::to_string(expected) + " values");
  std::vector<Rational> out;
  for (const auto& p : parts) out.push_back(parse_rational(p));
  return out;
}

std::vector<GR> gr_list(const std::string& text, std::size_t expected, const char* what) {
  const auto parts = split_list(text);
  if (expected && parts.size() != expected)
    throw UsageError(std::string(what) + ": expected " + std::to_string(expected) + " values");
  std::vector<GR> out;
  for (const auto& p : parts) out.push_back(GR::parse(p));
  return out;
}

std::vector<double> double_list(const std::string& text, std::size_t expected, const char* what) {
  const auto parts = split_list(text);
  if (parts.size() != expected) throw UsageError(std::string(what) + ": expected " + std::to_string(expected) + " values");
  std::vector<double> out;
  for (const auto& p : parts) {
    std::size_t used = 0;
    const double v = std::stod(p, &used);
    if (used != p.size()) throw UsageError(std::string(what) + ": not a number: " + p);
    out.push_back(v);
  }
  return out;
}

std::vector<std::size_t> size_list(const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& p : split_list(text)) out.push_back(static_cast<std::size_t>(std::stoul(p)));
  return out;
}

Json read_json(const std::string& path) {
  try {
    if (path == "-") return Json::parse(std::cin);
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path);
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw UsageError("invalid JSON in " + path + ": " + e.what());
  }
}

Ensemble load_state(const std::string& path) {
  const Json j = read_json(path);
  return ensemble_from_json(j.contains("state") ? j.at("state") : j);
}

Cut cut_for(const Ensemble& e, const std::string& text) {
  return text.empty() ? default_cut(e.dims.size()) : parse_cut(text, e.dims.size());
}

FloatVector parse_point(const std::string& text) {
  if (!text.empty() && text.front() == '[') return point_from_json(Json::parse(text));
  const auto parts = split_list(text);
  FloatVector x(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) x(static_cast<Eigen::Index>(i)) = GR::parse(parts[i]).to_complex();
  return x;
}

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

std::string version_line(std::uint64_t seed, const TolerancePolicy& tol) {
  std::ostringstream os;
  os << "dloci " << DLOCI_VERSION << " (eigen " << EIGEN_WORLD_VERSION << "." << EIGEN_MAJOR_VERSION << "."
     << EIGEN_MINOR_VERSION << ", gmp " << gmp_version << ") seed=" << seed << " rank_tol=" << tol.rank_tol
     << " eig_tol=" << tol.eig_tol << " membership_tol=" << tol.membership_tol;
  return os.str();
}

std::string command_line(int argc, char** argv) {
  std::string out = "dloci";
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a.find_first_of(" ;|&") != std::string::npos) a = "'" + a + "'";
    out += " " + a;
  }
  return out;
}

int finish_report(VerifyReport rep, const std::string& out_dir, bool json, const std::string& reproduce) {
  rep.reproduce = reproduce;
  const Json j = to_json(rep);
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    const auto base = std::filesystem::path(out_dir) / rep.example;
    std::ofstream(base.string() + ".json") << j.dump(2) << "\n";
    std::ofstream(base.string() + ".txt") << rep.text();
    std::cerr << "wrote " << base.string() << ".json and " << base.string() << ".txt\n";
  }
  if (json) emit(j);
  else std::cout << rep.text();
  return rep.failed() ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Degenerating loci of mixed states: pencils, rank loci, linearity probe and the example suites"};
  app.require_subcommand(1);
  app.fallthrough();

  TolerancePolicy tol;
  try {
    tol = TolerancePolicy::from_env();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::uint64_t seed = 20260101;
  bool json = false;
  app.add_option("--seed", seed, "Master seed for every random choice");
  app.add_option("--rank-tol", tol.rank_tol, "Relative singular-value threshold for rank decisions");
  app.add_option("--eig-tol", tol.eig_tol, "Hermiticity and eigenvalue sign tolerance");
  app.add_option("--membership-tol", tol.membership_tol, "sigma_{k+1}/sigma_1 threshold for locus membership");
  app.add_flag("--json", json, "Print JSON instead of text where both exist");

  std::string input, cut_text;
  std::size_t k = 0, count = 20, samples = 40;
  std::string point_text, dims_text, factors_text;

  // state
  auto* state = app.add_subcommand("state", "Ensembles and density matrices");
  state->require_subcommand(1);
  auto* s_build = state->add_subcommand("build", "Density matrix of an ensemble");
  auto* s_pt = state->add_subcommand("pt", "Partial transpose across a cut");
  auto* s_ppt = state->add_subcommand("ppt", "PPT test across a cut");
  auto* s_spec = state->add_subcommand("spectra", "Global and local spectra with entropy and disorder criteria");
  for (auto* sc : {s_build, s_pt, s_ppt, s_spec}) sc->add_option("--input,-i", input, "State JSON file ('-' for stdin)")->required();
  for (auto* sc : {s_pt, s_ppt}) sc->add_option("--cut", cut_text, "Cut such as A:B or AB:CD");

  // variety
  auto* variety = app.add_subcommand("variety", "Degenerating loci V^k of a state's pencil");
  variety->require_subcommand(1);
  auto* v_pencil = variety->add_subcommand("pencil", "Blocks A_i and the symbolic pencil");
  auto* v_minors = variety->add_subcommand("minors", "Symbolic (k+1)-minors");
  auto* v_member = variety->add_subcommand("member", "Membership of a point in V^k");
  auto* v_sample = variety->add_subcommand("sample", "Sample points of V^k");
  auto* v_probe = variety->add_subcommand("probe", "Linearity probe on V^k");
  auto* v_segre = variety->add_subcommand("segre", "Pull V^k back along a Segre map and probe it");
  for (auto* sc : {v_pencil, v_minors, v_member, v_sample, v_probe, v_segre}) {
    sc->add_option("--input,-i", input, "State JSON file ('-' for stdin)")->required();
    sc->add_option("--cut", cut_text, "Cut such as A:B or BCD:A");
  }
  for (auto* sc : {v_minors, v_member, v_sample, v_probe, v_segre}) sc->add_option("--k", k, "Rank bound k")->required();
  v_member->add_option("--point", point_text, "Comma list of Gaussian rationals or a JSON [[re,im],...] array")->required();
  v_sample->add_option("--count", count, "Number of points");
  v_probe->add_option("--samples", samples, "Sample points for the probe");
  v_probe->add_option("--factors", factors_text, "Product structure of the parameter space, e.g. 2,2");
  v_segre->add_option("--dims", dims_text, "Factor dimensions, e.g. 2,2")->required();
  v_segre->add_option("--samples", samples, "Sample points for the probe");

  // criteria
  auto* criteria = app.add_subcommand("criteria", "PPT, entropy, disorder and locus-linearity verdicts for a state");
  criteria->add_option("--input,-i", input, "State JSON file ('-' for stdin)")->required();
  criteria->add_option("--cut", cut_text, "Cut such as A:B");
  criteria->add_option("--samples", samples, "Sample points for the probe");

  // examples
  auto* examples = app.add_subcommand("examples", "Verification suites for the example families");
  examples->require_subcommand(1);
  std::string out_dir = "reports";
  examples->add_option("--out", out_dir, "Directory for the JSON and text reports ('' to skip)");
  std::string tvs, cubes, theta, theta2, e_text = "0,0,1", a_text, a2_text;
  double h = 1.0;
  auto* ex1 = examples->add_subcommand("ex1", "Hesse-cubic family on CP^2 x CP^2");
  ex1->add_option("--tvs", tvs, "t,v,s as Gaussian rationals");
  ex1->add_option("--cubes", cubes, "t^3,v^3,s^3 as Gaussian rationals");
  ex1->add_option("--theta", theta, "theta1,theta2,theta3 on the isospectral slice");
  ex1->add_option("--modulus", h, "Modulus h of the isospectral slice");
  auto* ex2 = examples->add_subcommand("ex2", "PT-invariant rank 7 family in 4 x 6");
  ex2->add_option("--e", e_text, "e1,e2,e3 as rationals");
  auto* ex3 = examples->add_subcommand("ex3", "Four-qubit Smolin generalization");
  ex3->add_option("--a", a_text, "a1..a8 as Gaussian rationals (default all 1)");
  ex3->add_option("--compare-a", a2_text, "Second a1..a8 for the lambda relation");
  auto* trip = examples->add_subcommand("tripartite", "Tripartite pure family on 3 x 3 x 3");
  trip->add_option("--theta", theta, "theta1,theta2,theta3")->required();
  trip->add_option("--compare-theta", theta2, "Second theta triple for the moduli comparison");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 2;
  }

  try {
    tol.validate();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::cerr << version_line(seed, tol) << "\n";
  const std::string reproduce = command_line(argc, argv);

  try {
    if (state->parsed()) {
      const Ensemble e = load_state(input);
      const DensityMatrix rho = from_ensemble(e);
      if (s_build->parsed()) {
        emit({{"state", to_json(e)}, {"density", to_json(rho)}});
      } else if (s_pt->parsed()) {
        emit(to_json(partial_transpose(rho, cut_for(e, cut_text))));
      } else if (s_ppt->parsed()) {
        const Cut cut = cut_for(e, cut_text);
        const auto r = is_ppt(rho, cut, tol);
        Json out = {{"cut", cut.to_string()}, {"ppt", r.ppt}, {"min_eigenvalue", r.min_eigenvalue}};
        if (rho.exact) out["pt_invariant_exact"] = pt_invariant_exact(rho, cut);
        emit(out);
      } else {
        emit(to_json(spectra_report(rho, tol)));
      }
      return 0;
    }

    if (variety->parsed()) {
      const Ensemble e = load_state(input);
      const Cut cut = cut_for(e, cut_text);
      const Pencil p = pencil_from_ensemble(e, cut);
      if (v_pencil->parsed()) {
        Json blocks = Json::array();
        if (p.exact_blocks)
          for (const auto& b : *p.exact_blocks) blocks.push_back(to_json(b));
        else
          for (const auto& b : p.blocks) blocks.push_back(to_json(b));
        Json out = {{"cut", cut.to_string()}, {"m", p.m()}, {"n", p.n()}, {"t", p.t()}, {"blocks", blocks}};
        if (p.exact_blocks) {
          const auto sym = p.symbolic();
          Json rows = Json::array();
          for (std::size_t r = 0; r < sym.rows(); ++r) {
            Json row = Json::array();
            for (std::size_t c = 0; c < sym.cols(); ++c) row.push_back(sym(r, c).to_string());
            rows.push_back(row);
          }
          out["symbolic"] = rows;
        }
        emit(out);
      } else if (v_minors->parsed()) {
        if (!p.exact_blocks) throw UsageError("variety minors needs an exact state");
        Json minors = Json::array();
        if (k + 1 <= std::min(p.n(), p.t()))
          for (const auto& m : sym_minors(p.symbolic(), k))
            if (!m.is_zero()) minors.push_back(to_json(m));
        emit({{"cut", cut.to_string()}, {"k", k}, {"minors", minors}});
      } else if (v_member->parsed()) {
        const FloatVector x = parse_point(point_text);
        Json out = {{"cut", cut.to_string()}, {"k", k}};
        out["member"] = membership(p, x, k, tol);
        out["residual"] = p.residual(x, k);
        if (p.exact_blocks && point_text.front() != '[') {
          ExactVector xe;
          for (const auto& s : split_list(point_text)) xe.push_back(GR::parse(s));
          out["member_exact"] = membership(p, xe, k);
        }
        emit(out);
      } else if (v_sample->parsed()) {
        const auto pts = sample_points(p, k, count, seed, tol);
        Json arr = Json::array();
        for (const auto& x : pts) {
          arr.push_back({{"point", to_json(x)}, {"residual", p.residual(x, k)},
                         {"local_dimension", local_dimension(p, k, x, tol)}});
        }
        emit({{"cut", cut.to_string()}, {"k", k}, {"seed", seed}, {"points", arr}});
      } else if (v_probe->parsed()) {
        ProbeReport r;
        if (factors_text.empty()) {
          r = linearity_probe(p, k, samples, seed, tol);
        } else {
          r = linearity_probe(Locus(p, k, size_list(factors_text)), samples, seed, tol);
        }
        Json out = to_json(r);
        out["cut"] = cut.to_string();
        out["k"] = k;
        out["reproduce"] = reproduce;
        emit(out);
      } else {
        const auto dims = size_list(dims_text);
        Json out = {{"cut", cut.to_string()}, {"k", k}, {"dims", dims}};
        if (p.exact_blocks) {
          const auto pull = segre_pullback(p, dims, k);
          Json minors = Json::array();
          for (const auto& m : pull.minors)
            if (!m.is_zero()) minors.push_back(to_json(m, pull.names));
          out["names"] = pull.names;
          out["minors"] = minors;
        }
        out["probe"] = to_json(linearity_probe(Locus(p, k, dims), samples, seed, tol));
        out["reproduce"] = reproduce;
        emit(out);
      }
      return 0;
    }

    if (criteria->parsed()) {
      const Ensemble e = load_state(input);
      const Cut cut = cut_for(e, cut_text);
      const DensityMatrix rho = from_ensemble(e);
      const auto ppt = is_ppt(rho, cut, tol);
      const auto spectra = spectra_report(rho, tol);
      const Pencil p = pencil_from_ensemble(e, cut);
      const std::size_t kk = p.n() - 1;
      const auto probe = linearity_probe(p, kk, samples, seed, tol);
      Json out = {{"cut", cut.to_string()},
                  {"ppt", {{"ppt", ppt.ppt}, {"min_eigenvalue", ppt.min_eigenvalue}}},
                  {"spectra", to_json(spectra)},
                  {"locus", {{"k", kk}, {"probe", to_json(probe)}}}};
      std::string verdict = "undecided";
      if (!ppt.ppt) verdict = "entangled (not PPT)";
      else if (probe.verdict == ProbeVerdict::Nonlinear) verdict = "entangled (nonlinear V^" + std::to_string(kk) + ")";
      out["verdict"] = verdict;
      out["reproduce"] = reproduce;
      emit(out);
      return 0;
    }

    if (examples->parsed()) {
      if (ex1->parsed()) {
        const int given = !tvs.empty() + !cubes.empty() + !theta.empty();
        if (given > 1) throw UsageError("ex1: give only one of --tvs, --cubes, --theta");
        Example1Params p;
        if (!tvs.empty()) {
          const auto v = gr_list(tvs, 3, "--tvs");
          p = Example1Params::from_exact_tvs(v[0], v[1], v[2]);
        } else if (!cubes.empty()) {
          const auto v = gr_list(cubes, 3, "--cubes");
          p = Example1Params::from_exact_cubes(v[0], v[1], v[2]);
        } else if (!theta.empty()) {
          const auto v = double_list(theta, 3, "--theta");
          p = Example1Params::isospectral(h, v[0], v[1], v[2]);
        } else {
          p = Example1Params::from_exact_cubes(GR(2), GR(3), GR(5));
        }
        return finish_report(example1_verify(p, seed, tol), out_dir, json, reproduce);
      }
      if (ex2->parsed()) {
        const auto v = rational_list(e_text, 3, "--e");
        return finish_report(example2_verify({v[0], v[1], v[2]}, seed, tol), out_dir, json, reproduce);
      }
      if (ex3->parsed()) {
        Example3Params p = Example3Params::smolin();
        if (!a_text.empty()) {
          const auto v = gr_list(a_text, 8, "--a");
          std::copy(v.begin(), v.end(), p.a.begin());
        }
        std::optional<Example3Params> other;
        if (!a2_text.empty()) {
          other = Example3Params::smolin();
          const auto v = gr_list(a2_text, 8, "--compare-a");
          std::copy(v.begin(), v.end(), other->a.begin());
        }
        return finish_report(example3_verify(p, other, seed, tol), out_dir, json, reproduce);
      }
      const auto t = double_list(theta, 3, "--theta");
      std::optional<std::array<double, 3>> other;
      if (!theta2.empty()) {
        const auto t2 = double_list(theta2, 3, "--compare-theta");
        other = std::array<double, 3>{t2[0], t2[1], t2[2]};
      }
      return finish_report(tripartite_verify({t[0], t[1], t[2]}, other, seed, tol), out_dir, json, reproduce);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
