#include "saext/scenario.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "saext/symmetry.hpp"

namespace saext {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& where,
                const std::vector<std::string>& allowed) {
  if (!obj.is_object()) throw ScenarioError(where + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ScenarioError(where + ": unknown field \"" + key + "\"");
  }
}

double require_number(const json& obj, const std::string& where, const std::string& key) {
  if (!obj.contains(key) || !obj[key].is_number())
    throw ScenarioError(where + ": missing numeric field \"" + key + "\"");
  return obj[key].get<double>();
}

double kv_number(const std::string& spec, const std::string& body, const std::string& key) {
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw ScenarioError("unitary spec \"" + spec + "\": expected key=value pairs");
    if (item.substr(0, eq) == key) return std::stod(item.substr(eq + 1));
  }
  throw ScenarioError("unitary spec \"" + spec + "\": missing parameter \"" + key + "\"");
}

json checked(double value, double tolerance, bool pass) {
  return json{{"value", value}, {"tolerance", tolerance}, {"pass", pass}};
}

}  // namespace

BoundaryUnitary parse_unitary_spec(const std::string& spec,
                                   const TruncatedBoundarySpace& space) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string body = colon == std::string::npos ? "" : spec.substr(colon + 1);

  if (kind == "neumann") return make_phase_unitary(space, 0.0);
  if (kind == "dirichlet") return make_phase_unitary(space, std::numbers::pi);
  if (kind == "phase") return make_phase_unitary(space, kv_number(spec, body, "beta"));
  if (kind == "two_phase")
    return make_two_phase_unitary(space, kv_number(spec, body, "beta1"),
                                  kv_number(spec, body, "beta2"));
  if (kind == "quasiperiodic")
    return make_quasiperiodic_unitary(space, kv_number(spec, body, "alpha"));
  if (kind == "fourier_diagonal") {
    const std::string prefix = "betas=";
    if (body.rfind(prefix, 0) != 0)
      throw ScenarioError("unitary spec \"" + spec + "\": expected betas=v1;v2;...");
    std::vector<double> vals;
    std::stringstream ss(body.substr(prefix.size()));
    std::string item;
    while (std::getline(ss, item, ';')) vals.push_back(std::stod(item));
    if (static_cast<int>(vals.size()) != space.dimension())
      throw ScenarioError("unitary spec \"" + spec + "\": need " +
                          std::to_string(space.dimension()) + " betas");
    return make_fourier_diagonal_unitary(
        space, Eigen::Map<Eigen::VectorXd>(vals.data(), vals.size()));
  }
  throw ScenarioError("unitary spec \"" + spec + "\": unknown kind \"" + kind + "\"");
}

namespace {

BoundaryUnitary unitary_from_json(const json& u, const TruncatedBoundarySpace& space) {
  check_keys(u, "unitary", {"kind", "beta", "beta1", "beta2", "alpha", "betas"});
  if (!u.contains("kind") || !u["kind"].is_string())
    throw ScenarioError("unitary: missing string field \"kind\"");
  const std::string kind = u["kind"].get<std::string>();
  if (kind == "neumann") return make_phase_unitary(space, 0.0);
  if (kind == "dirichlet") return make_phase_unitary(space, std::numbers::pi);
  if (kind == "phase") return make_phase_unitary(space, require_number(u, "unitary", "beta"));
  if (kind == "two_phase")
    return make_two_phase_unitary(space, require_number(u, "unitary", "beta1"),
                                  require_number(u, "unitary", "beta2"));
  if (kind == "quasiperiodic")
    return make_quasiperiodic_unitary(space, require_number(u, "unitary", "alpha"));
  if (kind == "fourier_diagonal") {
    if (!u.contains("betas") || !u["betas"].is_array())
      throw ScenarioError("unitary: fourier_diagonal needs a \"betas\" array");
    std::vector<double> vals = u["betas"].get<std::vector<double>>();
    if (static_cast<int>(vals.size()) != space.dimension())
      throw ScenarioError("unitary: need " + std::to_string(space.dimension()) + " betas");
    return make_fourier_diagonal_unitary(
        space, Eigen::Map<Eigen::VectorXd>(vals.data(), vals.size()));
  }
  throw ScenarioError("unitary: unknown kind \"" + kind + "\"");
}

}  // namespace

nlohmann::json load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot read scenario file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ScenarioError(std::string("scenario parse error: ") + e.what());
  }
  check_keys(j, "scenario",
             {"schema", "seed", "geometry", "unitary", "group", "pipelines", "tolerances",
              "spectrum", "output"});
  if (!j.contains("schema") || j["schema"] != "saext/1")
    throw ScenarioError("scenario: schema must be \"saext/1\"");
  return j;
}

ScenarioOutcome run_scenario(const nlohmann::json& scenario, const std::string& out_dir,
                             const ScenarioOverrides& overrides) {
  check_keys(scenario, "scenario",
             {"schema", "seed", "geometry", "unitary", "group", "pipelines", "tolerances",
              "spectrum", "output"});

  // tolerances (defaults, then file, then --tol overrides)
  std::map<std::string, double> tol = {{"eps_gap", 1e-8},   {"delta_min", 1e-3},
                                       {"commute", 1e-10},  {"invariance", 1e-7},
                                       {"cluster_rel", 1e-7}, {"residual", 1e-8},
                                       {"sector_merge", 1e-7}};
  if (scenario.contains("tolerances")) {
    check_keys(scenario["tolerances"], "tolerances",
               {"eps_gap", "delta_min", "commute", "invariance", "cluster_rel", "residual",
                "sector_merge"});
    for (const auto& [k, v] : scenario["tolerances"].items())
      tol[k] = v.get<double>();
  }
  for (const auto& [k, v] : overrides.tolerances) {
    if (!tol.count(k)) throw ScenarioError("--tol: unknown tolerance \"" + k + "\"");
    tol[k] = v;
  }
  for (const auto& [k, v] : tol)
    if (!(v > 0.0)) throw ScenarioError("tolerance \"" + k + "\" must be positive");

  long seed = scenario.value("seed", 1L);
  if (overrides.seed) seed = *overrides.seed;

  // geometry
  if (!scenario.contains("geometry")) throw ScenarioError("scenario: missing \"geometry\"");
  const json& geo = scenario["geometry"];
  check_keys(geo, "geometry", {"kind", "cells", "modes"});
  const std::string gkind = geo.value("kind", "");
  int cells = overrides.cells.value_or(geo.value("cells", 64));
  int modes = overrides.modes.value_or(geo.value("modes", 2));

  std::shared_ptr<BulkDiscretization> disc;
  try {
    if (gkind == "interval")
      disc = discretize_interval(cells);
    else if (gkind == "cylinder")
      disc = discretize_cylinder(cells, modes);
    else if (gkind == "hemisphere")
      disc = discretize_hemisphere(cells, modes);
    else
      throw ScenarioError("geometry: unknown kind \"" + gkind + "\"");
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(std::string("geometry: ") + e.what());
  }

  if (!scenario.contains("unitary")) throw ScenarioError("scenario: missing \"unitary\"");
  BoundaryUnitary u = unitary_from_json(scenario["unitary"], disc->boundary);

  // group (optional)
  std::optional<BulkRep> bulk_rep;
  std::optional<BoundaryRep> boundary_rep;
  if (scenario.contains("group")) {
    const json& grp = scenario["group"];
    check_keys(grp, "group", {"kind", "samples"});
    const std::string kind = grp.value("kind", "");
    if (kind == "z2") {
      auto [b, v] = z2_cylinder_rep(disc, disc->boundary);
      bulk_rep = std::move(b);
      boundary_rep = std::move(v);
    } else if (kind == "so2") {
      const GroupModel circle = GroupModel::sampled_circle(grp.value("samples", 16));
      bulk_rep = so2_bulk_rep(disc, circle);
      boundary_rep = so2_boundary_rep(disc->boundary, circle);
    } else {
      throw ScenarioError("group: unknown kind \"" + kind + "\"");
    }
  }

  std::vector<std::string> pipelines =
      scenario.value("pipelines", std::vector<std::string>{"gap", "cayley", "spectrum"});
  int spectrum_count = 10;
  if (scenario.contains("spectrum")) {
    check_keys(scenario["spectrum"], "spectrum", {"count"});
    spectrum_count = scenario["spectrum"].value("count", 10);
  }

  std::string report_name = "report.json", csv_name = "spectrum.csv";
  if (scenario.contains("output")) {
    check_keys(scenario["output"], "output", {"report", "spectrum_csv"});
    report_name = scenario["output"].value("report", report_name);
    csv_name = scenario["output"].value("spectrum_csv", csv_name);
  }

  ScenarioOutcome out;
  out.report["schema"] = "saext/1";
  out.report["seed"] = seed;
  out.report["geometry"] = {{"kind", gkind}, {"cells", cells}, {"modes", modes}};
  out.report["unitary"] = scenario["unitary"];
  out.report["tolerances"] = tol;

  auto fail = [&](const std::string& stage) {
    if (out.exit_code == 0) {
      out.exit_code = 2;
      out.failed_stage = stage;
      out.report["failed_stage"] = stage;
    }
  };

  std::optional<FormAssembly> assembly;
  std::optional<SpectrumResult> spectrum;

  auto need_assembly = [&]() -> FormAssembly& {
    if (!assembly) assembly = assemble_form(disc, u, tol["eps_gap"], tol["delta_min"]);
    return *assembly;
  };

  for (const std::string& stage : pipelines) {
    if (stage == "gap") {
      try {
        const GapReport gap = detect_gap(u, tol["eps_gap"], tol["delta_min"]);
        out.report["gap"] = {{"w_dimension", gap.minus_one_modes.size()},
                             {"gap_angle", gap.gap_angle},
                             {"eps_gap", tol["eps_gap"]},
                             {"delta_min", tol["delta_min"]},
                             {"pass", true}};
      } catch (const NoVerifiedGap& e) {
        out.report["gap"] = {{"pass", false}, {"error", e.what()}};
        fail("gap");
      }
    } else if (stage == "cayley") {
      try {
        const GapReport gap = detect_gap(u, tol["eps_gap"], tol["delta_min"]);
        const PartialCayley a = partial_cayley(u, gap);
        const double herm = (a.matrix - a.matrix.adjoint()).cwiseAbs().maxCoeff();
        out.report["cayley"] = {{"bound", a.bound},
                                {"hermiticity_residual", checked(herm, 1e-12, herm < 1e-12)}};
        if (herm >= 1e-12) fail("cayley");
      } catch (const NoVerifiedGap& e) {
        out.report["cayley"] = {{"pass", false}, {"error", e.what()}};
        fail("cayley");
      }
    } else if (stage == "commute") {
      if (!boundary_rep) throw ScenarioError("pipeline commute: scenario has no group");
      const CommutantCheck cc = commutant_check(*boundary_rep, u, tol["commute"]);
      out.report["commutant_check"] =
          checked(cc.max_commutator, tol["commute"], cc.pass);
      if (!cc.pass) fail("commutant_check");
    } else if (stage == "spectrum") {
      FormAssembly& fa = need_assembly();
      spectrum = solve_spectrum(fa, spectrum_count);
      const double worst =
          spectrum->residuals.size() ? spectrum->residuals.maxCoeff() : 0.0;
      out.report["spectrum"] = {
          {"count", spectrum->eigenvalues.size()},
          {"eigenvalues", std::vector<double>(spectrum->eigenvalues.begin(),
                                              spectrum->eigenvalues.end())},
          {"lower_bound", fa.lower_bound()},
          {"max_residual", checked(worst, tol["residual"], worst <= tol["residual"])}};
      if (worst > tol["residual"]) fail("spectrum_residuals");
    } else if (stage == "invariance") {
      if (!bulk_rep) throw ScenarioError("pipeline invariance: scenario has no group");
      FormAssembly& fa = need_assembly();
      if (!spectrum) spectrum = solve_spectrum(fa, spectrum_count);
      const InvarianceReport rep = invariance_spectral_check(
          *spectrum, fa, *bulk_rep, tol["cluster_rel"], tol["invariance"]);
      out.report["invariance"] =
          checked(rep.max_residual, tol["invariance"], rep.pass);
      if (!rep.pass) fail("invariance");
    } else if (stage == "sectors") {
      if (!bulk_rep) throw ScenarioError("pipeline sectors: scenario has no group");
      FormAssembly& fa = need_assembly();
      const BulkSectors sectors = bulk_isotypic_sectors(*bulk_rep);
      const SectorSpectraResult sr = sector_spectra(fa, sectors, tol["sector_merge"]);
      out.report["sectors"] = {
          {"labels", sr.labels},
          {"merge_residual", checked(sr.merge_residual, tol["sector_merge"], sr.merge_ok)}};
      if (!sr.merge_ok) fail("sector_merge");
    } else {
      throw ScenarioError("unknown pipeline stage \"" + stage + "\"");
    }
  }

  out.report["exit_code"] = out.exit_code;

  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  write_text_file((fs::path(out_dir) / report_name).string(), out.report.dump(2) + "\n");
  if (spectrum && assembly)
    write_text_file((fs::path(out_dir) / csv_name).string(),
                    spectrum_csv(*spectrum, *assembly));
  return out;
}

std::string spectrum_csv(const SpectrumResult& result, const FormAssembly& assembly,
                         double cluster_rel_tol) {
  std::ostringstream os;
  os.precision(17);
  os << "index,eigenvalue,residual,sector,degeneracy\n";
  const int k = static_cast<int>(result.eigenvalues.size());

  // degeneracy = size of the relative cluster around each eigenvalue
  std::vector<int> degeneracy(k, 1);
  int start = 0;
  for (int i = 1; i <= k; ++i) {
    if (i == k || result.eigenvalues(i) - result.eigenvalues(i - 1) >
                      cluster_rel_tol * std::max(1.0, std::abs(result.eigenvalues(i)))) {
      for (int j = start; j < i; ++j) degeneracy[j] = i - start;
      start = i;
    }
  }

  for (int i = 0; i < k; ++i) {
    std::string sector = "all";
    if (assembly.mode_diagonal) {
      const int di = assembly.blocks[result.source_block[i]].disc_blocks.front();
      sector = "m=" + std::to_string(assembly.disc->blocks[di].mode);
    }
    os << i << ',' << result.eigenvalues(i) << ',' << result.residuals(i) << ',' << sector
       << ',' << degeneracy[i] << '\n';
  }
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ScenarioError("cannot write file: " + path);
  out << content;
}

}  // namespace saext
