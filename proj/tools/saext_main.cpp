#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "saext/scenario.hpp"
#include "saext/symmetry.hpp"
#include "saext/vn.hpp"

namespace {

using namespace saext;

std::map<std::string, double> parse_tols(const std::vector<std::string>& raw) {
  std::map<std::string, double> out;
  for (const auto& item : raw) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw ScenarioError("--tol expects NAME=VALUE, got \"" + item + "\"");
    out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
  }
  return out;
}

TruncatedBoundarySpace space_for(int modes, int components) {
  if (modes == 0) return TruncatedBoundarySpace{0, components};
  return build_boundary_space(modes, components);
}

int cmd_gap(const std::string& spec, int modes, int components,
            const std::map<std::string, double>& tol) {
  const auto space = space_for(modes, components);
  const BoundaryUnitary u = parse_unitary_spec(spec, space);
  const double eps = tol.count("eps_gap") ? tol.at("eps_gap") : 1e-8;
  const double dmin = tol.count("delta_min") ? tol.at("delta_min") : 1e-3;
  try {
    const GapReport gap = detect_gap(u, eps, dmin);
    std::cout << "stage=gap pass=1 w_dimension=" << gap.minus_one_modes.size()
              << " gap_angle=" << gap.gap_angle << " eps_gap=" << eps
              << " delta_min=" << dmin << "\n";
    return 0;
  } catch (const NoVerifiedGap& e) {
    std::cout << "stage=gap pass=0 error=\"" << e.what() << "\"\n";
    return 2;
  }
}

int cmd_cayley(const std::string& spec, int modes, int components) {
  const auto space = space_for(modes, components);
  const BoundaryUnitary u = parse_unitary_spec(spec, space);
  try {
    const GapReport gap = detect_gap(u);
    const PartialCayley a = partial_cayley(u, gap);
    std::cout << "stage=cayley bound=" << a.bound << " diagonal=";
    std::cout.precision(17);
    for (int i = 0; i < a.matrix.rows(); ++i)
      std::cout << (i ? "," : "") << std::real(a.matrix(i, i));
    std::cout << "\n";
    return 0;
  } catch (const NoVerifiedGap& e) {
    std::cout << "stage=cayley pass=0 error=\"" << e.what() << "\"\n";
    return 2;
  }
}

int cmd_admissible(const std::string& spec, const std::vector<int>& cutoffs, int components,
                   double s) {
  auto make = [&](int cutoff) {
    return parse_unitary_spec(spec, space_for(cutoff, components));
  };
  const AdmissibilityReport rep = admissibility_estimate(make, cutoffs, s);
  std::cout << "stage=admissible s=" << s << " verdict=" << rep.verdict << "\n";
  for (size_t i = 0; i < rep.cutoffs.size(); ++i)
    std::cout << "  cutoff=" << rep.cutoffs[i] << " k_n=" << rep.k_n[i] << "\n";
  return 0;
}

int cmd_commute(const std::string& spec, const std::string& group, int modes, int components,
                int samples, const std::map<std::string, double>& tol) {
  const auto space = space_for(modes, components);
  const BoundaryUnitary u = parse_unitary_spec(spec, space);
  BoundaryRep rep;
  if (group == "z2") {
    if (components != 2) throw ScenarioError("commute: z2 needs a two-circle boundary");
    auto disc = discretize_cylinder(8, modes);
    rep = z2_cylinder_rep(disc, space).second;
  } else if (group == "so2") {
    rep = so2_boundary_rep(space, GroupModel::sampled_circle(samples));
  } else {
    throw ScenarioError("commute: unknown group \"" + group + "\"");
  }
  const double t = tol.count("commute") ? tol.at("commute") : 1e-10;
  const CommutantCheck cc = commutant_check(rep, u, t);
  std::cout << "stage=commutant_check pass=" << (cc.pass ? 1 : 0)
            << " max_commutator=" << cc.max_commutator << " tolerance=" << t << "\n";
  return cc.pass ? 0 : 2;
}

std::shared_ptr<BulkDiscretization> make_disc(const std::string& geometry, int cells,
                                              int modes) {
  if (geometry == "interval") return discretize_interval(cells);
  if (geometry == "cylinder") return discretize_cylinder(cells, modes);
  if (geometry == "hemisphere") return discretize_hemisphere(cells, modes);
  throw ScenarioError("unknown geometry \"" + geometry + "\"");
}

int cmd_spectrum(const std::string& geometry, int cells, int modes, const std::string& spec,
                 int count, const std::string& out_dir) {
  auto disc = make_disc(geometry, cells, modes);
  const BoundaryUnitary u = parse_unitary_spec(spec, disc->boundary);
  const FormAssembly fa = assemble_form(disc, u);
  const SpectrumResult res = solve_spectrum(fa, count);
  std::cout.precision(17);
  std::cout << "stage=spectrum count=" << res.eigenvalues.size()
            << " lower_bound=" << fa.lower_bound() << "\n";
  for (int i = 0; i < res.eigenvalues.size(); ++i)
    std::cout << "  " << i << " " << res.eigenvalues(i) << " residual=" << res.residuals(i)
              << "\n";
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_text_file(out_dir + "/spectrum.csv", spectrum_csv(res, fa));
  }
  return 0;
}

int cmd_invariance(const std::string& geometry, int cells, int modes, const std::string& spec,
                   const std::string& group, int samples, int count,
                   const std::map<std::string, double>& tol) {
  auto disc = make_disc(geometry, cells, modes);
  const BoundaryUnitary u = parse_unitary_spec(spec, disc->boundary);
  BulkRep bulk;
  if (group == "z2")
    bulk = z2_cylinder_rep(disc, disc->boundary).first;
  else if (group == "so2")
    bulk = so2_bulk_rep(disc, GroupModel::sampled_circle(samples));
  else
    throw ScenarioError("invariance: unknown group \"" + group + "\"");
  const FormAssembly fa = assemble_form(disc, u);
  const SpectrumResult res = solve_spectrum(fa, count);
  const double t = tol.count("invariance") ? tol.at("invariance") : 1e-7;
  const InvarianceReport rep = invariance_spectral_check(res, fa, bulk, 1e-7, t);
  std::cout << "stage=invariance pass=" << (rep.pass ? 1 : 0)
            << " max_residual=" << rep.max_residual << " tolerance=" << t
            << " clusters=" << rep.clusters.size() << "\n";
  return rep.pass ? 0 : 2;
}

int cmd_vonneumann(long seed, int count) {
  std::mt19937_64 rng(static_cast<unsigned long>(seed));
  const auto model = vn::deficiency_basis();
  const auto [np, nm] = model.deficiency_indices();
  std::cout << "stage=vonneumann deficiency_indices=(" << np << "," << nm << ")\n";
  const vn::DeficiencyRep rep = vn::reflection_on_deficiency(model);
  double worst = 0.0;
  int agree = 0;
  for (int i = 0; i < count; ++i) {
    const vn::ExtensionUnitary k = vn::random_extension_unitary(rng);
    const auto samples = vn::extension_domain_sample(model, k, 4, rng);
    worst = std::max(worst, vn::selfadjointness_residual(samples));
    const bool inv = vn::k_invariance_check(k, rep).pass;
    const bool transported =
        vn::transported_domain_residual(model, k, 4, rng) < 1e-9;
    if (inv == transported) ++agree;
  }
  std::cout << "  lagrange_residual=" << worst << " tolerance=1e-09\n";
  std::cout << "  invariance_agreement=" << agree << "/" << count << "\n";
  const bool pass = worst < 1e-9 && agree == count;
  std::cout << "  pass=" << (pass ? 1 : 0) << "\n";
  return pass ? 0 : 2;
}

int cmd_reduce(const std::string& rep_name, long seed) {
  vn::IrrepBlockSpec spec;
  if (rep_name == "z2_blocks")
    spec = vn::z2_blocks();
  else if (rep_name == "s3_blocks")
    spec = vn::s3_blocks();
  else if (rep_name == "equivalent_pair")
    spec = vn::equivalent_pair_blocks();
  else
    throw ScenarioError("reduce: unknown rep \"" + rep_name + "\"");

  std::mt19937_64 rng(static_cast<unsigned long>(seed));
  const Eigen::MatrixXcd t =
      vn::commutant_average(spec, linalg::random_hermitian(spec.total_dim(), rng));
  const vn::ReductionReport rep = vn::reduction_block_test(spec, t);
  std::cout.precision(17);
  std::cout << "stage=reduce blocks=" << spec.blocks.size()
            << " off_scalar_deviation=" << rep.off_scalar_deviation << "\n";
  for (size_t i = 0; i < rep.block_scalars.size(); ++i)
    std::cout << "  scalar[" << i << "]=" << std::real(rep.block_scalars[i]) << "\n";
  if (rep.has_doubled_class)
    std::cout << "  doubled_class coefficient_matrix=[[" << rep.coefficient_matrix(0, 0)
              << "," << rep.coefficient_matrix(0, 1) << "],[" << rep.coefficient_matrix(1, 0)
              << "," << rep.coefficient_matrix(1, 1) << "]]\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"self-adjoint extension laboratory"};
  app.require_subcommand(1);

  std::string unitary_spec, group = "z2", geometry = "interval", config, out_dir, rep_name;
  int modes = 4, components = 2, cells = 64, count = 10, samples = 16;
  long seed = 1;
  double s = 0.5;
  std::vector<int> cutoffs = {4, 8, 16, 32};
  std::vector<std::string> tol_raw;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--tol", tol_raw, "tolerance override NAME=VALUE")->take_all();
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--out", out_dir, "output directory");
  };

  auto* c_gap = app.add_subcommand("gap", "spectral gap of a boundary unitary at -1");
  c_gap->add_option("--unitary", unitary_spec)->required();
  c_gap->add_option("--modes", modes);
  c_gap->add_option("--components", components);
  add_common(c_gap);

  auto* c_cayley = app.add_subcommand("cayley", "partial Cayley transform A_U");
  c_cayley->add_option("--unitary", unitary_spec)->required();
  c_cayley->add_option("--modes", modes);
  c_cayley->add_option("--components", components);
  add_common(c_cayley);

  auto* c_adm = app.add_subcommand("admissible", "H^s boundedness estimate of A_U");
  c_adm->add_option("--unitary", unitary_spec)->required();
  c_adm->add_option("--cutoffs", cutoffs);
  c_adm->add_option("--components", components);
  c_adm->add_option("--s", s);
  add_common(c_adm);

  auto* c_comm = app.add_subcommand("commute", "commutation of U with a boundary rep");
  c_comm->add_option("--unitary", unitary_spec)->required();
  c_comm->add_option("--group", group);
  c_comm->add_option("--modes", modes);
  c_comm->add_option("--components", components);
  c_comm->add_option("--samples", samples);
  add_common(c_comm);

  auto* c_spec = app.add_subcommand("spectrum", "spectrum of the assembled form");
  c_spec->add_option("--geometry", geometry);
  c_spec->add_option("--cells", cells);
  c_spec->add_option("--modes", modes);
  c_spec->add_option("--unitary", unitary_spec)->required();
  c_spec->add_option("--count", count);
  add_common(c_spec);

  auto* c_inv = app.add_subcommand("invariance", "spectral G-invariance check");
  c_inv->add_option("--geometry", geometry);
  c_inv->add_option("--cells", cells);
  c_inv->add_option("--modes", modes);
  c_inv->add_option("--unitary", unitary_spec)->required();
  c_inv->add_option("--group", group);
  c_inv->add_option("--samples", samples);
  c_inv->add_option("--count", count);
  add_common(c_inv);

  auto* c_vn = app.add_subcommand("vonneumann", "desk-scale von Neumann checks");
  c_vn->add_option("--count", count);
  add_common(c_vn);

  auto* c_red = app.add_subcommand("reduce", "reduction of a commuting Hermitian matrix");
  c_red->add_option("--rep", rep_name)->required();
  add_common(c_red);

  auto* c_run = app.add_subcommand("run", "run a scenario file");
  c_run->add_option("--config", config)->required();
  c_run->add_option("--modes", modes);
  c_run->add_option("--cells", cells);
  bool modes_set = false, cells_set = false;
  add_common(c_run);

  CLI11_PARSE(app, argc, argv);
  modes_set = c_run->count("--modes") > 0;
  cells_set = c_run->count("--cells") > 0;

  try {
    const auto tol = parse_tols(tol_raw);
    if (*c_gap) return cmd_gap(unitary_spec, modes, components, tol);
    if (*c_cayley) return cmd_cayley(unitary_spec, modes, components);
    if (*c_adm) return cmd_admissible(unitary_spec, cutoffs, components, s);
    if (*c_comm) return cmd_commute(unitary_spec, group, modes, components, samples, tol);
    if (*c_spec) return cmd_spectrum(geometry, cells, modes, unitary_spec, count, out_dir);
    if (*c_inv)
      return cmd_invariance(geometry, cells, modes, unitary_spec, group, samples, count, tol);
    if (*c_vn) return cmd_vonneumann(seed, count == 10 ? 20 : count);
    if (*c_red) return cmd_reduce(rep_name, seed);
    if (*c_run) {
      ScenarioOverrides ov;
      if (c_run->count("--seed")) ov.seed = seed;
      if (modes_set) ov.modes = modes;
      if (cells_set) ov.cells = cells;
      ov.tolerances = tol;
      const nlohmann::json scenario = load_scenario_file(config);
      const ScenarioOutcome outcome =
          run_scenario(scenario, out_dir.empty() ? "." : out_dir, ov);
      if (outcome.exit_code != 0)
        std::cout << "failed_stage=" << outcome.failed_stage << "\n";
      else
        std::cout << "all checks passed\n";
      return outcome.exit_code;
    }
  } catch (const ScenarioError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const NoVerifiedGap& e) {
    std::cerr << "math check failed: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
