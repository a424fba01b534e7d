#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "saext/forms.hpp"
#include "saext/invariance.hpp"

namespace saext {

/// Configuration / usage problem: maps to CLI exit code 1.
struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ScenarioOutcome {
  int exit_code = 0;  // 0 all checks passed, 2 a mathematical check failed
  std::string failed_stage;
  nlohmann::json report;
};

struct ScenarioOverrides {
  std::optional<long> seed;
  std::optional<int> modes;
  std::optional<int> cells;
  std::map<std::string, double> tolerances;
};

/// Parses + schema-validates a scenario file ("saext/1", unknown fields
/// rejected). Throws ScenarioError on any problem.
nlohmann::json load_scenario_file(const std::string& path);

/// Runs the requested pipelines; writes the JSON report and CSV spectra under
/// out_dir (paths from the scenario's "output" section, with defaults).
ScenarioOutcome run_scenario(const nlohmann::json& scenario, const std::string& out_dir,
                             const ScenarioOverrides& overrides = {});

/// "phase:beta=1.0", "two_phase:beta1=1.0,beta2=2.0", "quasiperiodic:alpha=0.7",
/// "fourier_diagonal:betas=0.1;0.2;...", "neumann", "dirichlet".
BoundaryUnitary parse_unitary_spec(const std::string& spec,
                                   const TruncatedBoundarySpace& space);

/// CSV with columns index,eigenvalue,residual,sector,degeneracy.
std::string spectrum_csv(const SpectrumResult& result, const FormAssembly& assembly,
                         double cluster_rel_tol = 1e-7);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace saext
