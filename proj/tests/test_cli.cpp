#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  const fs::path log = fs::temp_directory_path() / "saext_cli_test.log";
  const std::string cmd =
      std::string(SAEXT_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int raw = std::system(cmd.c_str());
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  int code = -1;
  if (raw != -1) code = WEXITSTATUS(raw);
  return {code, ss.str()};
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scenario(const std::string& name) {
  return fs::path(SAEXT_SCENARIO_DIR) / name;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("symmetric cylinder scenario passes end to end") {
  const fs::path out = fresh_dir("saext_sym");
  const auto r = run_cli("run --config " + scenario("cylinder_z2_robin_symmetric.json").string() +
                         " --out " + out.string());
  CHECK(r.exit_code == 0);

  const auto report = nlohmann::json::parse(read_file(out / "report.json"));
  CHECK(report["schema"] == "saext/1");
  CHECK(report["exit_code"] == 0);
  CHECK(report["commutant_check"]["pass"] == true);
  CHECK(report["commutant_check"]["value"].get<double>() < 1e-12);
  CHECK(report["invariance"]["pass"] == true);
  CHECK(report["sectors"]["merge_residual"]["pass"] == true);

  const std::string csv = read_file(out / "spectrum.csv");
  CHECK(csv.rfind("index,eigenvalue,residual,sector,degeneracy\n", 0) == 0);
  CHECK(csv.find("m=0") != std::string::npos);
}

TEST_CASE("asymmetric cylinder scenario fails at commutant_check with exit 2") {
  const fs::path out = fresh_dir("saext_asym");
  const auto r =
      run_cli("run --config " + scenario("cylinder_z2_robin_asymmetric.json").string() +
              " --out " + out.string());
  CHECK(r.exit_code == 2);
  const auto report = nlohmann::json::parse(read_file(out / "report.json"));
  CHECK(report["failed_stage"] == "commutant_check");
  CHECK(report["commutant_check"]["pass"] == false);
}

TEST_CASE("reports are byte-identical across reruns") {
  const fs::path out1 = fresh_dir("saext_det1");
  const fs::path out2 = fresh_dir("saext_det2");
  const std::string cfg = scenario("interval_robin.json").string();
  CHECK(run_cli("run --config " + cfg + " --out " + out1.string()).exit_code == 0);
  CHECK(run_cli("run --config " + cfg + " --out " + out2.string()).exit_code == 0);
  CHECK(read_file(out1 / "report.json") == read_file(out2 / "report.json"));
  CHECK(read_file(out1 / "spectrum.csv") == read_file(out2 / "spectrum.csv"));
}

TEST_CASE("malformed scenario exits 1 with a schema message") {
  const fs::path out = fresh_dir("saext_bad");
  const fs::path cfg = out / "bad.json";
  std::ofstream(cfg) << R"({"schema":"saext/1","geometry":{"kind":"interval"},)"
                     << R"("unitary":{"kind":"phase","beta":1.0},"surprise":42})";
  const auto r = run_cli("run --config " + cfg.string() + " --out " + out.string());
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("surprise") != std::string::npos);

  CHECK(run_cli("run --config /nonexistent.json").exit_code == 1);
}

TEST_CASE("cayley subcommand prints the Robin diagonal") {
  const auto r = run_cli("cayley --unitary phase:beta=1.0 --modes 2 --components 1");
  CHECK(r.exit_code == 0);
  // all diagonal entries equal -tan(0.5)
  CHECK(r.output.find("-0.546302") != std::string::npos);
}

TEST_CASE("gap subcommand on the quasi-periodic unitary") {
  const auto r = run_cli("gap --unitary quasiperiodic:alpha=0.7 --modes 4");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("w_dimension=9") != std::string::npos);
  CHECK(r.output.find("gap_angle=3.14159") != std::string::npos);
}

TEST_CASE("commute subcommand dichotomy") {
  CHECK(run_cli("commute --unitary two_phase:beta1=1.0,beta2=1.0 --group z2 --modes 2")
            .exit_code == 0);
  CHECK(run_cli("commute --unitary two_phase:beta1=1.0,beta2=2.0 --group z2 --modes 2")
            .exit_code == 2);
}

TEST_CASE("reduce subcommand prints block scalars") {
  const auto r = run_cli("reduce --rep z2_blocks");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("scalar[0]=") != std::string::npos);
  CHECK(r.output.find("scalar[1]=") != std::string::npos);
  CHECK(run_cli("reduce --rep unknown").exit_code == 1);
}

TEST_CASE("vonneumann subcommand passes its desk-scale checks") {
  const auto r = run_cli("vonneumann --count 6");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("deficiency_indices=(2,2)") != std::string::npos);
}
