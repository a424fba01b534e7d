#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "saext/forms.hpp"

using namespace saext;
namespace {
constexpr double kPi = std::numbers::pi;

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }
}  // namespace

TEST_CASE("interval Dirichlet spectrum (j pi)^2") {
  auto disc = discretize_interval(512);
  const auto u = make_phase_unitary(disc->boundary, kPi);
  const auto fa = assemble_form(disc, u);
  const auto res = solve_spectrum(fa, 5);
  for (int j = 1; j <= 5; ++j)
    CHECK(rel_err(res.eigenvalues(j - 1), (j * kPi) * (j * kPi)) < 1e-4);
  CHECK(res.residuals.maxCoeff() < 1e-8);
}

TEST_CASE("interval Neumann spectrum and lower bound") {
  auto disc = discretize_interval(512);
  const auto u = make_phase_unitary(disc->boundary, 0.0);
  const auto fa = assemble_form(disc, u);
  CHECK(fa.lower_bound() < 1e-9);
  const auto res = solve_spectrum(fa, 3);
  CHECK(std::abs(res.eigenvalues(0)) < 1e-8);
  CHECK(rel_err(res.eigenvalues(1), kPi * kPi) < 1e-4);
  CHECK(rel_err(res.eigenvalues(2), 4 * kPi * kPi) < 1e-4);
}

TEST_CASE("interval Robin spectrum against the transcendental oracle") {
  auto disc = discretize_interval(512);
  const auto u = make_phase_unitary(disc->boundary, 1.0);
  const auto fa = assemble_form(disc, u);
  const auto res = solve_spectrum(fa, 5);
  const auto oracle = robin_oracle_interval(1.0, 5);
  for (int j = 0; j < 5; ++j) CHECK(rel_err(res.eigenvalues(j), oracle[j]) < 1e-4);
}

TEST_CASE("negative Robin coefficient produces the oracle bound states") {
  auto disc = discretize_interval(512);
  const auto u = make_phase_unitary(disc->boundary, -2.0);
  const auto fa = assemble_form(disc, u);
  const auto res = solve_spectrum(fa, 4);
  const auto oracle = robin_oracle_interval(-2.0, 4);
  CHECK(oracle[0] < 0.0);  // at least one bound state for t = tan(-1)
  for (int j = 0; j < 4; ++j) CHECK(rel_err(res.eigenvalues(j), oracle[j]) < 1e-3);
  CHECK(fa.lower_bound() == doctest::Approx(-oracle[0]).epsilon(1e-3));
}

TEST_CASE("Robin oracle approaches the Neumann spectrum as beta -> 0+") {
  const auto lam = robin_oracle_interval(1e-6, 3);
  CHECK(std::abs(lam[0]) < 1e-5);
  CHECK(rel_err(lam[1], kPi * kPi) < 1e-5);
  CHECK(rel_err(lam[2], 4 * kPi * kPi) < 1e-5);
}

TEST_CASE("Galerkin O(h^2) refinement ratio") {
  const auto oracle = robin_oracle_interval(1.0, 1);
  double err[2];
  int n = 128;
  for (int r = 0; r < 2; ++r, n *= 2) {
    auto disc = discretize_interval(n);
    const auto fa = assemble_form(disc, make_phase_unitary(disc->boundary, 1.0));
    err[r] = std::abs(solve_spectrum(fa, 1).eigenvalues(0) - oracle[0]);
  }
  const double ratio = err[0] / err[1];
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.5);
}

TEST_CASE("semi-bound stability across refinement") {
  double bounds[2];
  int n = 128;
  for (int r = 0; r < 2; ++r, n *= 2) {
    auto disc = discretize_interval(n);
    const auto fa = assemble_form(disc, make_phase_unitary(disc->boundary, -2.0));
    bounds[r] = fa.lower_bound();
  }
  CHECK(std::abs(bounds[0] - bounds[1]) < 0.05 * std::abs(bounds[1]));
}

TEST_CASE("quasi-periodic interval spectrum and constraint consistency") {
  for (double alpha : {0.0, 1.0, kPi / 4.0}) {
    auto disc = discretize_cylinder(256, 0);
    const auto u = make_quasiperiodic_unitary(disc->boundary, alpha);
    const auto fa = assemble_form(disc, u);
    const auto res = solve_spectrum(fa, 4);
    const auto oracle = quasiperiodic_oracle_interval(alpha, 4);
    for (int j = 0; j < 4; ++j) CHECK(rel_err(res.eigenvalues(j), oracle[j]) < 1e-3);

    // every constraint-space vector satisfies gamma_1 = e^{i alpha} gamma_2
    const auto& blk = fa.blocks.front();
    const Eigen::MatrixXcd bd(blk.b);
    const Eigen::MatrixXcd traced = Eigen::MatrixXcd(blk.trace) * bd;
    for (int c = 0; c < traced.cols(); ++c)
      CHECK(std::abs(traced(0, c) - std::polar(1.0, alpha) * traced(1, c)) < 1e-10);
  }
}

TEST_CASE("quasi-periodic oracle values") {
  const auto lam = quasiperiodic_oracle_interval(0.0, 3);
  CHECK(lam[0] == doctest::Approx(0.0));
  CHECK(lam[1] == doctest::Approx(kPi * kPi));
  CHECK(lam[2] == doctest::Approx(kPi * kPi));
}

TEST_CASE("hemisphere Legendre oracle values") {
  const auto d = legendre_oracle_hemisphere(HemisphereBC::Dirichlet, 4, 4);
  CHECK(d == std::vector<double>{2, 6, 6, 12});
  const auto nn = legendre_oracle_hemisphere(HemisphereBC::Neumann, 4, 4);
  CHECK(nn == std::vector<double>{0, 2, 2, 6});
}

TEST_CASE("hemisphere Dirichlet and Neumann spectra match the oracle") {
  auto disc = discretize_hemisphere(128, 2);
  {
    const auto fa = assemble_form(disc, make_phase_unitary(disc->boundary, kPi));
    const auto res = solve_spectrum(fa, 6);
    const auto oracle = legendre_oracle_hemisphere(HemisphereBC::Dirichlet, 2, 6);
    for (int j = 0; j < 6; ++j) CHECK(rel_err(res.eigenvalues(j), oracle[j]) < 5e-3);
  }
  {
    const auto fa = assemble_form(disc, make_phase_unitary(disc->boundary, 0.0));
    const auto res = solve_spectrum(fa, 6);
    const auto oracle = legendre_oracle_hemisphere(HemisphereBC::Neumann, 2, 6);
    for (int j = 0; j < 6; ++j) CHECK(rel_err(res.eigenvalues(j), oracle[j]) < 5e-3);
  }
}

TEST_CASE("full_spectrum size equals the reduced dimension") {
  auto disc = discretize_cylinder(16, 1);
  const auto fa = assemble_form(disc, make_two_phase_unitary(disc->boundary, 0.5, 0.5));
  int ndr = 0;
  for (const auto& blk : fa.blocks) ndr += blk.ndr;
  CHECK(full_spectrum(fa).size() == ndr);
}

TEST_CASE("assemble_form rejects mismatched boundary spaces") {
  auto disc = discretize_cylinder(16, 2);
  const auto u = make_phase_unitary(build_boundary_space(3, 2), 1.0);
  CHECK_THROWS_AS(assemble_form(disc, u), std::invalid_argument);
}

TEST_CASE("robin oracle rejects beta at pi") {
  CHECK_THROWS_AS(robin_oracle_interval(kPi, 3), std::invalid_argument);
}
