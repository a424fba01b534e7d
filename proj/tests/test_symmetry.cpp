#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "saext/linalg.hpp"
#include "saext/symmetry.hpp"

using namespace saext;
namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("group models validate their laws") {
  const auto z2 = GroupModel::z2();
  CHECK(z2.size() == 2);
  CHECK(z2.identity == 0);
  CHECK(z2.inverses[1] == 1);

  const auto s3 = GroupModel::s3();
  CHECK(s3.size() == 6);
  // r * r^2 = e, s * s = e
  CHECK(s3.table(1, 2) == s3.identity);
  CHECK(s3.table(3, 3) == s3.identity);

  Eigen::MatrixXi bad(2, 2);
  bad << 0, 1, 1, 1;  // not a group
  CHECK_THROWS_AS(GroupModel::finite(bad), std::invalid_argument);
}

TEST_CASE("sampled circle requires 0 and negation closure") {
  const auto c = GroupModel::sampled_circle(8);
  CHECK(c.size() == 8);
  CHECK_THROWS_AS(GroupModel::sampled_circle({0.3, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS(GroupModel::sampled_circle(3), std::invalid_argument);
}

TEST_CASE("so2 boundary rep is a valid homomorphism") {
  const auto space = build_boundary_space(3, 1);
  const auto rep = so2_boundary_rep(space, GroupModel::sampled_circle(8));
  CHECK(rep.validation_residual() < 1e-12);
}

TEST_CASE("z2 cylinder rep: trace compatibility and mass unitarity") {
  auto disc = discretize_cylinder(16, 2);
  auto [bulk, bdry] = z2_cylinder_rep(disc, disc->boundary);
  CHECK(bdry.validation_residual() < 1e-14);
  CHECK(trace_compatibility_residual(bulk, bdry) < 1e-14);
  CHECK(bulk.mass_unitarity_residual() < 1e-12);
  CHECK_THROWS_AS(z2_cylinder_rep(discretize_interval(16), TruncatedBoundarySpace{0, 2}),
                  std::invalid_argument);
}

TEST_CASE("so2 bulk rep traces to the so2 boundary rep") {
  auto disc = discretize_hemisphere(32, 3);
  const auto circle = GroupModel::sampled_circle(8);
  const auto bulk = so2_bulk_rep(disc, circle);
  const auto bdry = so2_boundary_rep(disc->boundary, circle);
  CHECK(trace_compatibility_residual(bulk, bdry) < 1e-12);
  CHECK(bulk.mass_unitarity_residual() < 1e-12);
}

TEST_CASE("commutant dichotomy for the two-phase cylinder unitary") {
  auto disc = discretize_cylinder(16, 2);
  auto [bulk, bdry] = z2_cylinder_rep(disc, disc->boundary);

  const auto sym = make_two_phase_unitary(disc->boundary, 1.0, 1.0);
  const auto cc_sym = commutant_check(bdry, sym);
  CHECK(cc_sym.pass);
  CHECK(cc_sym.max_commutator < 1e-12);

  const auto asym = make_two_phase_unitary(disc->boundary, 1.0, 2.0);
  const auto cc_asym = commutant_check(bdry, asym);
  CHECK_FALSE(cc_asym.pass);
  const double expected = std::abs(std::polar(1.0, 1.0) - std::polar(1.0, 2.0));
  CHECK(cc_asym.max_commutator == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("quasi-periodic z2 commutation iff sin(alpha) = 0") {
  auto disc = discretize_cylinder(16, 2);
  auto [bulk, bdry] = z2_cylinder_rep(disc, disc->boundary);
  for (double alpha : {0.0, kPi, kPi / 4.0, 1.0}) {
    const auto u = make_quasiperiodic_unitary(disc->boundary, alpha);
    const auto cc = commutant_check(bdry, u);
    CHECK(cc.pass == (std::abs(std::sin(alpha)) < 1e-12));
  }
}

TEST_CASE("block structure of commuting reps relative to W") {
  auto disc = discretize_cylinder(16, 2);
  auto [bulk, bdry] = z2_cylinder_rep(disc, disc->boundary);
  const auto u = make_quasiperiodic_unitary(disc->boundary, 0.0);
  const auto gap = detect_gap(u);
  const auto rep = block_structure_check(bdry, gap);
  CHECK(rep.max_residual < 1e-10);
}

TEST_CASE("isotypic decomposition of the z2 swap rep") {
  const auto space = build_boundary_space(2, 2);
  auto disc = discretize_cylinder(16, 2);
  auto [bulk, bdry] = z2_cylinder_rep(disc, space);
  const auto iso = isotypic_decompose(bdry);
  // 5 copies of (trivial + sign): commutant is End(C^5) + End(C^5)
  CHECK(iso.commutant_dimension == 50);
  REQUIRE(iso.projections.size() == 2);
  Eigen::MatrixXcd sum = iso.projections[0] + iso.projections[1];
  CHECK((sum - Eigen::MatrixXcd::Identity(10, 10)).cwiseAbs().maxCoeff() < 1e-10);
  for (const auto& p : iso.projections) {
    CHECK((p * p - p).cwiseAbs().maxCoeff() < 1e-10);
    for (const auto& v : bdry.matrices)
      CHECK((p * v - v * p).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("isotypic decomposition of the so2 rep is the mode decomposition") {
  const auto space = build_boundary_space(2, 1);
  const auto rep = so2_boundary_rep(space, GroupModel::sampled_circle(8));
  const auto iso = isotypic_decompose(rep);
  CHECK(iso.commutant_dimension == 5);
  CHECK(iso.projections.size() == 5);
}

TEST_CASE("joint eigenspaces split a commuting unitary family") {
  std::mt19937_64 rng(11);
  const Eigen::MatrixXcd q = linalg::random_unitary(6, rng);
  Eigen::VectorXcd d1(6), d2(6);
  d1 << 1, 1, 1, -1, -1, Complex(0, 1);
  d2 << 1, -1, -1, 1, 1, 1;
  const Eigen::MatrixXcd a = q * d1.asDiagonal() * q.adjoint();
  const Eigen::MatrixXcd b = q * d2.asDiagonal() * q.adjoint();
  const auto clusters = linalg::joint_eigenspaces({a, b});
  CHECK(clusters.size() == 4);  // (1,1), (1,-1), (-1,1), (i,1)
  int total = 0;
  for (const auto& c : clusters) {
    total += static_cast<int>(c.basis.cols());
    const Eigen::MatrixXcd ortho =
        c.basis.adjoint() * c.basis -
        Eigen::MatrixXcd::Identity(c.basis.cols(), c.basis.cols());
    CHECK(ortho.cwiseAbs().maxCoeff() < 1e-10);
  }
  CHECK(total == 6);
}
