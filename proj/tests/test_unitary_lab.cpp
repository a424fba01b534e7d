#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>

#include "saext/linalg.hpp"
#include "saext/unitary_lab.hpp"

using namespace saext;
namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("constant phase unitary: A_U is the Robin coefficient -tan(beta/2)") {
  const auto space = build_boundary_space(3, 2);
  for (double beta : {-2.5, -1.5, -0.5, 0.1, 0.5, 1.5, 2.5}) {
    const auto u = make_phase_unitary(space, beta);
    CHECK(u.unitarity_residual() < 1e-14);
    const auto gap = detect_gap(u);
    CHECK(gap.minus_one_modes.empty());
    const auto a = partial_cayley(u, gap);
    const Eigen::MatrixXcd expected =
        -std::tan(beta / 2.0) * Eigen::MatrixXcd::Identity(space.dimension(), space.dimension());
    CHECK((a.matrix - expected).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(a.bound == doctest::Approx(std::abs(std::tan(beta / 2.0))).epsilon(1e-10));
  }
}

TEST_CASE("scalar Cayley map identity") {
  for (double beta : {0.3, -1.2, 2.8}) {
    const Complex lam = std::polar(1.0, beta);
    const Complex mapped = cayley_eigenvalue_map(lam);
    CHECK(std::abs(mapped - Complex(-std::tan(beta / 2.0))) < 1e-14);
  }
}

TEST_CASE("step phase unitary is exactly unitary and gapped away from pi") {
  const auto space = build_boundary_space(8, 1);
  auto beta = [](double theta) { return theta < kPi ? 0.5 : 2.0; };
  const auto u = make_phase_unitary(space, beta);
  CHECK(u.unitarity_residual() < 1e-10);
  const auto gap = detect_gap(u);
  CHECK(gap.minus_one_modes.empty());
  CHECK(gap.gap_angle > 1e-3);
  const auto a = partial_cayley(u, gap);
  CHECK((a.matrix - a.matrix.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("dirichlet unitary: W is the whole space") {
  const auto space = build_boundary_space(2, 2);
  const auto u = make_phase_unitary(space, kPi);
  const auto gap = detect_gap(u);
  CHECK(static_cast<int>(gap.minus_one_modes.size()) == space.dimension());
  CHECK(gap.gap_angle == doctest::Approx(kPi));
  const auto a = partial_cayley(u, gap);
  CHECK(a.matrix.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("eigenvalue inside the ambiguity annulus fails loudly") {
  const auto space = build_boundary_space(1, 1);
  const auto u = make_phase_unitary(space, kPi - 1e-5);
  CHECK_THROWS_AS(detect_gap(u), NoVerifiedGap);
}

TEST_CASE("quasi-periodic unitary: W has one mode per Fourier mode, A_U = 0") {
  const auto space = build_boundary_space(3, 2);
  for (double alpha : {0.0, 0.7, kPi}) {
    const auto u = make_quasiperiodic_unitary(space, alpha);
    CHECK(u.unitarity_residual() < 1e-14);
    const auto gap = detect_gap(u);
    CHECK(static_cast<int>(gap.minus_one_modes.size()) == space.modes_per_component());
    CHECK(gap.gap_angle == doctest::Approx(kPi));
    const auto a = partial_cayley(u, gap);
    CHECK(a.matrix.cwiseAbs().maxCoeff() < 1e-12);
    // W eigenvectors encode the constraint gamma_1 = e^{i alpha} gamma_2
    for (int idx : gap.minus_one_modes) {
      const Eigen::VectorXcd w = gap.eigenvectors.col(idx);
      const int m = space.modes_per_component();
      for (int i = 0; i < m; ++i)
        CHECK(std::abs(w(i) + std::polar(1.0, alpha) * w(m + i)) < 1e-12);
    }
  }
}

TEST_CASE("partial_cayley spectral route agrees with a random unitary") {
  std::mt19937_64 rng(3);
  const auto space = build_boundary_space(2, 1);
  // keep eigenvalues away from -1 by squashing phases into (-pi/2, pi/2)
  const Eigen::MatrixXcd q = linalg::random_unitary(space.dimension(), rng);
  Eigen::VectorXcd d(space.dimension());
  std::uniform_real_distribution<double> ph(-1.5, 1.5);
  for (int i = 0; i < d.size(); ++i) d(i) = std::polar(1.0, ph(rng));
  const Eigen::MatrixXcd m = q * d.asDiagonal() * q.adjoint();
  const auto u = make_matrix_unitary(space, m, "random");
  const auto gap = detect_gap(u);
  const auto a = partial_cayley(u, gap);
  CHECK((a.matrix - a.matrix.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  // functional-calculus oracle on the same eigenbasis
  Eigen::VectorXcd mapped(d.size());
  for (int i = 0; i < d.size(); ++i) mapped(i) = cayley_eigenvalue_map(d(i));
  const Eigen::MatrixXcd oracle = q * mapped.asDiagonal() * q.adjoint();
  CHECK((a.matrix - oracle).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("make_matrix_unitary rejects non-unitary input") {
  const auto space = build_boundary_space(1, 1);
  CHECK_THROWS_AS(
      make_matrix_unitary(space, 1.5 * Eigen::MatrixXcd::Identity(3, 3), "bad"),
      std::invalid_argument);
}

TEST_CASE("admissibility: constant phase plateaus, needs three cutoffs") {
  auto make = [](int cutoff) {
    return make_phase_unitary(build_boundary_space(cutoff, 1), 1.0);
  };
  const auto rep = admissibility_estimate(make, {2, 4, 8, 16});
  CHECK(rep.verdict == "bounded");
  for (double k : rep.k_n) CHECK(k == doctest::Approx(std::tan(0.5)).epsilon(1e-8));
  CHECK_THROWS_AS(admissibility_estimate(make, {2, 4}), std::invalid_argument);
}

TEST_CASE("admissibility: step phase is reported, not adjudicated") {
  auto make = [](int cutoff) {
    return make_phase_unitary(build_boundary_space(cutoff, 1),
                              [](double theta) { return theta < kPi ? 0.5 : 2.0; });
  };
  const auto rep = admissibility_estimate(make, {4, 8, 16, 32});
  CHECK(rep.k_n.size() == 4);
  CHECK((rep.verdict == "bounded" || rep.verdict == "inconclusive/growing"));
}
