#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "saext/boundary_space.hpp"
#include "saext/linalg.hpp"

using namespace saext;

TEST_CASE("indexing round-trips over components and modes") {
  const auto space = build_boundary_space(3, 2);
  CHECK(space.dimension() == 14);
  CHECK(space.modes_per_component() == 7);
  for (int c = 0; c < 2; ++c)
    for (int n = -3; n <= 3; ++n) {
      const int i = space.index_of(c, n);
      CHECK(space.component_of(i) == c);
      CHECK(space.mode_of(i) == n);
    }
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(build_boundary_space(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(build_boundary_space(2, 3), std::invalid_argument);
  CHECK_THROWS_AS(build_boundary_space(2, 0), std::invalid_argument);
}

TEST_CASE("sobolev weights and norms") {
  const auto space = build_boundary_space(2, 1);
  const Eigen::VectorXd w = sobolev_weights(space, 0.5);
  CHECK(w(space.index_of(0, 0)) == doctest::Approx(1.0));
  CHECK(w(space.index_of(0, 2)) == doctest::Approx(std::sqrt(5.0)));
  CHECK(w(space.index_of(0, -2)) == doctest::Approx(std::sqrt(5.0)));

  // s = 0 reduces to the plain l2 norm
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(space.dimension());
  v(space.index_of(0, 1)) = Complex(3.0, 4.0);
  CHECK(sobolev_norm(space, 0.0, v) == doctest::Approx(5.0));
  CHECK(sobolev_norm(space, 1.0, v) == doctest::Approx(5.0 * std::sqrt(2.0)));
  CHECK_THROWS_AS(sobolev_norm(space, 0.0, Eigen::VectorXcd::Zero(3)),
                  std::invalid_argument);
}

TEST_CASE("synthesize/analyze round-trip on random coefficients") {
  const auto space = build_boundary_space(4, 2);
  std::mt19937_64 rng(7);
  const Eigen::VectorXcd coeffs = linalg::random_complex_vector(space.dimension(), rng);
  const Eigen::VectorXcd samples = synthesize(space, coeffs);
  CHECK(samples.size() == quadrature_points(space) * 2);
  const Eigen::VectorXcd back = analyze(space, samples);
  CHECK((back - coeffs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("analyze rejects undersampled input") {
  const auto space = build_boundary_space(4, 1);
  CHECK_THROWS_AS(analyze(space, Eigen::VectorXcd::Zero(8)), std::invalid_argument);
  CHECK_THROWS_AS(analyze(build_boundary_space(4, 2), Eigen::VectorXcd::Zero(7)),
                  std::invalid_argument);
}
