#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "saext/linalg.hpp"
#include "saext/vn.hpp"

using namespace saext;
using saext::vn::Complex;

TEST_CASE("Func1D: derivative and reflection are consistent") {
  std::mt19937_64 rng(2);
  vn::Func1D f = vn::random_bump(rng);
  f.exps.push_back({Complex(0.3, -0.2), Complex(0.5, 1.1)});
  const double h = 1e-6;
  for (double x : {0.2, 0.5, 0.9}) {
    const Complex fd = (f.eval(x + h) - f.eval(x - h)) / (2 * h);
    CHECK(std::abs(fd - f.deriv(x)) < 1e-8);
    CHECK(std::abs(f.reflected().eval(x) - f.eval(1.0 - x)) < 1e-12);
  }
}

TEST_CASE("deficiency model: exponents, Gram, orthonormal frames") {
  const auto m = vn::deficiency_basis();
  CHECK(m.deficiency_indices() == std::pair<int, int>{2, 2});
  for (const Complex& mu : m.mu_plus) CHECK(std::abs(mu * mu + Complex(0, 1)) < 1e-15);
  for (const Complex& mu : m.mu_minus) CHECK(std::abs(mu * mu - Complex(0, 1)) < 1e-15);
  CHECK((m.gram_plus - m.gram_plus.adjoint()).cwiseAbs().maxCoeff() < 1e-15);

  // frames orthonormalize the Gram matrices
  const Eigen::Matrix2cd ip = m.frame_plus.adjoint() * m.gram_plus * m.frame_plus;
  const Eigen::Matrix2cd im = m.frame_minus.adjoint() * m.gram_minus * m.frame_minus;
  CHECK((ip - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((im - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() < 1e-13);

  CHECK_THROWS_AS(vn::deficiency_basis("other"), std::invalid_argument);
}

TEST_CASE("lagrange form detects symmetry of extension domains") {
  std::mt19937_64 rng(5);
  const auto model = vn::deficiency_basis();
  for (int trial = 0; trial < 20; ++trial) {
    const auto k = vn::random_extension_unitary(rng);
    CHECK(k.unitarity_residual() < 1e-13);
    const auto samples = vn::extension_domain_sample(model, k, 4, rng);
    CHECK(vn::selfadjointness_residual(samples) < 1e-9);
  }
}

TEST_CASE("non-unitary K is flagged by the Lagrange form") {
  std::mt19937_64 rng(6);
  const auto model = vn::deficiency_basis();
  auto k = vn::random_extension_unitary(rng);
  k.k *= 1.3;
  CHECK(k.unitarity_residual() > 0.1);
  const auto samples = vn::extension_domain_sample(model, k, 6, rng);
  CHECK(vn::selfadjointness_residual(samples) > 1e-6);
}

TEST_CASE("dirichlet extension: unitary K, vanishing boundary values") {
  std::mt19937_64 rng(7);
  const auto model = vn::deficiency_basis();
  const auto k = vn::dirichlet_extension(model);
  CHECK(k.unitarity_residual() < 1e-12);
  const auto samples = vn::extension_domain_sample(model, k, 5, rng);
  for (const auto& f : samples) {
    CHECK(std::abs(f.eval(0.0)) < 1e-10);
    CHECK(std::abs(f.eval(1.0)) < 1e-10);
  }
  CHECK(vn::selfadjointness_residual(samples) < 1e-9);
}

TEST_CASE("reflection restricts to the deficiency spaces as a unitary involution") {
  const auto model = vn::deficiency_basis();
  const auto rep = vn::reflection_on_deficiency(model);
  CHECK(rep.projection_residual < 1e-10);
  CHECK((rep.v_plus * rep.v_plus - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() <
        1e-12);
  CHECK((rep.v_minus * rep.v_minus - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() <
        1e-12);
  CHECK((rep.v_plus.adjoint() * rep.v_plus - Eigen::Matrix2cd::Identity())
            .cwiseAbs()
            .maxCoeff() < 1e-12);
}

TEST_CASE("adapted model diagonalizes the reflection as diag(1, -1)") {
  const auto adapted = vn::reflection_adapted_model();
  Eigen::Matrix2cd d;
  d << 1, 0, 0, -1;
  CHECK((adapted.rep.v_plus - d).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((adapted.rep.v_minus - d).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("K invariance agrees with the transported-domain test") {
  std::mt19937_64 rng(9);
  const auto adapted = vn::reflection_adapted_model();
  std::uniform_real_distribution<double> ph(-3.0, 3.0);

  // diagonal K in the adapted frame commutes with diag(1,-1): invariant
  for (int trial = 0; trial < 5; ++trial) {
    vn::ExtensionUnitary k;
    k.k = Eigen::Vector2cd(std::polar(1.0, ph(rng)), std::polar(1.0, ph(rng))).asDiagonal();
    CHECK(vn::k_invariance_check(k, adapted.rep).pass);
    CHECK(vn::transported_domain_residual(adapted.model, k, 4, rng) < 1e-9);
  }
  // generic K does not commute: both tests flag it
  for (int trial = 0; trial < 5; ++trial) {
    const auto k = vn::random_extension_unitary(rng);
    const bool inv = vn::k_invariance_check(k, adapted.rep).pass;
    const bool transported =
        vn::transported_domain_residual(adapted.model, k, 4, rng) < 1e-9;
    CHECK(inv == transported);
  }
}

TEST_CASE("cayley round-trip on random Hermitian matrices") {
  std::mt19937_64 rng(13);
  const Eigen::MatrixXcd t = linalg::random_hermitian(16, rng);
  const Eigen::MatrixXcd back = vn::inverse_cayley(vn::cayley(t));
  CHECK((back - t).cwiseAbs().maxCoeff() < 1e-12);
  const Eigen::MatrixXcd c = vn::cayley(t);
  CHECK((c.adjoint() * c - Eigen::MatrixXcd::Identity(16, 16)).cwiseAbs().maxCoeff() <
        1e-12);
  CHECK(std::abs(vn::inverse_cayley_scalar(std::polar(1.0, 1.0)) -
                 Complex(-std::tan(0.5))) < 1e-14);
}

TEST_CASE("reduction: inequivalent blocks force scalars") {
  std::mt19937_64 rng(17);
  const auto spec = vn::s3_blocks();
  CHECK(spec.blocks.size() == 3);
  CHECK(spec.total_dim() == 4);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::MatrixXcd t =
        vn::commutant_average(spec, linalg::random_hermitian(spec.total_dim(), rng));
    const auto rep = vn::reduction_block_test(spec, t);
    CHECK(rep.block_scalars.size() == 3);
    CHECK(rep.off_scalar_deviation < 1e-10);
    CHECK_FALSE(rep.has_doubled_class);
    for (const Complex& s : rep.block_scalars) CHECK(std::abs(std::imag(s)) < 1e-12);
  }
}

TEST_CASE("z2 blocks reduce to two scalars") {
  std::mt19937_64 rng(19);
  const auto spec = vn::z2_blocks();
  const Eigen::MatrixXcd t = vn::commutant_average(spec, linalg::random_hermitian(2, rng));
  const auto rep = vn::reduction_block_test(spec, t);
  CHECK(rep.block_scalars.size() == 2);
  CHECK(rep.off_scalar_deviation < 1e-14);
}

TEST_CASE("doubled class: 2x2 coefficient matrix and Cayley compatibility") {
  std::mt19937_64 rng(23);
  const auto spec = vn::equivalent_pair_blocks();
  const Eigen::MatrixXcd t =
      vn::commutant_average(spec, linalg::random_hermitian(spec.total_dim(), rng));
  const auto rep = vn::reduction_block_test(spec, t);
  CHECK(rep.has_doubled_class);
  CHECK(rep.off_scalar_deviation < 1e-10);
  CHECK((rep.coefficient_matrix - rep.coefficient_matrix.adjoint()).cwiseAbs().maxCoeff() <
        1e-12);
  CHECK(rep.cayley_commutant_residual < 1e-10);
  // the Cayley transform acts on the 2x2 coefficient matrix
  const Eigen::MatrixXcd expected = vn::cayley(rep.coefficient_matrix);
  CHECK((rep.cayley_coefficient_matrix - expected).cwiseAbs().maxCoeff() < 1e-10);

  // commutant dimension 4 via the generic isotypic machinery
  std::vector<Eigen::MatrixXcd> mats;
  for (int g = 0; g < spec.group.size(); ++g) mats.push_back(spec.rep_matrix(g));
  CHECK(isotypic_decompose(mats).commutant_dimension == 4);
}

TEST_CASE("reduction rejects non-commuting input") {
  std::mt19937_64 rng(29);
  const auto spec = vn::s3_blocks();
  const Eigen::MatrixXcd t = linalg::random_hermitian(spec.total_dim(), rng);
  CHECK_THROWS_AS(vn::reduction_block_test(spec, t), std::invalid_argument);
}
