#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <random>
#include <string>
#include <vector>

#include "saext/symmetry.hpp"

namespace saext::vn {

using Complex = std::complex<double>;

/// Closed-form function on [0,1]: a polynomial plus exponential terms
/// c e^{mu x}. Closed under differentiation and reflection x -> 1-x.
struct Func1D {
  Eigen::VectorXcd poly;  // coefficients, poly[k] x^k
  struct ExpTerm {
    Complex coef;
    Complex mu;
  };
  std::vector<ExpTerm> exps;

  Complex eval(double x) const;
  Complex deriv(double x) const;
  Func1D reflected() const;  // x -> 1-x
};

/// Lagrange boundary form [f,g] = (conj(f) g' - conj(f') g) evaluated at 1
/// minus at 0; vanishes on the domain of a symmetric extension.
Complex lagrange_form(const Func1D& f, const Func1D& g);

/// Deficiency data of the minimal Laplacian -d^2/dx^2 on [0,1]: analytic
/// bases of N+- (exponentials with mu^2 = -+i), exact Gram matrices, and
/// orthonormal frames fixed by Cholesky Gram-Schmidt in lexical order.
struct DeficiencyModel {
  std::array<Complex, 2> mu_plus;   // exponents of the N+ basis
  std::array<Complex, 2> mu_minus;  // exponents of the N- basis
  Eigen::Matrix2cd gram_plus, gram_minus;
  Eigen::Matrix2cd frame_plus, frame_minus;  // basis coords of frame vectors, columns

  /// Frame coordinates -> closed-form function.
  Func1D plus_function(const Eigen::Vector2cd& coords) const;
  Func1D minus_function(const Eigen::Vector2cd& coords) const;

  std::pair<int, int> deficiency_indices() const { return {2, 2}; }
};

DeficiencyModel deficiency_basis(const std::string& tag = "interval_laplacian");

struct ExtensionUnitary {
  Eigen::Matrix2cd k;  // N+ frame -> N- frame
  double unitarity_residual() const;
};

ExtensionUnitary random_extension_unitary(std::mt19937_64& rng);

/// K realizing the Dirichlet extension: boundary values of xi + K xi vanish.
ExtensionUnitary dirichlet_extension(const DeficiencyModel& model);

/// Random smooth bump x^2 (1-x)^2 p(x), p cubic; vanishes to first order at
/// both endpoints (minimal-domain template).
Func1D random_bump(std::mt19937_64& rng);

/// Samples Phi = phi_0 + xi + K xi of the extension domain.
std::vector<Func1D> extension_domain_sample(const DeficiencyModel& model,
                                            const ExtensionUnitary& k, int count,
                                            std::mt19937_64& rng);

/// max |[Phi_i, Phi_j]| over all ordered sample pairs; < 1e-9 certifies
/// symmetry of the extension at desk scale.
double selfadjointness_residual(const std::vector<Func1D>& samples);

/// Matrices of the reflection x -> 1-x restricted to N+- in the model frames;
/// throws if the invariance residual ||(I - P_{N+-}) V phi|| exceeds 1e-8.
struct DeficiencyRep {
  Eigen::Matrix2cd v_plus, v_minus;
  double projection_residual = 0.0;
};
DeficiencyRep reflection_on_deficiency(const DeficiencyModel& model);

/// Model with frames rotated into the reflection eigenbasis, so V+- are
/// diagonal (+1, -1) and functions of V+ commute with K = f(V+).
struct AdaptedModel {
  DeficiencyModel model;
  DeficiencyRep rep;  // diagonal in the new frames
};
AdaptedModel reflection_adapted_model();

struct KInvarianceResult {
  bool pass = false;
  double residual = 0.0;  // ||V- K - K V+||_max
};
KInvarianceResult k_invariance_check(const ExtensionUnitary& k, const DeficiencyRep& rep,
                                     double tol = 1e-10);

/// Independent cross-check: reflect extension-domain samples and measure the
/// worst Lagrange form against the domain.
double transported_domain_residual(const DeficiencyModel& model, const ExtensionUnitary& k,
                                   int count, std::mt19937_64& rng);

// -------- Cayley transform and reduction theory on finite matrices --------

Eigen::MatrixXcd cayley(const Eigen::MatrixXcd& t);          // (I - iT)(I + iT)^{-1}
Eigen::MatrixXcd inverse_cayley(const Eigen::MatrixXcd& c);  // i(C - I)(C + I)^{-1}
Complex inverse_cayley_scalar(Complex lambda);

struct IrrepBlock {
  int dim = 0;
  int class_id = 0;
  std::vector<Eigen::MatrixXcd> matrices;  // one per group element
  Eigen::MatrixXcd intertwiner;  // to the first block of the class; empty if first
};

struct IrrepBlockSpec {
  GroupModel group;
  std::vector<IrrepBlock> blocks;

  int total_dim() const;
  Eigen::MatrixXcd rep_matrix(int element) const;  // direct sum
};

IrrepBlockSpec z2_blocks();                       // trivial + sign
IrrepBlockSpec s3_blocks();                       // trivial + sign + 2-dim standard
IrrepBlockSpec equivalent_pair_blocks(unsigned seed = 3);  // two equivalent 2-dim copies

/// Group-averaged projection of a Hermitian matrix onto the commutant.
Eigen::MatrixXcd commutant_average(const IrrepBlockSpec& spec, const Eigen::MatrixXcd& h);

struct ReductionReport {
  std::vector<Complex> block_scalars;        // per block (inequivalent classes)
  double off_scalar_deviation = 0.0;         // ||T - direct sum of scalars||_max
  Eigen::Matrix2cd coefficient_matrix;       // T in the {I, W*, W, I} frame (doubled class)
  Eigen::Matrix2cd cayley_coefficient_matrix;  // same frame for C(T)
  bool has_doubled_class = false;
  double cayley_commutant_residual = 0.0;    // max ||[C(T), V(g)]||_max
};

/// Structure of a Hermitian matrix commuting with the block representation:
/// scalar on mutually inequivalent blocks, 2x2 coefficient matrix over the
/// intertwiner frame for a doubled class.
ReductionReport reduction_block_test(const IrrepBlockSpec& spec, const Eigen::MatrixXcd& t,
                                     double commute_tol = 1e-10);

}  // namespace saext::vn
