#pragma once

#include <functional>
#include <string>
#include <vector>

#include "saext/boundary_space.hpp"

namespace saext {

struct BoundaryUnitary {
  TruncatedBoundarySpace space;
  Eigen::MatrixXcd matrix;
  std::string label;

  /// max |U*U - I| entry; should stay below 1e-10 for every constructor.
  double unitarity_residual() const;
};

/// Multiplication by a constant phase e^{i beta}: e^{i beta} I.
BoundaryUnitary make_phase_unitary(const TruncatedBoundarySpace& space, double beta);

/// Multiplication by e^{i beta(theta)}, sampled on the odd collocation grid
/// of 2N+1 points so the Fourier-basis matrix is exactly unitary. The same
/// phase function is applied on each component.
BoundaryUnitary make_phase_unitary(const TruncatedBoundarySpace& space,
                                   const std::function<double(double)>& beta);

/// Quasi-periodic coupling of a two-circle boundary: per mode the 2x2 block
/// [[0, e^{i alpha}], [e^{-i alpha}, 0]].
BoundaryUnitary make_quasiperiodic_unitary(const TruncatedBoundarySpace& space, double alpha);

/// diag(e^{i beta_k}) with one angle per coefficient, in space ordering.
BoundaryUnitary make_fourier_diagonal_unitary(const TruncatedBoundarySpace& space,
                                              const Eigen::VectorXd& betas);

/// Robin-type unitary on a two-circle boundary: e^{i beta_1} on component 1,
/// e^{i beta_2} on component 2.
BoundaryUnitary make_two_phase_unitary(const TruncatedBoundarySpace& space, double beta1,
                                       double beta2);

/// Arbitrary matrix; unitarity is validated.
BoundaryUnitary make_matrix_unitary(const TruncatedBoundarySpace& space,
                                    const Eigen::MatrixXcd& matrix, const std::string& label);

/// Thrown when an eigenvalue of U falls into the annulus between eps_gap and
/// delta_min around -1, so the spectral gap can be neither certified nor
/// refuted at the working tolerances.
struct NoVerifiedGap : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GapReport {
  std::vector<int> minus_one_modes;  // indices into eigenvalues
  double gap_angle = 0.0;            // min |arg(lambda) - pi| over eigenvalues outside W
  Eigen::MatrixXcd w_basis;          // orthonormal basis of W = ker(U + I)
  Eigen::MatrixXcd p_w;              // Hermitian projection onto W
  bool has_gap = false;

  // full unitary eigendecomposition, W columns first
  Eigen::VectorXcd eigenvalues;
  Eigen::MatrixXcd eigenvectors;
};

GapReport detect_gap(const BoundaryUnitary& u, double eps_gap = 1e-8, double delta_min = 1e-3);

struct PartialCayley {
  Eigen::MatrixXcd matrix;  // A_U, Hermitian, zero on W
  double bound = 0.0;       // operator norm of A_U
};

/// A_U = i P_{W-perp} (U - I)(U + I)^{-1}, extended by zero on W. Computed on
/// the restricted inverse and cross-checked against the eigendecomposition
/// sum of i(lambda-1)/(lambda+1) P_lambda.
PartialCayley partial_cayley(const BoundaryUnitary& u, const GapReport& gap);

/// Scalar spectrum map i(lambda-1)/(lambda+1); for lambda = e^{i beta} this
/// equals -tan(beta/2).
Complex cayley_eigenvalue_map(Complex lambda);

struct AdmissibilityReport {
  double s = 0.5;
  std::vector<int> cutoffs;
  std::vector<double> k_n;  // weighted operator norm per cutoff
  std::string verdict;      // "bounded" or "inconclusive/growing"
};

/// Weighted operator norm K_N of A_U in the discrete H^s norm, swept over
/// truncation cutoffs. The uniform bound of the continuum definition is
/// operationalized as plateau behavior of K_N.
AdmissibilityReport admissibility_estimate(
    const std::function<BoundaryUnitary(int cutoff)>& make_unitary,
    const std::vector<int>& cutoffs, double s = 0.5, double eps_gap = 1e-8,
    double delta_min = 1e-3);

}  // namespace saext
