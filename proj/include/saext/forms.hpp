#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "saext/discretization.hpp"
#include "saext/linalg.hpp"
#include "saext/unitary_lab.hpp"

namespace saext {

/// One reduced Hermitian pencil of the assembled form. When the boundary
/// operators are mode-diagonal there is one per discretization block;
/// otherwise a single coupled pencil covers all degrees of freedom.
struct AssembledBlock {
  std::vector<int> disc_blocks;  // indices into disc->blocks
  int nd = 0;                    // unconstrained dof of this pencil
  int ndr = 0;                   // dof after constraint elimination

  linalg::SparseC q_full;   // S + Gamma^* C Gamma (boundary term folded in)
  linalg::SparseC m_full;   // mass
  linalg::SparseC trace;    // boundary rows owned by this pencil
  Eigen::MatrixXcd coupling;  // C = -A_U restricted to those rows
  linalg::SparseC b;        // nd x ndr constraint null-space basis (sparse elimination)
  linalg::SparseC q_red;    // b^* q_full b
  linalg::SparseC m_red;    // b^* m_full b
};

struct FormAssembly {
  std::shared_ptr<const BulkDiscretization> disc;
  BoundaryUnitary u;
  GapReport gap;
  PartialCayley a_u;
  bool mode_diagonal = false;
  std::vector<AssembledBlock> blocks;

  /// Semi-bound m = max(0, -lambda_min) of the reduced pencil; computed on
  /// first use and cached.
  double lower_bound() const;
  double min_eigenvalue() const;

 private:
  mutable std::optional<double> min_eig_;
};

/// Builds A_U and P_W for the unitary, eliminates the boundary constraint
/// P_W gamma(Phi) = 0 by sparse null-space reduction, and returns the
/// Hermitian pencil(s) of Q_U.
FormAssembly assemble_form(std::shared_ptr<const BulkDiscretization> disc,
                           const BoundaryUnitary& u, double eps_gap = 1e-8,
                           double delta_min = 1e-3);

struct SpectrumResult {
  Eigen::VectorXd eigenvalues;  // ascending
  Eigen::MatrixXcd vectors;     // total_dof x k, M-orthonormal
  Eigen::VectorXd residuals;    // relative pencil residual per pair
  std::vector<int> source_block;  // AssembledBlock index per pair
};

/// k lowest eigenpairs of the assembled pencil. Solver path per block: real
/// banded (dsbgvx), dense (zhegv), or shift-invert Lanczos for large complex
/// pencils.
SpectrumResult solve_spectrum(const FormAssembly& assembly, int k);

/// All eigenvalues (no vectors) of the assembled pencil, merged ascending.
Eigen::VectorXd full_spectrum(const FormAssembly& assembly);

// -------- analytic oracles --------

/// Robin eigenvalues on [0,1] with u'(1) = -t u(1), u'(0) = t u(0),
/// t = tan(beta/2), by bisection on the transcendental root system.
std::vector<double> robin_oracle_interval(double beta, int count);

/// Quasi-periodic eigenvalues ((2 pi k + alpha)/2)^2 on a length-2 interval,
/// sorted with multiplicity.
std::vector<double> quasiperiodic_oracle_interval(double alpha, int count);

enum class HemisphereBC { Dirichlet, Neumann };

/// l(l+1) with l + |m| odd (Dirichlet) or even (Neumann), |m| <= mode_cutoff,
/// sorted with multiplicity.
std::vector<double> legendre_oracle_hemisphere(HemisphereBC kind, int mode_cutoff, int count);

}  // namespace saext
