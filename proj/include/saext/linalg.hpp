#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <random>
#include <vector>

namespace saext::linalg {

using Complex = std::complex<double>;
using SparseC = Eigen::SparseMatrix<Complex>;
using SparseD = Eigen::SparseMatrix<double>;

/// One joint eigenspace of a commuting family of normal matrices: an
/// orthonormal basis of the subspace plus the eigenvalue of every family
/// member on it.
struct EigenCluster {
  Eigen::MatrixXcd basis;
  std::vector<Complex> values;  // one per family member
};

/// Simultaneous eigendecomposition of a pairwise commuting family of normal
/// matrices, done by recursive cluster refinement over the Hermitian and
/// anti-Hermitian parts. Bases are orthonormal across and within clusters.
std::vector<EigenCluster> joint_eigenspaces(const std::vector<Eigen::MatrixXcd>& family,
                                            double cluster_tol = 1e-8);

struct PencilSolution {
  Eigen::VectorXd values;    // ascending
  Eigen::MatrixXcd vectors;  // M-orthonormal columns; empty if not requested
};

/// All eigenpairs of the Hermitian pencil (A, M), M > 0. LAPACK zhegv.
PencilSolution dense_hermitian_pencil(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& m,
                                      bool want_vectors = true);

/// Eigenpairs il..iu (1-based, ascending) of a real symmetric banded pencil.
/// LAPACK dsbgvx; both matrices are given as sparse with the stated
/// lower bandwidths.
PencilSolution banded_real_pencil(const SparseD& a, const SparseD& m, int kd_a, int kd_m,
                                  int il, int iu, bool want_vectors = true);

/// k lowest eigenpairs of a sparse complex Hermitian pencil via shift-invert
/// Lanczos with full reorthogonalization in the M-inner product. The shift
/// must lie below the spectrum; it is re-tried downward if violated.
PencilSolution lanczos_lowest(const SparseC& a, const SparseC& m, int k, double sigma,
                              double res_tol = 1e-10);

/// Largest singular value.
double spectral_norm(const Eigen::MatrixXcd& a);

/// Orthonormal basis of the numerical column space (SVD, relative cutoff).
Eigen::MatrixXcd orthonormal_range(const Eigen::MatrixXcd& x, double rel_cutoff = 1e-10);

/// Lower bandwidth of the sparse matrix (max |i-j| over structurally
/// nonzero entries above `drop`).
int bandwidth(const SparseC& a, double drop = 0.0);

/// Largest |imaginary part| over all entries.
double max_imag(const SparseC& a);

Eigen::MatrixXcd random_unitary(int n, std::mt19937_64& rng);
Eigen::VectorXcd random_complex_vector(int n, std::mt19937_64& rng);
Eigen::MatrixXcd random_hermitian(int n, std::mt19937_64& rng);

}  // namespace saext::linalg
