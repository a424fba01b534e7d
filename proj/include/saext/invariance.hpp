#pragma once

#include "saext/forms.hpp"
#include "saext/symmetry.hpp"

namespace saext {

struct ClusterInvariance {
  double eigenvalue = 0.0;
  int size = 0;
  std::vector<double> residual_per_element;  // ||(I - P_cluster) V(g) P_cluster||_M
};

struct InvarianceReport {
  std::vector<ClusterInvariance> clusters;
  double max_residual = 0.0;
  bool pass = false;
};

/// Spectral form of G-invariance: every eigenvalue cluster of the
/// representing operator must be invariant under V(g).
InvarianceReport invariance_spectral_check(const SpectrumResult& spectrum,
                                           const FormAssembly& assembly, const BulkRep& rep,
                                           double cluster_rel_tol = 1e-7, double tol = 1e-7);

/// Symmetry sectors of a bulk representation, as per-block orthonormal bases
/// grouped by joint character across the group elements.
struct BulkSectors {
  std::vector<std::string> labels;
  std::vector<std::vector<Eigen::MatrixXcd>> block_basis;  // [sector][disc block]
};
BulkSectors bulk_isotypic_sectors(const BulkRep& rep, double cluster_tol = 1e-8);

struct SectorSpectraResult {
  std::vector<std::string> labels;
  std::vector<Eigen::VectorXd> sector_eigenvalues;
  double merge_residual = 0.0;  // worst relative multiset mismatch vs full spectrum
  bool merge_ok = false;
};

/// Compresses the assembled pencil onto each sector (intersected with the
/// constraint space) and checks the multiset union against the full spectrum.
SectorSpectraResult sector_spectra(const FormAssembly& assembly, const BulkSectors& sectors,
                                   double rel_tol = 1e-7);

/// Relative deviation of the graph norm (1+m)<.,.>_M + Q(.,.) under V(g),
/// over random constraint-space samples.
double form_norm_invariance_check(const FormAssembly& assembly, const BulkRep& rep,
                                  int n_samples = 20, unsigned seed = 1);

/// Matrix-level statement behind commutation-implies-invariance:
/// max over g of ||V(g)^* (S - Gamma^* A_U Gamma) V(g) - (...)||_max and the
/// same for M. Intended for small discretizations.
double assembled_congruence_residual(const FormAssembly& assembly, const BulkRep& rep);

}  // namespace saext
