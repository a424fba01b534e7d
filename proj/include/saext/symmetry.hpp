#pragma once

#include <memory>
#include <string>
#include <vector>

#include "saext/discretization.hpp"
#include "saext/unitary_lab.hpp"

namespace saext {

/// Finite group (element list, composition table, inverses) or a finite
/// symmetric sample of circle angles standing in for SO(2).
struct GroupModel {
  enum class Kind { Finite, SampledCircle };
  Kind kind = Kind::Finite;

  Eigen::MatrixXi table;  // table(i, j) = index of g_i g_j
  std::vector<int> inverses;
  int identity = 0;

  std::vector<double> angles;  // sampled circle; contains 0, closed under negation

  int size() const {
    return kind == Kind::Finite ? static_cast<int>(table.rows())
                                : static_cast<int>(angles.size());
  }

  static GroupModel finite(const Eigen::MatrixXi& table);
  static GroupModel z2();
  static GroupModel s3();
  /// count angles 2 pi k / count; symmetric under negation, contains 0.
  static GroupModel sampled_circle(int count);
  static GroupModel sampled_circle(std::vector<double> angles);
};

struct BoundaryRep {
  GroupModel group;
  TruncatedBoundarySpace space;
  std::vector<Eigen::MatrixXcd> matrices;

  /// max unitarity / homomorphism residual over the table (finite) or all
  /// sampled pairs whose sum is again a sample (circle).
  double validation_residual() const;
};

/// Phase-permutation action on one discretization block:
/// (apply x)_i = phase_i * x_{perm_i}.
struct BlockAction {
  Eigen::VectorXi perm;
  Eigen::VectorXcd phase;

  Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const;
  Eigen::MatrixXcd dense() const;
  static BlockAction identity(int n);
};

struct BulkRep {
  GroupModel group;
  std::shared_ptr<const BulkDiscretization> disc;
  std::vector<std::vector<BlockAction>> actions;  // [element][block]

  Eigen::VectorXcd apply(int element, const Eigen::VectorXcd& global) const;
  /// max over random pairs of |<Vx,Vy>_M - <x,y>_M|.
  double mass_unitarity_residual(int samples = 8, unsigned seed = 5) const;
};

/// Z2 = {e, f} on the cylinder: bulk x-reflection, boundary component swap.
std::pair<BulkRep, BoundaryRep> z2_cylinder_rep(std::shared_ptr<const BulkDiscretization> disc,
                                                const TruncatedBoundarySpace& bspace);

/// Rotation g_alpha acting on Fourier coefficients as e^{-i n alpha}.
BoundaryRep so2_boundary_rep(const TruncatedBoundarySpace& space, const GroupModel& circle);
BulkRep so2_bulk_rep(std::shared_ptr<const BulkDiscretization> disc, const GroupModel& circle);

/// ||Gamma V(g) - v(g) Gamma||_max over all elements.
double trace_compatibility_residual(const BulkRep& bulk, const BoundaryRep& boundary);

struct CommutantCheck {
  double max_commutator = 0.0;  // worst ||[v(g), U]||_max
  bool pass = false;
};
CommutantCheck commutant_check(const BoundaryRep& rep, const BoundaryUnitary& u,
                               double tol = 1e-10);

struct BlockStructureReport {
  std::vector<double> upper;  // ||P_W v(g) P_Wperp|| per element
  std::vector<double> lower;  // ||P_Wperp v(g) P_W|| per element
  double max_residual = 0.0;
};
struct GapReport;
BlockStructureReport block_structure_check(const BoundaryRep& rep, const GapReport& gap);

struct IsotypicDecomposition {
  std::vector<Eigen::MatrixXcd> projections;  // orthogonal, sum to identity
  int commutant_dimension = 0;
};

/// Sector projections from the spectral decomposition of a generic Hermitian
/// element of the algebra center; commutant dimension from the rank of the
/// vectorized commutation system (singular cutoff 1e-8 sigma_max).
IsotypicDecomposition isotypic_decompose(const std::vector<Eigen::MatrixXcd>& rep,
                                         double svd_cutoff = 1e-8, unsigned seed = 11);
IsotypicDecomposition isotypic_decompose(const BoundaryRep& rep);

}  // namespace saext
