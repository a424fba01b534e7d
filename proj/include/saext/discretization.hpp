#pragma once

#include <Eigen/Sparse>
#include <memory>
#include <string>
#include <vector>

#include "saext/boundary_space.hpp"

namespace saext {

enum class Geometry { Interval, Cylinder, Hemisphere };

/// One independent 1-D pencil of the tensor discretization (one azimuthal /
/// circumferential Fourier mode). The trace matrix maps nodal values to the
/// boundary Fourier coefficients this block owns.
struct BulkBlock {
  int mode = 0;  // Fourier mode index along the closed direction
  int nd = 0;    // nodal degrees of freedom

  Eigen::SparseMatrix<double> mass;       // nd x nd, symmetric positive definite
  Eigen::SparseMatrix<double> stiffness;  // nd x nd, symmetric positive semidefinite
  Eigen::SparseMatrix<double> trace;      // c x nd, c = boundary components

  std::vector<int> boundary_indices;  // global boundary coefficient index per trace row
  Eigen::VectorXd nodes;              // grid coordinate per dof (x or theta)
};

struct BulkDiscretization {
  Geometry geometry = Geometry::Interval;
  std::string label;
  TruncatedBoundarySpace boundary;
  std::vector<BulkBlock> blocks;
  std::vector<int> offsets;  // global dof offset per block
  int total_dof = 0;

  int block_of_dof(int global) const;
};

/// Piecewise-linear FEM on [0,1]; the two endpoints form a two-component
/// "N = 0" boundary space.
std::shared_ptr<BulkDiscretization> discretize_interval(int n_cells);

/// P1 FEM in x on [-1,1] tensored with Fourier modes e^{i pi m y} (period 2)
/// for |m| <= mode_cutoff. Boundary: two circles at x = -1 and x = +1.
std::shared_ptr<BulkDiscretization> discretize_cylinder(int nx_cells, int mode_cutoff);

/// Per azimuthal mode m, weighted P1 FEM in the polar angle on [0, pi/2]
/// with weight sin(theta); m = 0 is natural at the pole, m != 0 carries an
/// essential zero there. Boundary: the equator circle.
std::shared_ptr<BulkDiscretization> discretize_hemisphere(int n_theta_cells, int mode_cutoff);

/// Global sparse trace matrix (boundary dimension x total dof).
Eigen::SparseMatrix<double> global_trace(const BulkDiscretization& disc);

}  // namespace saext
