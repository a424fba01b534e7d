#pragma once

#include <Eigen/Dense>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace saext {

using Complex = std::complex<double>;

/// Finite Fourier model of the boundary Hilbert space L2 of one circle or
/// two disjoint circles. Coefficients are ordered (component, n) with n
/// running from -N to N; the inner product is the plain l2 product of
/// coefficients.
struct TruncatedBoundarySpace {
  int mode_cutoff = 1;      // N; modes n in {-N, ..., N}
  int components = 1;       // 1 = S^1, 2 = two disjoint circles
  double circumference = 2.0 * std::numbers::pi;

  int modes_per_component() const { return 2 * mode_cutoff + 1; }
  int dimension() const { return modes_per_component() * components; }

  int index_of(int component, int mode) const {
    if (component < 0 || component >= components || std::abs(mode) > mode_cutoff)
      throw std::out_of_range("TruncatedBoundarySpace::index_of: bad (component, mode)");
    return component * modes_per_component() + (mode + mode_cutoff);
  }
  int mode_of(int index) const { return index % modes_per_component() - mode_cutoff; }
  int component_of(int index) const { return index / modes_per_component(); }

  bool operator==(const TruncatedBoundarySpace& o) const {
    return mode_cutoff == o.mode_cutoff && components == o.components &&
           circumference == o.circumference;
  }
};

TruncatedBoundarySpace build_boundary_space(int mode_cutoff, int components);

/// Sobolev weights (1 + n^2)^s per coefficient, in space ordering.
Eigen::VectorXd sobolev_weights(const TruncatedBoundarySpace& space, double s);

/// Discrete Sobolev norm (sum_n (1+n^2)^s |phi_n|^2)^{1/2}.
double sobolev_norm(const TruncatedBoundarySpace& space, double s,
                    const Eigen::VectorXcd& coeffs);

/// Number of quadrature points per component used by synthesize/analyze.
int quadrature_points(const TruncatedBoundarySpace& space);

/// Point samples of sum_n c_n e^{i n theta} on the uniform grid, one block of
/// quadrature_points() samples per component.
Eigen::VectorXcd synthesize(const TruncatedBoundarySpace& space,
                            const Eigen::VectorXcd& coeffs);

/// Fourier coefficients from point samples; exact left inverse of synthesize
/// on the truncated space. Accepts any per-component sample count >= 2N+1.
Eigen::VectorXcd analyze(const TruncatedBoundarySpace& space,
                         const Eigen::VectorXcd& samples);

}  // namespace saext
