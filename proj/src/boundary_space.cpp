#include "saext/boundary_space.hpp"

#include <cmath>

namespace saext {

TruncatedBoundarySpace build_boundary_space(int mode_cutoff, int components) {
  if (mode_cutoff < 1)
    throw std::invalid_argument("build_boundary_space: mode_cutoff must be >= 1");
  if (components != 1 && components != 2)
    throw std::invalid_argument("build_boundary_space: components must be 1 or 2");
  return TruncatedBoundarySpace{mode_cutoff, components};
}

Eigen::VectorXd sobolev_weights(const TruncatedBoundarySpace& space, double s) {
  Eigen::VectorXd w(space.dimension());
  for (int i = 0; i < w.size(); ++i) {
    const double n = space.mode_of(i);
    w(i) = std::pow(1.0 + n * n, s);
  }
  return w;
}

double sobolev_norm(const TruncatedBoundarySpace& space, double s,
                    const Eigen::VectorXcd& coeffs) {
  if (coeffs.size() != space.dimension())
    throw std::invalid_argument("sobolev_norm: coefficient length mismatch");
  const Eigen::VectorXd w = sobolev_weights(space, s);
  double sum = 0.0;
  for (int i = 0; i < coeffs.size(); ++i) sum += w(i) * std::norm(coeffs(i));
  return std::sqrt(sum);
}

int quadrature_points(const TruncatedBoundarySpace& space) {
  return 2 * space.mode_cutoff + 2;
}

Eigen::VectorXcd synthesize(const TruncatedBoundarySpace& space,
                            const Eigen::VectorXcd& coeffs) {
  if (coeffs.size() != space.dimension())
    throw std::invalid_argument("synthesize: coefficient length mismatch");
  const int q = quadrature_points(space);
  const int mpc = space.modes_per_component();
  Eigen::VectorXcd samples = Eigen::VectorXcd::Zero(q * space.components);
  for (int c = 0; c < space.components; ++c)
    for (int j = 0; j < q; ++j) {
      const double theta = 2.0 * std::numbers::pi * j / q;
      Complex v = 0.0;
      for (int n = -space.mode_cutoff; n <= space.mode_cutoff; ++n)
        v += coeffs(c * mpc + n + space.mode_cutoff) *
             std::polar(1.0, n * theta);
      samples(c * q + j) = v;
    }
  return samples;
}

Eigen::VectorXcd analyze(const TruncatedBoundarySpace& space,
                         const Eigen::VectorXcd& samples) {
  if (samples.size() % space.components != 0)
    throw std::invalid_argument("analyze: sample count not divisible by components");
  const int q = static_cast<int>(samples.size()) / space.components;
  if (q < space.modes_per_component())
    throw std::invalid_argument("analyze: undersampled input (need >= 2N+1 per component)");
  const int mpc = space.modes_per_component();
  Eigen::VectorXcd coeffs(space.dimension());
  for (int c = 0; c < space.components; ++c)
    for (int n = -space.mode_cutoff; n <= space.mode_cutoff; ++n) {
      Complex v = 0.0;
      for (int j = 0; j < q; ++j) {
        const double theta = 2.0 * std::numbers::pi * j / q;
        v += samples(c * q + j) * std::polar(1.0, -n * theta);
      }
      coeffs(c * mpc + n + space.mode_cutoff) = v / static_cast<double>(q);
    }
  return coeffs;
}

}  // namespace saext
