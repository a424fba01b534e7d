#include "saext/unitary_lab.hpp"

#include <cmath>

#include "saext/linalg.hpp"

namespace saext {

namespace {
constexpr double kPi = std::numbers::pi;

// angular distance of lambda from -1 on the unit circle
double angle_from_minus_one(Complex lambda) {
  double d = std::abs(std::arg(lambda) - kPi);
  return std::min(d, 2.0 * kPi - d);
}
}  // namespace

double BoundaryUnitary::unitarity_residual() const {
  const Eigen::MatrixXcd r =
      matrix.adjoint() * matrix - Eigen::MatrixXcd::Identity(matrix.rows(), matrix.cols());
  return r.cwiseAbs().maxCoeff();
}

BoundaryUnitary make_phase_unitary(const TruncatedBoundarySpace& space, double beta) {
  BoundaryUnitary u{space,
                    std::polar(1.0, beta) *
                        Eigen::MatrixXcd::Identity(space.dimension(), space.dimension()),
                    "phase(const)"};
  return u;
}

BoundaryUnitary make_phase_unitary(const TruncatedBoundarySpace& space,
                                   const std::function<double(double)>& beta) {
  // Collocation on the odd grid of M = 2N+1 points: the coefficient->sample
  // map F with F_{jn} = e^{i n theta_j} satisfies F^* F = M I, so the
  // conjugated multiplication operator is exactly unitary per component.
  const int m = space.modes_per_component();
  Eigen::MatrixXcd f(m, m);
  Eigen::VectorXcd phase(m);
  for (int j = 0; j < m; ++j) {
    const double theta = 2.0 * kPi * j / m;
    phase(j) = std::polar(1.0, beta(theta));
    for (int n = -space.mode_cutoff; n <= space.mode_cutoff; ++n)
      f(j, n + space.mode_cutoff) = std::polar(1.0, n * theta);
  }
  const Eigen::MatrixXcd block = f.adjoint() * phase.asDiagonal() * f / double(m);
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(space.dimension(), space.dimension());
  for (int c = 0; c < space.components; ++c) u.block(c * m, c * m, m, m) = block;
  return BoundaryUnitary{space, u, "phase(function)"};
}

BoundaryUnitary make_quasiperiodic_unitary(const TruncatedBoundarySpace& space, double alpha) {
  if (space.components != 2)
    throw std::invalid_argument("make_quasiperiodic_unitary: needs a two-circle boundary");
  const int m = space.modes_per_component();
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(2 * m, 2 * m);
  for (int i = 0; i < m; ++i) {
    u(i, m + i) = std::polar(1.0, alpha);
    u(m + i, i) = std::polar(1.0, -alpha);
  }
  return BoundaryUnitary{space, u, "quasiperiodic"};
}

BoundaryUnitary make_fourier_diagonal_unitary(const TruncatedBoundarySpace& space,
                                              const Eigen::VectorXd& betas) {
  if (betas.size() != space.dimension())
    throw std::invalid_argument("make_fourier_diagonal_unitary: betas length mismatch");
  Eigen::VectorXcd d(betas.size());
  for (int i = 0; i < betas.size(); ++i) d(i) = std::polar(1.0, betas(i));
  return BoundaryUnitary{space, Eigen::MatrixXcd(d.asDiagonal()), "fourier_diagonal"};
}

BoundaryUnitary make_two_phase_unitary(const TruncatedBoundarySpace& space, double beta1,
                                       double beta2) {
  if (space.components != 2)
    throw std::invalid_argument("make_two_phase_unitary: needs a two-circle boundary");
  const int m = space.modes_per_component();
  Eigen::VectorXd betas(2 * m);
  betas.head(m).setConstant(beta1);
  betas.tail(m).setConstant(beta2);
  auto u = make_fourier_diagonal_unitary(space, betas);
  u.label = "two_phase";
  return u;
}

BoundaryUnitary make_matrix_unitary(const TruncatedBoundarySpace& space,
                                    const Eigen::MatrixXcd& matrix, const std::string& label) {
  if (matrix.rows() != space.dimension() || matrix.cols() != space.dimension())
    throw std::invalid_argument("make_matrix_unitary: size mismatch");
  BoundaryUnitary u{space, matrix, label};
  if (u.unitarity_residual() > 1e-10)
    throw std::invalid_argument("make_matrix_unitary: matrix is not unitary");
  return u;
}

GapReport detect_gap(const BoundaryUnitary& u, double eps_gap, double delta_min) {
  if (!(eps_gap > 0.0 && eps_gap < delta_min))
    throw std::invalid_argument("detect_gap: need 0 < eps_gap < delta_min");
  if (u.unitarity_residual() > 1e-10)
    throw std::invalid_argument("detect_gap: input is not unitary within 1e-10");

  const auto clusters = linalg::joint_eigenspaces({u.matrix});
  const int n = static_cast<int>(u.matrix.rows());

  GapReport rep;
  rep.eigenvalues.resize(n);
  rep.eigenvectors.resize(n, n);
  std::vector<std::pair<Eigen::VectorXcd, Complex>> inside, outside;
  double gap_angle = kPi;
  for (const auto& c : clusters) {
    const Complex lambda = c.values[0] / std::abs(c.values[0]);
    const double d = angle_from_minus_one(lambda);
    for (int j = 0; j < c.basis.cols(); ++j) {
      if (d <= eps_gap) {
        inside.emplace_back(c.basis.col(j), lambda);
      } else if (d < delta_min) {
        throw NoVerifiedGap("detect_gap: eigenvalue at angular distance " + std::to_string(d) +
                            " from -1 lies in the ambiguity annulus (" +
                            std::to_string(eps_gap) + ", " + std::to_string(delta_min) +
                            "); no verified gap");
      } else {
        outside.emplace_back(c.basis.col(j), lambda);
        gap_angle = std::min(gap_angle, d);
      }
    }
  }

  int col = 0;
  for (const auto& [v, lam] : inside) {
    rep.minus_one_modes.push_back(col);
    rep.eigenvectors.col(col) = v;
    rep.eigenvalues(col++) = lam;
  }
  for (const auto& [v, lam] : outside) {
    rep.eigenvectors.col(col) = v;
    rep.eigenvalues(col++) = lam;
  }
  const int nw = static_cast<int>(inside.size());
  rep.w_basis = rep.eigenvectors.leftCols(nw);
  rep.p_w = rep.w_basis * rep.w_basis.adjoint();
  rep.gap_angle = outside.empty() ? kPi : gap_angle;
  rep.has_gap = true;
  return rep;
}

Complex cayley_eigenvalue_map(Complex lambda) {
  return Complex(0, 1) * (lambda - 1.0) / (lambda + 1.0);
}

PartialCayley partial_cayley(const BoundaryUnitary& u, const GapReport& gap) {
  if (!gap.has_gap) throw std::invalid_argument("partial_cayley: no verified gap");
  const int n = static_cast<int>(u.matrix.rows());
  const int nw = static_cast<int>(gap.minus_one_modes.size());
  const Eigen::MatrixXcd vperp = gap.eigenvectors.rightCols(n - nw);

  // route 1: restricted inverse of (U + I) on the W-perp frame
  const Eigen::MatrixXcd u0 = vperp.adjoint() * u.matrix * vperp;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n - nw, n - nw);
  const Eigen::MatrixXcd restricted =
      Complex(0, 1) * (u0 - id) * (u0 + id).partialPivLu().solve(id);
  const Eigen::MatrixXcd a1 = vperp * restricted * vperp.adjoint();

  // route 2: spectral sum of i(lambda-1)/(lambda+1) over the gap eigenpairs
  Eigen::MatrixXcd a2 = Eigen::MatrixXcd::Zero(n, n);
  for (int i = nw; i < n; ++i) {
    const Eigen::VectorXcd v = gap.eigenvectors.col(i);
    a2 += cayley_eigenvalue_map(gap.eigenvalues(i)) * (v * v.adjoint());
  }

  if ((a1 - a2).cwiseAbs().maxCoeff() > 1e-10)
    throw std::runtime_error("partial_cayley: computation routes disagree beyond 1e-10");

  PartialCayley pc;
  pc.matrix = 0.5 * (a2 + a2.adjoint());
  pc.bound = linalg::spectral_norm(pc.matrix);
  return pc;
}

AdmissibilityReport admissibility_estimate(
    const std::function<BoundaryUnitary(int cutoff)>& make_unitary,
    const std::vector<int>& cutoffs, double s, double eps_gap, double delta_min) {
  if (cutoffs.size() < 3)
    throw std::invalid_argument("admissibility_estimate: need at least three cutoffs");
  AdmissibilityReport rep;
  rep.s = s;
  rep.cutoffs = cutoffs;
  for (int n : cutoffs) {
    const BoundaryUnitary u = make_unitary(n);
    const GapReport gap = detect_gap(u, eps_gap, delta_min);
    const PartialCayley a = partial_cayley(u, gap);
    // operator norm in the discrete H^s geometry: W A W^{-1} with
    // W = diag((1+n^2)^{s/2})
    const Eigen::VectorXd w =
        sobolev_weights(u.space, s / 2.0);
    rep.k_n.push_back(linalg::spectral_norm(w.asDiagonal() * a.matrix *
                                            w.cwiseInverse().asDiagonal()));
  }
  bool nonincreasing = true;
  for (size_t i = 1; i < rep.k_n.size(); ++i)
    if (rep.k_n[i] > 1.05 * rep.k_n[i - 1] + 1e-14) nonincreasing = false;
  const size_t last = rep.k_n.size();
  const double hi = *std::max_element(rep.k_n.begin() + last - 3, rep.k_n.end());
  const double lo = *std::min_element(rep.k_n.begin() + last - 3, rep.k_n.end());
  const bool plateau = hi <= 1.05 * lo + 1e-14;
  rep.verdict = (nonincreasing && plateau) ? "bounded" : "inconclusive/growing";
  return rep;
}

}  // namespace saext
