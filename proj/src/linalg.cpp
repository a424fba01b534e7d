#include "saext/linalg.hpp"

#include <lapacke.h>

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace saext::linalg {

namespace {

// Splits the eigenvalues of a Hermitian matrix into gap-separated groups.
std::vector<std::pair<int, int>> cluster_ranges(const Eigen::VectorXd& vals, double tol) {
  std::vector<std::pair<int, int>> ranges;
  int start = 0;
  for (int i = 1; i <= vals.size(); ++i) {
    if (i == vals.size() || vals[i] - vals[i - 1] > tol) {
      ranges.emplace_back(start, i);
      start = i;
    }
  }
  return ranges;
}

}  // namespace

std::vector<EigenCluster> joint_eigenspaces(const std::vector<Eigen::MatrixXcd>& family,
                                            double cluster_tol) {
  if (family.empty()) throw std::invalid_argument("joint_eigenspaces: empty family");
  const int n = static_cast<int>(family.front().rows());

  std::vector<EigenCluster> clusters(1);
  clusters[0].basis = Eigen::MatrixXcd::Identity(n, n);

  for (const auto& a : family) {
    const Eigen::MatrixXcd herm = 0.5 * (a + a.adjoint());
    const Eigen::MatrixXcd anti = (a - a.adjoint()) / Complex(0, 2.0);
    std::vector<EigenCluster> next;
    for (auto& c : clusters) {
      // refine by the Hermitian part, then the anti-Hermitian part
      std::vector<std::pair<Eigen::MatrixXcd, double>> stage;
      {
        const Eigen::MatrixXcd h = c.basis.adjoint() * herm * c.basis;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
        for (auto [b, e] : cluster_ranges(es.eigenvalues(), cluster_tol)) {
          stage.emplace_back(c.basis * es.eigenvectors().middleCols(b, e - b),
                             es.eigenvalues().segment(b, e - b).mean());
        }
      }
      for (auto& [vb, re] : stage) {
        const Eigen::MatrixXcd h = vb.adjoint() * anti * vb;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
        for (auto [b, e] : cluster_ranges(es.eigenvalues(), cluster_tol)) {
          EigenCluster sub;
          sub.basis = vb * es.eigenvectors().middleCols(b, e - b);
          sub.values = c.values;
          sub.values.push_back(Complex(re, es.eigenvalues().segment(b, e - b).mean()));
          next.push_back(std::move(sub));
        }
      }
    }
    clusters = std::move(next);
  }
  return clusters;
}

PencilSolution dense_hermitian_pencil(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& m,
                                      bool want_vectors) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Eigen::MatrixXcd aw = a, mw = m;
  Eigen::VectorXd w(n);
  lapack_int info = LAPACKE_zhegv(
      LAPACK_COL_MAJOR, 1, want_vectors ? 'V' : 'N', 'L', n,
      reinterpret_cast<lapack_complex_double*>(aw.data()), n,
      reinterpret_cast<lapack_complex_double*>(mw.data()), n, w.data());
  if (info != 0)
    throw std::runtime_error("zhegv failed, info = " + std::to_string(info));
  PencilSolution sol;
  sol.values = w;
  if (want_vectors) sol.vectors = aw;
  return sol;
}

namespace {

// LAPACK lower banded storage: ab(kd+1, n), ab[i-j + j*ldab] = A(i,j), i >= j.
Eigen::MatrixXd to_banded(const SparseD& a, int kd) {
  const int n = static_cast<int>(a.rows());
  Eigen::MatrixXd ab = Eigen::MatrixXd::Zero(kd + 1, n);
  for (int j = 0; j < a.outerSize(); ++j)
    for (SparseD::InnerIterator it(a, j); it; ++it) {
      if (it.row() < it.col()) continue;
      const int d = static_cast<int>(it.row() - it.col());
      if (d > kd) throw std::runtime_error("to_banded: bandwidth exceeded");
      ab(d, it.col()) = it.value();
    }
  return ab;
}

}  // namespace

PencilSolution banded_real_pencil(const SparseD& a, const SparseD& m, int kd_a, int kd_m,
                                  int il, int iu, bool want_vectors) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Eigen::MatrixXd ab = to_banded(a, kd_a);
  Eigen::MatrixXd bb = to_banded(m, kd_m);
  Eigen::MatrixXd q(n, n), z(n, std::max<lapack_int>(1, iu - il + 1));
  Eigen::VectorXd w(n);
  lapack_int found = 0;
  std::vector<lapack_int> ifail(n);
  lapack_int info = LAPACKE_dsbgvx(
      LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', 'I', 'L', n, kd_a, kd_m, ab.data(),
      kd_a + 1, bb.data(), kd_m + 1, q.data(), n, 0.0, 0.0, il, iu, 2.0 * LAPACKE_dlamch('S'),
      &found, w.data(), z.data(), n, ifail.data());
  if (info != 0)
    throw std::runtime_error("dsbgvx failed, info = " + std::to_string(info));
  PencilSolution sol;
  sol.values = w.head(found);
  if (want_vectors) sol.vectors = z.leftCols(found).cast<Complex>();
  return sol;
}

PencilSolution lanczos_lowest(const SparseC& a, const SparseC& m, int k, double sigma,
                              double res_tol) {
  const int n = static_cast<int>(a.rows());
  k = std::min(k, n);
  std::mt19937_64 rng(0xC0FFEE);

  for (int attempt = 0; attempt < 4; ++attempt) {
    SparseC shifted = a - Complex(sigma) * m;
    shifted.makeCompressed();
    Eigen::SparseLU<SparseC> lu;
    lu.compute(shifted);
    if (lu.info() != Eigen::Success) {
      sigma = sigma * 2.0 - 1.0;  // sigma hit an eigenvalue; nudge and retry
      continue;
    }

    const int steps = std::min(n, std::max(4 * k + 40, 80) << attempt);
    Eigen::MatrixXcd v(n, steps + 1);
    Eigen::VectorXd alpha(steps), beta(steps);

    Eigen::VectorXcd q = random_complex_vector(n, rng);
    q /= std::sqrt(std::real(q.dot(m * q)));
    v.col(0) = q;
    int used = steps;
    for (int j = 0; j < steps; ++j) {
      Eigen::VectorXcd w = lu.solve(m * v.col(j));
      // full reorthogonalization in the M-inner product, twice
      for (int pass = 0; pass < 2; ++pass)
        for (int i = 0; i <= j; ++i) {
          const Complex c = v.col(i).dot(m * w);
          if (pass == 0 && i == j) alpha(j) = std::real(c);
          w -= c * v.col(i);
        }
      const double nb = std::sqrt(std::abs(std::real(w.dot(m * w))));
      beta(j) = nb;
      if (nb < 1e-13 || j + 1 == steps) {
        used = j + 1;
        break;
      }
      v.col(j + 1) = w / nb;
    }

    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(used, used);
    for (int j = 0; j < used; ++j) {
      tri(j, j) = alpha(j);
      if (j + 1 < used) tri(j, j + 1) = tri(j + 1, j) = beta(j);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);

    // theta = 1/(lambda - sigma); spectrum below sigma would appear as
    // negative theta -- restart with a lower shift if that happens.
    std::vector<std::pair<double, int>> ritz;
    bool below = false;
    for (int i = 0; i < used; ++i) {
      const double theta = es.eigenvalues()(i);
      if (theta < -1e-8) below = true;
      if (theta > 1e-14) ritz.emplace_back(sigma + 1.0 / theta, i);
    }
    if (below) {
      sigma = sigma * 4.0 - 1.0;
      continue;
    }
    std::sort(ritz.begin(), ritz.end());
    if (static_cast<int>(ritz.size()) < k) {
      sigma = sigma * 2.0 - 1.0;
      continue;
    }

    PencilSolution sol;
    sol.values.resize(k);
    sol.vectors.resize(n, k);
    double worst = 0.0;
    const double scale = Eigen::MatrixXcd(a).cwiseAbs().rowwise().sum().maxCoeff();
    for (int i = 0; i < k; ++i) {
      sol.values(i) = ritz[i].first;
      Eigen::VectorXcd x = v.leftCols(used) * es.eigenvectors().col(ritz[i].second);
      x /= std::sqrt(std::real(x.dot(m * x)));
      sol.vectors.col(i) = x;
      const double res = (a * x - Complex(sol.values(i)) * (m * x)).norm() / scale;
      worst = std::max(worst, res);
    }
    if (worst > res_tol && used < n) continue;  // grow the Krylov space
    return sol;
  }
  throw std::runtime_error("lanczos_lowest: no convergence (shift retries exhausted)");
}

double spectral_norm(const Eigen::MatrixXcd& a) {
  if (a.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(a).singularValues()(0);
}

Eigen::MatrixXcd orthonormal_range(const Eigen::MatrixXcd& x, double rel_cutoff) {
  if (x.cols() == 0) return Eigen::MatrixXcd(x.rows(), 0);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(x, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > rel_cutoff * s(0)) ++rank;
  return svd.matrixU().leftCols(rank);
}

int bandwidth(const SparseC& a, double drop) {
  int kd = 0;
  for (int j = 0; j < a.outerSize(); ++j)
    for (SparseC::InnerIterator it(a, j); it; ++it)
      if (std::abs(it.value()) > drop)
        kd = std::max(kd, std::abs(static_cast<int>(it.row() - it.col())));
  return kd;
}

double max_imag(const SparseC& a) {
  double m = 0.0;
  for (int j = 0; j < a.outerSize(); ++j)
    for (SparseC::InnerIterator it(a, j); it; ++it)
      m = std::max(m, std::abs(std::imag(it.value())));
  return m;
}

Eigen::VectorXcd random_complex_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v(i) = Complex(g(rng), g(rng));
  return v;
}

Eigen::MatrixXcd random_unitary(int n, std::mt19937_64& rng) {
  Eigen::MatrixXcd a(n, n);
  for (int j = 0; j < n; ++j) a.col(j) = random_complex_vector(n, rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  Eigen::MatrixXcd q = qr.householderQ();
  // fix the phase ambiguity so results are reproducible
  Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    q.col(j) *= d / std::abs(d);
  }
  return q;
}

Eigen::MatrixXcd random_hermitian(int n, std::mt19937_64& rng) {
  Eigen::MatrixXcd a(n, n);
  for (int j = 0; j < n; ++j) a.col(j) = random_complex_vector(n, rng);
  return 0.5 * (a + a.adjoint());
}

}  // namespace saext::linalg
