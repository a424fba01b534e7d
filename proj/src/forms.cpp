#include "saext/forms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>

namespace saext {

namespace {

constexpr double kPi = std::numbers::pi;
using linalg::SparseC;
using Triplets = std::vector<Eigen::Triplet<Complex>>;

SparseC to_complex(const Eigen::SparseMatrix<double>& a) {
  return a.cast<Complex>();
}

// Null-space basis of a small-rank constraint matrix by Gauss elimination
// with full pivoting; columns stay sparse (1 + rank nonzeros at most).
SparseC constraint_nullspace(Eigen::MatrixXcd r, double rel_tol = 1e-10) {
  const int rows = static_cast<int>(r.rows());
  const int nd = static_cast<int>(r.cols());
  const double scale = rows > 0 ? r.cwiseAbs().maxCoeff() : 0.0;

  std::vector<int> pivot_row, pivot_col;
  std::vector<bool> row_used(rows, false), col_used(nd, false);
  if (scale > 0.0) {
    for (int step = 0; step < rows; ++step) {
      int pi = -1, pj = -1;
      double best = rel_tol * scale;
      for (int i = 0; i < rows; ++i) {
        if (row_used[i]) continue;
        for (int j = 0; j < nd; ++j)
          if (std::abs(r(i, j)) > best) {
            best = std::abs(r(i, j));
            pi = i;
            pj = j;
          }
      }
      if (pi < 0) break;
      r.row(pi) /= r(pi, pj);
      for (int i = 0; i < rows; ++i)
        if (i != pi && std::abs(r(i, pj)) > 0.0) r.row(i) -= r(i, pj) * r.row(pi);
      row_used[pi] = true;
      col_used[pj] = true;
      pivot_row.push_back(pi);
      pivot_col.push_back(pj);
      if (r.cwiseAbs().maxCoeff() > 1e6 * scale)
        throw std::runtime_error("constraint elimination: ill-conditioned pivot growth");
    }
  }

  const int rank = static_cast<int>(pivot_row.size());
  Triplets t;
  int col = 0;
  for (int j = 0; j < nd; ++j) {
    if (col_used[j]) continue;
    t.emplace_back(j, col, Complex(1.0));
    for (int p = 0; p < rank; ++p) {
      const Complex c = r(pivot_row[p], j);
      if (std::abs(c) > 0.0) t.emplace_back(pivot_col[p], col, -c);
    }
    ++col;
  }
  SparseC b(nd, nd - rank);
  b.setFromTriplets(t.begin(), t.end());
  return b;
}

bool is_mode_diagonal(const Eigen::MatrixXcd& a, const TruncatedBoundarySpace& space,
                      double tol = 1e-11) {
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (space.mode_of(i) != space.mode_of(j) && std::abs(a(i, j)) > tol) return false;
  return true;
}

AssembledBlock assemble_one(const BulkDiscretization& disc, std::vector<int> disc_blocks,
                            const Eigen::MatrixXcd& a_u, const Eigen::MatrixXcd& p_w) {
  AssembledBlock blk;
  blk.disc_blocks = std::move(disc_blocks);

  int nd = 0, nb = 0;
  for (int di : blk.disc_blocks) {
    nd += disc.blocks[di].nd;
    nb += static_cast<int>(disc.blocks[di].boundary_indices.size());
  }
  blk.nd = nd;

  // stacked trace and owned boundary indices
  std::vector<int> owned;
  Triplets tt, ts, tm;
  int off = 0, row = 0;
  for (int di : blk.disc_blocks) {
    const auto& b = disc.blocks[di];
    for (int j = 0; j < b.trace.outerSize(); ++j)
      for (Eigen::SparseMatrix<double>::InnerIterator it(b.trace, j); it; ++it)
        tt.emplace_back(row + static_cast<int>(it.row()), off + static_cast<int>(it.col()),
                        Complex(it.value()));
    for (int bi : b.boundary_indices) owned.push_back(bi);
    row += static_cast<int>(b.trace.rows());
    for (int j = 0; j < b.stiffness.outerSize(); ++j)
      for (Eigen::SparseMatrix<double>::InnerIterator it(b.stiffness, j); it; ++it)
        ts.emplace_back(off + static_cast<int>(it.row()), off + static_cast<int>(it.col()),
                        Complex(it.value()));
    for (int j = 0; j < b.mass.outerSize(); ++j)
      for (Eigen::SparseMatrix<double>::InnerIterator it(b.mass, j); it; ++it)
        tm.emplace_back(off + static_cast<int>(it.row()), off + static_cast<int>(it.col()),
                        Complex(it.value()));
    off += b.nd;
  }
  blk.trace.resize(nb, nd);
  blk.trace.setFromTriplets(tt.begin(), tt.end());
  blk.m_full.resize(nd, nd);
  blk.m_full.setFromTriplets(tm.begin(), tm.end());

  blk.coupling.resize(nb, nb);
  Eigen::MatrixXcd p_w_sub(nb, nb);
  for (int i = 0; i < nb; ++i)
    for (int j = 0; j < nb; ++j) {
      blk.coupling(i, j) = -a_u(owned[i], owned[j]);
      p_w_sub(i, j) = p_w(owned[i], owned[j]);
    }

  SparseC q(nd, nd);
  q.setFromTriplets(ts.begin(), ts.end());
  const SparseC coupling_term =
      (blk.trace.adjoint() * blk.coupling.sparseView() * blk.trace).pruned();
  blk.q_full = (q + coupling_term).pruned(1e-300, 1.0);

  // constraint P_W gamma(Phi) = 0 restricted to the owned boundary rows
  const Eigen::MatrixXcd constraint = p_w_sub * Eigen::MatrixXcd(blk.trace);
  blk.b = constraint_nullspace(constraint);
  blk.ndr = static_cast<int>(blk.b.cols());
  blk.q_red = (blk.b.adjoint() * blk.q_full * blk.b).pruned(1e-300, 1.0);
  blk.m_red = (blk.b.adjoint() * blk.m_full * blk.b).pruned(1e-300, 1.0);
  // enforce exact Hermitian symmetry of the reduced pencil
  blk.q_red = SparseC(0.5 * (SparseC(blk.q_red.adjoint()) + blk.q_red));
  blk.m_red = SparseC(0.5 * (SparseC(blk.m_red.adjoint()) + blk.m_red));
  return blk;
}

struct BlockEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;  // reduced coordinates
  Eigen::VectorXd residuals;
};

double inf_norm(const SparseC& a) {
  Eigen::VectorXd rowsum = Eigen::VectorXd::Zero(a.rows());
  for (int j = 0; j < a.outerSize(); ++j)
    for (SparseC::InnerIterator it(a, j); it; ++it) rowsum(it.row()) += std::abs(it.value());
  return rowsum.size() ? rowsum.maxCoeff() : 0.0;
}

// k lowest eigenpairs of one reduced pencil; k < 0 means all values, no vectors.
BlockEigen solve_block(const AssembledBlock& blk, int k) {
  BlockEigen out;
  const int n = blk.ndr;
  if (n == 0) return out;
  const bool want_vectors = k >= 0;
  const int count = want_vectors ? std::min(k, n) : n;

  const bool realish = linalg::max_imag(blk.q_red) < 1e-12 && linalg::max_imag(blk.m_red) < 1e-12;
  const int kd_a = linalg::bandwidth(blk.q_red);
  const int kd_m = linalg::bandwidth(blk.m_red);

  linalg::PencilSolution sol;
  if (realish && kd_a <= 8 && kd_m <= 8) {
    sol = linalg::banded_real_pencil(blk.q_red.real(), blk.m_red.real(), kd_a, kd_m, 1, count,
                                     want_vectors);
  } else if (n <= 800) {
    sol = linalg::dense_hermitian_pencil(Eigen::MatrixXcd(blk.q_red),
                                         Eigen::MatrixXcd(blk.m_red), want_vectors);
    sol.values.conservativeResize(count);
    if (want_vectors) sol.vectors.conservativeResize(Eigen::NoChange, count);
  } else if (want_vectors) {
    const double sigma = -1.0 - 50.0 * blk.coupling.cwiseAbs().maxCoeff();
    sol = linalg::lanczos_lowest(blk.q_red, blk.m_red, count, sigma);
  } else {
    throw std::runtime_error(
        "solve_block: full spectrum of a large non-banded complex pencil is not supported");
  }

  out.values = sol.values;
  if (want_vectors) {
    out.vectors = sol.vectors;
    out.residuals.resize(sol.values.size());
    const double scale = inf_norm(blk.q_red) + std::abs(sol.values.size() ? sol.values(0) : 0.0);
    for (int i = 0; i < sol.values.size(); ++i) {
      const Eigen::VectorXcd y = sol.vectors.col(i);
      out.residuals(i) =
          (blk.q_red * y - Complex(sol.values(i)) * (blk.m_red * y)).norm() / (scale * y.norm());
    }
  }
  return out;
}

}  // namespace

double FormAssembly::min_eigenvalue() const {
  if (!min_eig_) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& blk : blocks) {
      if (blk.ndr == 0) continue;
      const int n = blk.ndr;
      const bool realish =
          linalg::max_imag(blk.q_red) < 1e-12 && linalg::max_imag(blk.m_red) < 1e-12;
      const int kd_a = linalg::bandwidth(blk.q_red);
      const int kd_m = linalg::bandwidth(blk.m_red);
      if (realish && kd_a <= 8 && kd_m <= 8) {
        m = std::min(m, linalg::banded_real_pencil(blk.q_red.real(), blk.m_red.real(), kd_a,
                                                   kd_m, 1, 1, false)
                            .values(0));
      } else if (n <= 800) {
        m = std::min(m, linalg::dense_hermitian_pencil(Eigen::MatrixXcd(blk.q_red),
                                                       Eigen::MatrixXcd(blk.m_red), false)
                            .values(0));
      } else {
        const double sigma = -1.0 - 50.0 * blk.coupling.cwiseAbs().maxCoeff();
        m = std::min(m, linalg::lanczos_lowest(blk.q_red, blk.m_red, 1, sigma).values(0));
      }
    }
    min_eig_ = m;
  }
  return *min_eig_;
}

double FormAssembly::lower_bound() const { return std::max(0.0, -min_eigenvalue()); }

FormAssembly assemble_form(std::shared_ptr<const BulkDiscretization> disc,
                           const BoundaryUnitary& u, double eps_gap, double delta_min) {
  if (!(u.space == disc->boundary))
    throw std::invalid_argument("assemble_form: boundary space mismatch");

  FormAssembly fa;
  fa.disc = disc;
  fa.u = u;
  fa.gap = detect_gap(u, eps_gap, delta_min);
  fa.a_u = partial_cayley(u, fa.gap);
  fa.mode_diagonal = is_mode_diagonal(fa.a_u.matrix, u.space) &&
                     is_mode_diagonal(fa.gap.p_w, u.space);

  if (fa.mode_diagonal) {
    for (size_t i = 0; i < disc->blocks.size(); ++i)
      fa.blocks.push_back(
          assemble_one(*disc, {static_cast<int>(i)}, fa.a_u.matrix, fa.gap.p_w));
  } else {
    std::vector<int> all(disc->blocks.size());
    std::iota(all.begin(), all.end(), 0);
    fa.blocks.push_back(assemble_one(*disc, all, fa.a_u.matrix, fa.gap.p_w));
  }
  return fa;
}

SpectrumResult solve_spectrum(const FormAssembly& assembly, int k) {
  struct Entry {
    double value;
    int blk;
    int pos;
  };
  std::vector<Entry> entries;
  std::vector<BlockEigen> solved(assembly.blocks.size());
  for (size_t bi = 0; bi < assembly.blocks.size(); ++bi) {
    solved[bi] = solve_block(assembly.blocks[bi], std::min(k, assembly.blocks[bi].ndr));
    for (int i = 0; i < solved[bi].values.size(); ++i)
      entries.push_back({solved[bi].values(i), static_cast<int>(bi), i});
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.value < b.value; });
  const int total = std::min<int>(k, static_cast<int>(entries.size()));

  SpectrumResult res;
  res.eigenvalues.resize(total);
  res.residuals.resize(total);
  res.vectors = Eigen::MatrixXcd::Zero(assembly.disc->total_dof, total);
  for (int i = 0; i < total; ++i) {
    const auto& e = entries[i];
    const auto& blk = assembly.blocks[e.blk];
    res.eigenvalues(i) = e.value;
    res.residuals(i) = solved[e.blk].residuals(e.pos);
    res.source_block.push_back(e.blk);
    const Eigen::VectorXcd x = blk.b * solved[e.blk].vectors.col(e.pos);
    int off = 0;
    for (int di : blk.disc_blocks) {
      res.vectors.col(i).segment(assembly.disc->offsets[di], assembly.disc->blocks[di].nd) =
          x.segment(off, assembly.disc->blocks[di].nd);
      off += assembly.disc->blocks[di].nd;
    }
  }
  return res;
}

Eigen::VectorXd full_spectrum(const FormAssembly& assembly) {
  std::vector<double> all;
  for (const auto& blk : assembly.blocks) {
    const BlockEigen be = solve_block(blk, -1);
    for (int i = 0; i < be.values.size(); ++i) all.push_back(be.values(i));
  }
  std::sort(all.begin(), all.end());
  return Eigen::Map<Eigen::VectorXd>(all.data(), static_cast<Eigen::Index>(all.size()));
}

// -------- oracles --------

namespace {

double bisect(const std::function<double(double)>& f, double a, double b) {
  double fa = f(a), fb = f(b);
  if (fa * fb > 0.0) throw std::runtime_error("oracle bisection: bracket lost");
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0.0 || (b - a) < 1e-15 * std::max(1.0, std::abs(m))) return m;
    if (fa * fm <= 0.0) {
      b = m;
      fb = fm;
    } else {
      a = m;
      fa = fm;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

std::vector<double> robin_oracle_interval(double beta, int count) {
  if (std::abs(std::cos(beta / 2.0)) < 1e-12)
    throw std::invalid_argument("robin_oracle_interval: beta too close to pi");
  const double t = std::tan(beta / 2.0);
  std::vector<double> lam;

  if (t < 0.0) {
    // bound states: lambda = -kappa^2 with (kappa^2+t^2) sinh k + 2 t k cosh k = 0
    auto g = [&](double kp) {
      return (kp * kp + t * t) * std::tanh(kp) + 2.0 * t * kp;
    };
    const double kmax = std::abs(t) + 6.0;
    const int grid = 4000;
    double prev = g(1e-9);
    for (int i = 1; i <= grid; ++i) {
      const double kp = 1e-9 + (kmax - 1e-9) * i / grid;
      const double cur = g(kp);
      if (prev * cur < 0.0) {
        const double root = bisect(g, 1e-9 + (kmax - 1e-9) * (i - 1) / grid, kp);
        lam.push_back(-root * root);
      }
      prev = cur;
    }
    std::sort(lam.begin(), lam.end());
  }

  auto f = [&](double kk) {
    return (t * t - kk * kk) * std::sin(kk) + 2.0 * t * kk * std::cos(kk);
  };
  // one positive root per pi-interval once brackets are scanned finely
  const double step = kPi / 64.0;
  double a = 1e-9;
  double fa = f(a);
  while (static_cast<int>(lam.size()) < count) {
    const double b = a + step;
    const double fb = f(b);
    if (fa * fb < 0.0) {
      const double k = bisect(f, a, b);
      if (k > 1e-8) lam.push_back(k * k);
    }
    a = b;
    fa = fb;
  }
  lam.resize(count);
  return lam;
}

std::vector<double> quasiperiodic_oracle_interval(double alpha, int count) {
  std::vector<double> lam;
  for (int j = -count - 2; j <= count + 2; ++j) {
    const double k = (2.0 * kPi * j + alpha) / 2.0;
    lam.push_back(k * k);
  }
  std::sort(lam.begin(), lam.end());
  lam.resize(count);
  return lam;
}

std::vector<double> legendre_oracle_hemisphere(HemisphereBC kind, int mode_cutoff, int count) {
  std::vector<double> lam;
  const int parity = (kind == HemisphereBC::Dirichlet) ? 1 : 0;
  for (int m = -mode_cutoff; m <= mode_cutoff; ++m)
    for (int l = std::abs(m); l <= std::abs(m) + 2 * count + 2; ++l)
      if ((l + std::abs(m)) % 2 == parity) lam.push_back(double(l) * (l + 1));
  std::sort(lam.begin(), lam.end());
  lam.resize(count);
  return lam;
}

}  // namespace saext
