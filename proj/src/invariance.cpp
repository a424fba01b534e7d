#include "saext/invariance.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace saext {

namespace {

linalg::SparseC global_mass(const BulkDiscretization& disc) {
  std::vector<Eigen::Triplet<Complex>> t;
  for (size_t b = 0; b < disc.blocks.size(); ++b) {
    const int off = disc.offsets[b];
    for (int j = 0; j < disc.blocks[b].mass.outerSize(); ++j)
      for (Eigen::SparseMatrix<double>::InnerIterator it(disc.blocks[b].mass, j); it; ++it)
        t.emplace_back(off + static_cast<int>(it.row()), off + static_cast<int>(it.col()),
                       Complex(it.value()));
  }
  linalg::SparseC m(disc.total_dof, disc.total_dof);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

// stacked local coordinates of an assembled block <-> global vector
Eigen::VectorXcd gather(const FormAssembly& fa, const AssembledBlock& blk,
                        const Eigen::VectorXcd& global) {
  Eigen::VectorXcd x(blk.nd);
  int off = 0;
  for (int di : blk.disc_blocks) {
    x.segment(off, fa.disc->blocks[di].nd) =
        global.segment(fa.disc->offsets[di], fa.disc->blocks[di].nd);
    off += fa.disc->blocks[di].nd;
  }
  return x;
}

void scatter(const FormAssembly& fa, const AssembledBlock& blk, const Eigen::VectorXcd& x,
             Eigen::VectorXcd& global) {
  int off = 0;
  for (int di : blk.disc_blocks) {
    global.segment(fa.disc->offsets[di], fa.disc->blocks[di].nd) =
        x.segment(off, fa.disc->blocks[di].nd);
    off += fa.disc->blocks[di].nd;
  }
}

double q_value(const FormAssembly& fa, const Eigen::VectorXcd& global) {
  double q = 0.0;
  for (const auto& blk : fa.blocks) {
    const Eigen::VectorXcd x = gather(fa, blk, global);
    q += std::real(x.dot(blk.q_full * x));
  }
  return q;
}

}  // namespace

InvarianceReport invariance_spectral_check(const SpectrumResult& spectrum,
                                           const FormAssembly& assembly, const BulkRep& rep,
                                           double cluster_rel_tol, double tol) {
  InvarianceReport out;
  const int k = static_cast<int>(spectrum.eigenvalues.size());
  if (k == 0) return out;
  const linalg::SparseC m = global_mass(*assembly.disc);

  int total_red = 0;
  for (const auto& blk : assembly.blocks) total_red += blk.ndr;

  // cluster boundaries by relative gaps
  std::vector<std::pair<int, int>> ranges;
  int start = 0;
  for (int i = 1; i <= k; ++i) {
    if (i == k || spectrum.eigenvalues(i) - spectrum.eigenvalues(i - 1) >
                      cluster_rel_tol * std::max(1.0, std::abs(spectrum.eigenvalues(i)))) {
      ranges.emplace_back(start, i);
      start = i;
    }
  }
  // the last cluster may be truncated by the eigenvalue count
  if (k < total_red && ranges.size() > 1) ranges.pop_back();

  for (auto [b, e] : ranges) {
    ClusterInvariance ci;
    ci.size = e - b;
    ci.eigenvalue = spectrum.eigenvalues.segment(b, e - b).mean();
    const Eigen::MatrixXcd x = spectrum.vectors.middleCols(b, e - b);  // M-orthonormal
    for (int g = 0; g < rep.group.size(); ++g) {
      Eigen::MatrixXcd y(x.rows(), x.cols());
      for (int j = 0; j < x.cols(); ++j) y.col(j) = rep.apply(g, x.col(j));
      const Eigen::MatrixXcd coef = x.adjoint() * (m * y);
      const Eigen::MatrixXcd r = y - x * coef;
      const Eigen::MatrixXcd gram = r.adjoint() * (m * r);
      const double res = std::sqrt(std::max(0.0, linalg::spectral_norm(gram)));
      ci.residual_per_element.push_back(res);
      out.max_residual = std::max(out.max_residual, res);
    }
    out.clusters.push_back(std::move(ci));
  }
  out.pass = out.max_residual <= tol;
  return out;
}

BulkSectors bulk_isotypic_sectors(const BulkRep& rep, double cluster_tol) {
  const auto& disc = *rep.disc;
  const int ng = rep.group.size();

  struct Piece {
    std::string label;
    int block;
    Eigen::MatrixXcd basis;
  };
  std::vector<Piece> pieces;

  auto label_of = [&](const std::vector<Complex>& chars) {
    std::ostringstream os;
    os.precision(6);
    os << std::fixed;
    for (const Complex& c : chars) {
      double re = std::real(c), im = std::imag(c);
      if (std::abs(re) < 5e-7) re = 0.0;
      if (std::abs(im) < 5e-7) im = 0.0;
      os << re << (im < 0 ? "-" : "+") << std::abs(im) << "i;";
    }
    return os.str();
  };

  for (size_t bi = 0; bi < disc.blocks.size(); ++bi) {
    const int nd = disc.blocks[bi].nd;
    bool pure_phase = true;
    std::vector<Complex> phases(ng);
    for (int g = 0; g < ng && pure_phase; ++g) {
      const auto& a = rep.actions[g][bi];
      for (int i = 0; i < nd; ++i)
        if (a.perm(i) != i || std::abs(a.phase(i) - a.phase(0)) > 1e-14) {
          pure_phase = false;
          break;
        }
      phases[g] = a.phase(0);
    }
    if (pure_phase) {
      pieces.push_back({label_of(phases), static_cast<int>(bi),
                        Eigen::MatrixXcd::Identity(nd, nd)});
      continue;
    }
    if (nd > 1500)
      throw std::runtime_error("bulk_isotypic_sectors: block too large for dense decomposition");
    std::vector<Eigen::MatrixXcd> dense;
    for (int g = 0; g < ng; ++g) dense.push_back(rep.actions[g][bi].dense());
    for (const auto& c : linalg::joint_eigenspaces(dense, cluster_tol)) {
      // verify the cluster really is scalar for every element
      for (int g = 0; g < ng; ++g) {
        const Eigen::MatrixXcd r = dense[g] * c.basis - c.values[g] * c.basis;
        if (r.cwiseAbs().maxCoeff() > 1e-8)
          throw std::runtime_error("bulk_isotypic_sectors: block action is not abelian");
      }
      pieces.push_back({label_of(c.values), static_cast<int>(bi), c.basis});
    }
  }

  BulkSectors out;
  for (const auto& p : pieces) {
    int idx = -1;
    for (size_t s = 0; s < out.labels.size(); ++s)
      if (out.labels[s] == p.label) idx = static_cast<int>(s);
    if (idx < 0) {
      out.labels.push_back(p.label);
      out.block_basis.emplace_back(disc.blocks.size());
      for (size_t b = 0; b < disc.blocks.size(); ++b)
        out.block_basis.back()[b] = Eigen::MatrixXcd(disc.blocks[b].nd, 0);
      idx = static_cast<int>(out.labels.size()) - 1;
    }
    auto& slot = out.block_basis[idx][p.block];
    Eigen::MatrixXcd merged(slot.rows(), slot.cols() + p.basis.cols());
    merged << slot, p.basis;
    slot = merged;
  }
  return out;
}

SectorSpectraResult sector_spectra(const FormAssembly& assembly, const BulkSectors& sectors,
                                   double rel_tol) {
  SectorSpectraResult out;
  out.labels = sectors.labels;
  const int ns = static_cast<int>(sectors.labels.size());
  std::vector<std::vector<double>> vals(ns);

  for (const auto& blk : assembly.blocks) {
    const Eigen::MatrixXcd bdense(blk.b);
    int rank_sum = 0;
    for (int s = 0; s < ns; ++s) {
      // sector projector on this pencil's stacked coordinates
      Eigen::MatrixXcd pb = Eigen::MatrixXcd::Zero(blk.nd, bdense.cols());
      int off = 0;
      for (int di : blk.disc_blocks) {
        const auto& x = sectors.block_basis[s][di];
        const int nd = assembly.disc->blocks[di].nd;
        if (x.cols() > 0)
          pb.middleRows(off, nd) = x * (x.adjoint() * bdense.middleRows(off, nd));
        off += nd;
      }
      const Eigen::MatrixXcd c = linalg::orthonormal_range(pb, 1e-9);
      rank_sum += static_cast<int>(c.cols());
      if (c.cols() == 0) continue;
      const Eigen::MatrixXcd qc = c.adjoint() * (blk.q_full * c);
      const Eigen::MatrixXcd mc = c.adjoint() * (blk.m_full * c);
      const auto sol = linalg::dense_hermitian_pencil(0.5 * (qc + qc.adjoint()),
                                                      0.5 * (mc + mc.adjoint()), false);
      for (int i = 0; i < sol.values.size(); ++i) vals[s].push_back(sol.values(i));
    }
    if (rank_sum != blk.ndr)
      throw std::runtime_error("sector_spectra: sector ranks do not exhaust the constraint space");
  }

  std::vector<double> merged;
  for (int s = 0; s < ns; ++s) {
    std::sort(vals[s].begin(), vals[s].end());
    out.sector_eigenvalues.emplace_back(
        Eigen::Map<Eigen::VectorXd>(vals[s].data(), static_cast<Eigen::Index>(vals[s].size())));
    merged.insert(merged.end(), vals[s].begin(), vals[s].end());
  }
  std::sort(merged.begin(), merged.end());

  const Eigen::VectorXd full = full_spectrum(assembly);
  if (static_cast<Eigen::Index>(merged.size()) != full.size())
    throw std::runtime_error("sector_spectra: eigenvalue count mismatch against full spectrum");
  const double scale = std::max(1.0, full.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < full.size(); ++i)
    out.merge_residual = std::max(out.merge_residual, std::abs(merged[i] - full(i)) / scale);
  out.merge_ok = out.merge_residual <= rel_tol;
  return out;
}

double form_norm_invariance_check(const FormAssembly& assembly, const BulkRep& rep,
                                  int n_samples, unsigned seed) {
  std::mt19937_64 rng(seed);
  const linalg::SparseC m = global_mass(*assembly.disc);
  const double bound = 1.0 + assembly.lower_bound();

  double worst = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(assembly.disc->total_dof);
    for (const auto& blk : assembly.blocks) {
      if (blk.ndr == 0) continue;
      const Eigen::VectorXcd x = blk.b * linalg::random_complex_vector(blk.ndr, rng);
      Eigen::VectorXcd tmp = Eigen::VectorXcd::Zero(assembly.disc->total_dof);
      scatter(assembly, blk, x, tmp);
      phi += tmp;
    }
    const double n2 = bound * std::real(phi.dot(m * phi)) + q_value(assembly, phi);
    for (int g = 0; g < rep.group.size(); ++g) {
      const Eigen::VectorXcd psi = rep.apply(g, phi);
      const double n2g = bound * std::real(psi.dot(m * psi)) + q_value(assembly, psi);
      worst = std::max(worst, std::abs(n2g - n2) / std::abs(n2));
    }
  }
  return worst;
}

double assembled_congruence_residual(const FormAssembly& assembly, const BulkRep& rep) {
  const int n = assembly.disc->total_dof;
  if (n > 2000)
    throw std::invalid_argument("assembled_congruence_residual: discretization too large");

  Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& blk : assembly.blocks) {
    const Eigen::MatrixXcd qf(blk.q_full);
    // map stacked local indices to global ones
    std::vector<int> glob;
    for (int di : blk.disc_blocks)
      for (int i = 0; i < assembly.disc->blocks[di].nd; ++i)
        glob.push_back(assembly.disc->offsets[di] + i);
    for (int i = 0; i < blk.nd; ++i)
      for (int j = 0; j < blk.nd; ++j) q(glob[i], glob[j]) += qf(i, j);
  }
  const Eigen::MatrixXcd m = Eigen::MatrixXcd(global_mass(*assembly.disc));

  double worst = 0.0;
  for (int g = 0; g < rep.group.size(); ++g) {
    Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(n, n);
    for (size_t b = 0; b < assembly.disc->blocks.size(); ++b) {
      const int off = assembly.disc->offsets[b];
      const int nd = assembly.disc->blocks[b].nd;
      v.block(off, off, nd, nd) = rep.actions[g][b].dense();
    }
    worst = std::max(worst, (v.adjoint() * q * v - q).cwiseAbs().maxCoeff());
    worst = std::max(worst, (v.adjoint() * m * v - m).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace saext
