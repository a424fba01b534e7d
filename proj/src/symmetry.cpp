#include "saext/symmetry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "saext/linalg.hpp"

namespace saext {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return a;
}
}  // namespace

GroupModel GroupModel::finite(const Eigen::MatrixXi& table) {
  const int n = static_cast<int>(table.rows());
  if (table.cols() != n || n < 1) throw std::invalid_argument("GroupModel: bad table shape");
  GroupModel g;
  g.kind = Kind::Finite;
  g.table = table;

  // locate the identity and check the group laws
  g.identity = -1;
  for (int e = 0; e < n; ++e) {
    bool ok = true;
    for (int i = 0; i < n; ++i)
      if (table(e, i) != i || table(i, e) != i) ok = false;
    if (ok) {
      g.identity = e;
      break;
    }
  }
  if (g.identity < 0) throw std::invalid_argument("GroupModel: table has no identity");
  g.inverses.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      if (table(i, j) == g.identity && table(j, i) == g.identity) g.inverses[i] = j;
    if (g.inverses[i] < 0) throw std::invalid_argument("GroupModel: element has no inverse");
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (table(i, j) < 0 || table(i, j) >= n)
        throw std::invalid_argument("GroupModel: table entry out of range");
      for (int k = 0; k < n; ++k)
        if (table(table(i, j), k) != table(i, table(j, k)))
          throw std::invalid_argument("GroupModel: table is not associative");
    }
  return g;
}

GroupModel GroupModel::z2() {
  Eigen::MatrixXi t(2, 2);
  t << 0, 1, 1, 0;
  return finite(t);
}

GroupModel GroupModel::s3() {
  // elements: e, r, r^2, s, sr, sr^2 with r^3 = s^2 = e, s r s = r^-1
  auto pack = [](int flip, int rot) { return flip * 3 + rot; };
  Eigen::MatrixXi t(6, 6);
  for (int f1 = 0; f1 < 2; ++f1)
    for (int r1 = 0; r1 < 3; ++r1)
      for (int f2 = 0; f2 < 2; ++f2)
        for (int r2 = 0; r2 < 3; ++r2) {
          // (s^f1 r^r1)(s^f2 r^r2) = s^{f1+f2} r^{(-1)^{f2} r1 + r2}
          const int f = (f1 + f2) % 2;
          const int r = (((f2 ? -r1 : r1) + r2) % 3 + 3) % 3;
          t(pack(f1, r1), pack(f2, r2)) = pack(f, r);
        }
  return finite(t);
}

GroupModel GroupModel::sampled_circle(int count) {
  if (count < 2 || count % 2 != 0)
    throw std::invalid_argument("sampled_circle: count must be even and >= 2");
  std::vector<double> angles(count);
  for (int k = 0; k < count; ++k) angles[k] = kTwoPi * k / count;
  return sampled_circle(std::move(angles));
}

GroupModel GroupModel::sampled_circle(std::vector<double> angles) {
  GroupModel g;
  g.kind = Kind::SampledCircle;
  for (double& a : angles) a = wrap_angle(a);
  bool has_zero = false;
  for (double a : angles) {
    if (std::abs(a) < 1e-12 || std::abs(a - kTwoPi) < 1e-12) has_zero = true;
    bool has_neg = false;
    for (double b : angles)
      if (std::abs(wrap_angle(a + b)) < 1e-12 || std::abs(wrap_angle(a + b) - kTwoPi) < 1e-12)
        has_neg = true;
    if (!has_neg)
      throw std::invalid_argument("sampled_circle: angle set not closed under negation");
  }
  if (!has_zero) throw std::invalid_argument("sampled_circle: angle set must contain 0");
  g.angles = std::move(angles);
  return g;
}

double BoundaryRep::validation_residual() const {
  const int n = group.size();
  if (static_cast<int>(matrices.size()) != n)
    throw std::invalid_argument("BoundaryRep: matrix count mismatch");
  double worst = 0.0;
  for (const auto& v : matrices) {
    const Eigen::MatrixXcd r =
        v.adjoint() * v - Eigen::MatrixXcd::Identity(v.rows(), v.cols());
    worst = std::max(worst, r.cwiseAbs().maxCoeff());
  }
  if (group.kind == GroupModel::Kind::Finite) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const Eigen::MatrixXcd r = matrices[i] * matrices[j] - matrices[group.table(i, j)];
        worst = std::max(worst, r.cwiseAbs().maxCoeff());
      }
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double sum = wrap_angle(group.angles[i] + group.angles[j]);
        for (int k = 0; k < n; ++k)
          if (std::abs(wrap_angle(sum - group.angles[k])) < 1e-12 ||
              std::abs(wrap_angle(sum - group.angles[k]) - kTwoPi) < 1e-12) {
            const Eigen::MatrixXcd r = matrices[i] * matrices[j] - matrices[k];
            worst = std::max(worst, r.cwiseAbs().maxCoeff());
          }
      }
  }
  return worst;
}

Eigen::VectorXcd BlockAction::apply(const Eigen::VectorXcd& x) const {
  Eigen::VectorXcd y(x.size());
  for (int i = 0; i < x.size(); ++i) y(i) = phase(i) * x(perm(i));
  return y;
}

Eigen::MatrixXcd BlockAction::dense() const {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(perm.size(), perm.size());
  for (int i = 0; i < perm.size(); ++i) m(i, perm(i)) = phase(i);
  return m;
}

BlockAction BlockAction::identity(int n) {
  BlockAction a;
  a.perm = Eigen::VectorXi::LinSpaced(n, 0, n - 1);
  a.phase = Eigen::VectorXcd::Ones(n);
  return a;
}

Eigen::VectorXcd BulkRep::apply(int element, const Eigen::VectorXcd& global) const {
  Eigen::VectorXcd out(global.size());
  for (size_t b = 0; b < disc->blocks.size(); ++b) {
    const int off = disc->offsets[b];
    const int nd = disc->blocks[b].nd;
    out.segment(off, nd) = actions[element][b].apply(global.segment(off, nd));
  }
  return out;
}

double BulkRep::mass_unitarity_residual(int samples, unsigned seed) const {
  std::mt19937_64 rng(seed);
  // assemble the global sparse mass once
  std::vector<Eigen::Triplet<Complex>> t;
  for (size_t b = 0; b < disc->blocks.size(); ++b) {
    const int off = disc->offsets[b];
    for (int j = 0; j < disc->blocks[b].mass.outerSize(); ++j)
      for (Eigen::SparseMatrix<double>::InnerIterator it(disc->blocks[b].mass, j); it; ++it)
        t.emplace_back(off + static_cast<int>(it.row()), off + static_cast<int>(it.col()),
                       Complex(it.value()));
  }
  linalg::SparseC m(disc->total_dof, disc->total_dof);
  m.setFromTriplets(t.begin(), t.end());

  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXcd x = linalg::random_complex_vector(disc->total_dof, rng);
    Eigen::VectorXcd y = linalg::random_complex_vector(disc->total_dof, rng);
    const Complex ref = x.dot(m * y);
    for (size_t g = 0; g < actions.size(); ++g) {
      const Eigen::VectorXcd vx = apply(static_cast<int>(g), x);
      const Eigen::VectorXcd vy = apply(static_cast<int>(g), y);
      worst = std::max(worst, std::abs(vx.dot(m * vy) - ref) / (x.norm() * y.norm()));
    }
  }
  return worst;
}

std::pair<BulkRep, BoundaryRep> z2_cylinder_rep(std::shared_ptr<const BulkDiscretization> disc,
                                                const TruncatedBoundarySpace& bspace) {
  if (disc->geometry != Geometry::Cylinder)
    throw std::invalid_argument("z2_cylinder_rep: discretization is not a cylinder");
  if (!(disc->boundary == bspace))
    throw std::invalid_argument("z2_cylinder_rep: boundary space mismatch");

  const GroupModel g = GroupModel::z2();

  BulkRep bulk;
  bulk.group = g;
  bulk.disc = disc;
  bulk.actions.resize(2);
  for (const auto& blk : disc->blocks) {
    bulk.actions[0].push_back(BlockAction::identity(blk.nd));
    BlockAction refl = BlockAction::identity(blk.nd);
    for (int i = 0; i < blk.nd; ++i) refl.perm(i) = blk.nd - 1 - i;  // x -> -x
    bulk.actions[1].push_back(std::move(refl));
  }

  BoundaryRep bdry;
  bdry.group = g;
  bdry.space = bspace;
  const int dim = bspace.dimension();
  const int m = bspace.modes_per_component();
  bdry.matrices.push_back(Eigen::MatrixXcd::Identity(dim, dim));
  Eigen::MatrixXcd swap = Eigen::MatrixXcd::Zero(dim, dim);
  for (int i = 0; i < m; ++i) {
    swap(i, m + i) = 1.0;
    swap(m + i, i) = 1.0;
  }
  bdry.matrices.push_back(swap);
  return {std::move(bulk), std::move(bdry)};
}

BoundaryRep so2_boundary_rep(const TruncatedBoundarySpace& space, const GroupModel& circle) {
  if (circle.kind != GroupModel::Kind::SampledCircle)
    throw std::invalid_argument("so2_boundary_rep: needs a sampled circle");
  BoundaryRep rep;
  rep.group = circle;
  rep.space = space;
  for (double alpha : circle.angles) {
    Eigen::VectorXcd d(space.dimension());
    for (int i = 0; i < d.size(); ++i) d(i) = std::polar(1.0, -space.mode_of(i) * alpha);
    rep.matrices.emplace_back(d.asDiagonal());
  }
  return rep;
}

BulkRep so2_bulk_rep(std::shared_ptr<const BulkDiscretization> disc, const GroupModel& circle) {
  if (circle.kind != GroupModel::Kind::SampledCircle)
    throw std::invalid_argument("so2_bulk_rep: needs a sampled circle");
  BulkRep rep;
  rep.group = circle;
  rep.disc = disc;
  for (double alpha : circle.angles) {
    std::vector<BlockAction> acts;
    for (const auto& blk : disc->blocks) {
      BlockAction a = BlockAction::identity(blk.nd);
      a.phase.setConstant(std::polar(1.0, -blk.mode * alpha));
      acts.push_back(std::move(a));
    }
    rep.actions.push_back(std::move(acts));
  }
  return rep;
}

double trace_compatibility_residual(const BulkRep& bulk, const BoundaryRep& boundary) {
  if (bulk.group.size() != boundary.group.size())
    throw std::invalid_argument("trace_compatibility_residual: group size mismatch");
  const Eigen::SparseMatrix<double> gtr = global_trace(*bulk.disc);
  const Eigen::MatrixXcd gamma = Eigen::MatrixXd(gtr).cast<Complex>();

  double worst = 0.0;
  for (int g = 0; g < bulk.group.size(); ++g) {
    // Gamma V(g): column j of the product is phase_j-weighted column perm view
    Eigen::MatrixXcd gv = Eigen::MatrixXcd::Zero(gamma.rows(), gamma.cols());
    for (size_t b = 0; b < bulk.disc->blocks.size(); ++b) {
      const int off = bulk.disc->offsets[b];
      const auto& a = bulk.actions[g][b];
      for (int i = 0; i < a.perm.size(); ++i)
        gv.col(off + a.perm(i)) += a.phase(i) * gamma.col(off + i);
    }
    const Eigen::MatrixXcd vg = boundary.matrices[g] * gamma;
    worst = std::max(worst, (gv - vg).cwiseAbs().maxCoeff());
  }
  return worst;
}

CommutantCheck commutant_check(const BoundaryRep& rep, const BoundaryUnitary& u, double tol) {
  CommutantCheck out;
  for (const auto& v : rep.matrices) {
    const Eigen::MatrixXcd c = v * u.matrix - u.matrix * v;
    out.max_commutator = std::max(out.max_commutator, c.cwiseAbs().maxCoeff());
  }
  out.pass = out.max_commutator <= tol;
  return out;
}

BlockStructureReport block_structure_check(const BoundaryRep& rep, const GapReport& gap) {
  BlockStructureReport out;
  const Eigen::MatrixXcd& pw = gap.p_w;
  const Eigen::MatrixXcd pperp =
      Eigen::MatrixXcd::Identity(pw.rows(), pw.cols()) - pw;
  for (const auto& v : rep.matrices) {
    out.upper.push_back(linalg::spectral_norm(pw * v * pperp));
    out.lower.push_back(linalg::spectral_norm(pperp * v * pw));
    out.max_residual = std::max({out.max_residual, out.upper.back(), out.lower.back()});
  }
  return out;
}

namespace {

// orthonormal basis of { X : X v = v X for all v } via the nullspace of the
// stacked Hermitian PSD commutation operator on vectorized matrices.
std::vector<Eigen::MatrixXcd> commutant_basis(const std::vector<Eigen::MatrixXcd>& rep,
                                              double svd_cutoff, int* dim_out) {
  const int n = static_cast<int>(rep.front().rows());
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n * n, n * n);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  for (const auto& v : rep) {
    Eigen::MatrixXcd l = Eigen::MatrixXcd::Zero(n * n, n * n);
    // vec(vX - Xv) = (I (x) v - v^T (x) I) vec(X), column-major vec
    for (int b = 0; b < n; ++b) {
      l.block(b * n, b * n, n, n) += v;
      for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c) l(b * n + a, c * n + a) -= v(c, b);
    }
    h += l.adjoint() * l;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  const double top = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
  std::vector<Eigen::MatrixXcd> basis;
  for (int i = 0; i < n * n; ++i)
    if (es.eigenvalues()(i) < svd_cutoff * top) {
      basis.push_back(Eigen::Map<const Eigen::MatrixXcd>(es.eigenvectors().col(i).data(), n, n));
    }
  if (dim_out) *dim_out = static_cast<int>(basis.size());
  return basis;
}

}  // namespace

IsotypicDecomposition isotypic_decompose(const std::vector<Eigen::MatrixXcd>& rep,
                                         double svd_cutoff, unsigned seed) {
  if (rep.empty()) throw std::invalid_argument("isotypic_decompose: empty representation");
  const int n = static_cast<int>(rep.front().rows());

  IsotypicDecomposition out;
  const auto comm = commutant_basis(rep, svd_cutoff, &out.commutant_dimension);

  // center of the commutant: commutes with the rep AND with the commutant
  std::vector<Eigen::MatrixXcd> both = rep;
  for (const auto& c : comm) both.push_back(c);
  const auto center = commutant_basis(both, svd_cutoff, nullptr);

  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 8; ++attempt) {
    // generic Hermitian center element; its spectral projections are the
    // isotypic projections when the eigenvalues separate the center basis
    std::normal_distribution<double> g;
    Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(n, n);
    for (const auto& c : center) z += g(rng) * (c + c.adjoint()) + g(rng) * Complex(0, 1) * (c - c.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (z + z.adjoint()));

    std::vector<Eigen::MatrixXcd> projections;
    int i = 0;
    while (i < n) {
      int j = i;
      while (j + 1 < n && es.eigenvalues()(j + 1) - es.eigenvalues()(i) < 1e-6) ++j;
      const Eigen::MatrixXcd v = es.eigenvectors().middleCols(i, j - i + 1);
      projections.push_back(v * v.adjoint());
      i = j + 1;
    }
    if (static_cast<int>(projections.size()) != static_cast<int>(center.size())) continue;

    // validate: projections commute with the rep and resolve the identity
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(n, n);
    double worst = 0.0;
    for (const auto& p : projections) {
      sum += p;
      for (const auto& v : rep)
        worst = std::max(worst, (p * v - v * p).cwiseAbs().maxCoeff());
    }
    worst = std::max(worst,
                     (sum - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff());
    if (worst < 1e-7) {
      out.projections = std::move(projections);
      return out;
    }
  }
  throw std::runtime_error("isotypic_decompose: non-semisimple numerical degeneracy");
}

IsotypicDecomposition isotypic_decompose(const BoundaryRep& rep) {
  return isotypic_decompose(rep.matrices);
}

}  // namespace saext
