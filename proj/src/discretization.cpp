#include "saext/discretization.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace saext {

namespace {
constexpr double kPi = std::numbers::pi;

using Triplets = std::vector<Eigen::Triplet<double>>;

// 1-D P1 mass/stiffness on a uniform grid with n cells of width h.
void assemble_uniform_p1(int n, double h, Eigen::SparseMatrix<double>& mass,
                         Eigen::SparseMatrix<double>& stiffness) {
  Triplets tm, ts;
  for (int e = 0; e < n; ++e) {
    const int a = e, b = e + 1;
    tm.emplace_back(a, a, h / 3.0);
    tm.emplace_back(b, b, h / 3.0);
    tm.emplace_back(a, b, h / 6.0);
    tm.emplace_back(b, a, h / 6.0);
    ts.emplace_back(a, a, 1.0 / h);
    ts.emplace_back(b, b, 1.0 / h);
    ts.emplace_back(a, b, -1.0 / h);
    ts.emplace_back(b, a, -1.0 / h);
  }
  mass.resize(n + 1, n + 1);
  stiffness.resize(n + 1, n + 1);
  mass.setFromTriplets(tm.begin(), tm.end());
  stiffness.setFromTriplets(ts.begin(), ts.end());
}

Eigen::SparseMatrix<double> point_trace(int nd, const std::vector<int>& nodes) {
  Triplets t;
  for (size_t r = 0; r < nodes.size(); ++r) t.emplace_back(static_cast<int>(r), nodes[r], 1.0);
  Eigen::SparseMatrix<double> g(static_cast<int>(nodes.size()), nd);
  g.setFromTriplets(t.begin(), t.end());
  return g;
}

void finalize(BulkDiscretization& d) {
  d.offsets.clear();
  int off = 0;
  for (const auto& b : d.blocks) {
    d.offsets.push_back(off);
    off += b.nd;
  }
  d.total_dof = off;
}

// 4-point Gauss-Legendre on [-1,1]
constexpr std::array<double, 4> kGx = {-0.8611363115940526, -0.3399810435848563,
                                       0.3399810435848563, 0.8611363115940526};
constexpr std::array<double, 4> kGw = {0.3478548451374538, 0.6521451548625461,
                                       0.6521451548625461, 0.3478548451374538};

}  // namespace

int BulkDiscretization::block_of_dof(int global) const {
  for (size_t i = 0; i < blocks.size(); ++i)
    if (global < offsets[i] + blocks[i].nd) return static_cast<int>(i);
  throw std::out_of_range("block_of_dof");
}

std::shared_ptr<BulkDiscretization> discretize_interval(int n_cells) {
  if (n_cells < 8) throw std::invalid_argument("discretize_interval: n_cells must be >= 8");
  auto d = std::make_shared<BulkDiscretization>();
  d->geometry = Geometry::Interval;
  d->label = "interval";
  d->boundary = TruncatedBoundarySpace{0, 2};  // formal 2-point boundary

  BulkBlock b;
  b.mode = 0;
  b.nd = n_cells + 1;
  assemble_uniform_p1(n_cells, 1.0 / n_cells, b.mass, b.stiffness);
  b.trace = point_trace(b.nd, {0, n_cells});
  b.boundary_indices = {d->boundary.index_of(0, 0), d->boundary.index_of(1, 0)};
  b.nodes = Eigen::VectorXd::LinSpaced(b.nd, 0.0, 1.0);
  d->blocks.push_back(std::move(b));
  finalize(*d);
  return d;
}

std::shared_ptr<BulkDiscretization> discretize_cylinder(int nx_cells, int mode_cutoff) {
  if (nx_cells < 8) throw std::invalid_argument("discretize_cylinder: nx_cells must be >= 8");
  if (mode_cutoff < 0) throw std::invalid_argument("discretize_cylinder: bad mode_cutoff");
  auto d = std::make_shared<BulkDiscretization>();
  d->geometry = Geometry::Cylinder;
  d->label = "cylinder";
  d->boundary = TruncatedBoundarySpace{mode_cutoff, 2};

  Eigen::SparseMatrix<double> mx, sx;
  assemble_uniform_p1(nx_cells, 2.0 / nx_cells, mx, sx);
  for (int m = -mode_cutoff; m <= mode_cutoff; ++m) {
    BulkBlock b;
    b.mode = m;
    b.nd = nx_cells + 1;
    b.mass = mx;
    b.stiffness = sx + (kPi * m) * (kPi * m) * mx;  // e^{i pi m y}, period 2
    b.trace = point_trace(b.nd, {0, nx_cells});
    b.boundary_indices = {d->boundary.index_of(0, m), d->boundary.index_of(1, m)};
    b.nodes = Eigen::VectorXd::LinSpaced(b.nd, -1.0, 1.0);
    d->blocks.push_back(std::move(b));
  }
  finalize(*d);
  return d;
}

std::shared_ptr<BulkDiscretization> discretize_hemisphere(int n_theta_cells, int mode_cutoff) {
  if (n_theta_cells < 16)
    throw std::invalid_argument("discretize_hemisphere: n_theta_cells must be >= 16");
  if (mode_cutoff < 0) throw std::invalid_argument("discretize_hemisphere: bad mode_cutoff");
  auto d = std::make_shared<BulkDiscretization>();
  d->geometry = Geometry::Hemisphere;
  d->label = "hemisphere";
  d->boundary = TruncatedBoundarySpace{mode_cutoff, 1};

  const double h = 0.5 * kPi / n_theta_cells;
  for (int m = -mode_cutoff; m <= mode_cutoff; ++m) {
    // m = 0: natural at the pole; m != 0: essential zero, node 0 dropped
    const int first = (m == 0) ? 0 : 1;
    const int nd = n_theta_cells + 1 - first;

    Triplets tm, ts;
    auto dof = [&](int node) { return node - first; };
    for (int e = 0; e < n_theta_cells; ++e) {
      const double t0 = e * h;
      std::array<int, 2> nodes = {e, e + 1};
      for (int gq = 0; gq < 4; ++gq) {
        const double theta = t0 + 0.5 * h * (1.0 + kGx[gq]);
        const double w = 0.5 * h * kGw[gq];
        const double st = std::sin(theta);
        const std::array<double, 2> phi = {(t0 + h - theta) / h, (theta - t0) / h};
        const std::array<double, 2> dphi = {-1.0 / h, 1.0 / h};
        for (int i = 0; i < 2; ++i) {
          if (nodes[i] < first) continue;
          for (int j = 0; j < 2; ++j) {
            if (nodes[j] < first) continue;
            tm.emplace_back(dof(nodes[i]), dof(nodes[j]), w * phi[i] * phi[j] * st);
            double sval = w * dphi[i] * dphi[j] * st;
            if (m != 0) sval += w * double(m) * double(m) * phi[i] * phi[j] / st;
            ts.emplace_back(dof(nodes[i]), dof(nodes[j]), sval);
          }
        }
      }
    }
    BulkBlock b;
    b.mode = m;
    b.nd = nd;
    b.mass.resize(nd, nd);
    b.stiffness.resize(nd, nd);
    b.mass.setFromTriplets(tm.begin(), tm.end());
    b.stiffness.setFromTriplets(ts.begin(), ts.end());
    b.trace = point_trace(nd, {nd - 1});  // equator value
    b.boundary_indices = {d->boundary.index_of(0, m)};
    b.nodes.resize(nd);
    for (int j = 0; j < nd; ++j) b.nodes(j) = (j + first) * h;
    d->blocks.push_back(std::move(b));
  }
  finalize(*d);
  return d;
}

Eigen::SparseMatrix<double> global_trace(const BulkDiscretization& disc) {
  Triplets t;
  for (size_t bi = 0; bi < disc.blocks.size(); ++bi) {
    const auto& b = disc.blocks[bi];
    for (int j = 0; j < b.trace.outerSize(); ++j)
      for (Eigen::SparseMatrix<double>::InnerIterator it(b.trace, j); it; ++it)
        t.emplace_back(b.boundary_indices[it.row()], disc.offsets[bi] + static_cast<int>(it.col()),
                       it.value());
  }
  Eigen::SparseMatrix<double> g(disc.boundary.dimension(), disc.total_dof);
  g.setFromTriplets(t.begin(), t.end());
  return g;
}

}  // namespace saext
