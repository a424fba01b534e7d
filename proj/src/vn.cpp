#include "saext/vn.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "saext/linalg.hpp"

namespace saext::vn {

namespace {

// binomial coefficients up to the degrees we ever produce (bump * poly = 7)
double binom(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

// exact integral of x^k e^{s x} over [0,1]
Complex ixe(int k, Complex s) {
  if (std::abs(s) < 1e-12) return Complex(1.0 / (k + 1));
  if (k == 0) return (std::exp(s) - 1.0) / s;
  return (std::exp(s) - double(k) * ixe(k - 1, s)) / s;
}

// exact L^2(0,1) inner product <f, g> = int conj(f) g
Complex inner(const Func1D& f, const Func1D& g) {
  Complex sum = 0.0;
  for (int k = 0; k < f.poly.size(); ++k)
    for (int l = 0; l < g.poly.size(); ++l)
      sum += std::conj(f.poly(k)) * g.poly(l) / double(k + l + 1);
  for (int k = 0; k < f.poly.size(); ++k)
    for (const auto& e : g.exps) sum += std::conj(f.poly(k)) * e.coef * ixe(k, e.mu);
  for (const auto& e : f.exps)
    for (int l = 0; l < g.poly.size(); ++l)
      sum += std::conj(e.coef) * g.poly(l) * ixe(l, std::conj(e.mu));
  for (const auto& a : f.exps)
    for (const auto& b : g.exps)
      sum += std::conj(a.coef) * b.coef * ixe(0, std::conj(a.mu) + b.mu);
  return sum;
}

}  // namespace

Complex Func1D::eval(double x) const {
  Complex v = 0.0;
  for (int k = static_cast<int>(poly.size()) - 1; k >= 0; --k) v = v * x + poly(k);
  for (const auto& e : exps) v += e.coef * std::exp(e.mu * x);
  return v;
}

Complex Func1D::deriv(double x) const {
  Complex v = 0.0;
  for (int k = static_cast<int>(poly.size()) - 1; k >= 1; --k)
    v = v * x + double(k) * poly(k);
  for (const auto& e : exps) v += e.coef * e.mu * std::exp(e.mu * x);
  return v;
}

Func1D Func1D::reflected() const {
  Func1D r;
  const int n = static_cast<int>(poly.size());
  r.poly = Eigen::VectorXcd::Zero(n);
  // x^k -> (1-x)^k = sum_j C(k,j) (-x)^j
  for (int k = 0; k < n; ++k)
    for (int j = 0; j <= k; ++j)
      r.poly(j) += poly(k) * binom(k, j) * ((j % 2) ? -1.0 : 1.0);
  for (const auto& e : exps) r.exps.push_back({e.coef * std::exp(e.mu), -e.mu});
  return r;
}

Complex lagrange_form(const Func1D& f, const Func1D& g) {
  auto at = [&](double x) {
    return std::conj(f.eval(x)) * g.deriv(x) - std::conj(f.deriv(x)) * g.eval(x);
  };
  return at(1.0) - at(0.0);
}

DeficiencyModel deficiency_basis(const std::string& tag) {
  if (tag != "interval_laplacian")
    throw std::invalid_argument("deficiency_basis: unknown tag " + tag);
  DeficiencyModel m;
  const double r = std::numbers::pi / 4.0;
  const Complex mu_p = std::polar(1.0, -r);  // mu^2 = -i, solves -u'' = i u
  const Complex mu_m = std::polar(1.0, r);   // mu^2 = +i, solves -u'' = -i u
  m.mu_plus = {mu_p, -mu_p};
  m.mu_minus = {mu_m, -mu_m};

  auto gram = [](const std::array<Complex, 2>& mu) {
    Eigen::Matrix2cd g;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) g(i, j) = ixe(0, std::conj(mu[i]) + mu[j]);
    return g;
  };
  m.gram_plus = gram(m.mu_plus);
  m.gram_minus = gram(m.mu_minus);

  // orthonormal frame by Cholesky Gram-Schmidt in lexical order: F = L^{-*}
  auto frame = [](const Eigen::Matrix2cd& g) {
    const Eigen::Matrix2cd l = g.llt().matrixL();
    return Eigen::Matrix2cd(l.adjoint().triangularView<Eigen::Upper>().solve(
        Eigen::Matrix2cd::Identity()));
  };
  m.frame_plus = frame(m.gram_plus);
  m.frame_minus = frame(m.gram_minus);
  return m;
}

namespace {

Func1D from_frame(const std::array<Complex, 2>& mu, const Eigen::Matrix2cd& frame,
                  const Eigen::Vector2cd& coords) {
  const Eigen::Vector2cd b = frame * coords;  // basis coefficients
  Func1D f;
  f.poly = Eigen::VectorXcd::Zero(1);
  f.exps = {{b(0), mu[0]}, {b(1), mu[1]}};
  return f;
}

}  // namespace

Func1D DeficiencyModel::plus_function(const Eigen::Vector2cd& coords) const {
  return from_frame(mu_plus, frame_plus, coords);
}

Func1D DeficiencyModel::minus_function(const Eigen::Vector2cd& coords) const {
  return from_frame(mu_minus, frame_minus, coords);
}

double ExtensionUnitary::unitarity_residual() const {
  return (k.adjoint() * k - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
}

ExtensionUnitary random_extension_unitary(std::mt19937_64& rng) {
  return ExtensionUnitary{linalg::random_unitary(2, rng)};
}

ExtensionUnitary dirichlet_extension(const DeficiencyModel& model) {
  // boundary-value maps of the frames: column k = (f_k(0), f_k(1))
  Eigen::Matrix2cd bp, bm;
  for (int k = 0; k < 2; ++k) {
    const Func1D fp = model.plus_function(Eigen::Vector2cd::Unit(k));
    const Func1D fm = model.minus_function(Eigen::Vector2cd::Unit(k));
    bp(0, k) = fp.eval(0.0);
    bp(1, k) = fp.eval(1.0);
    bm(0, k) = fm.eval(0.0);
    bm(1, k) = fm.eval(1.0);
  }
  // (xi + K xi) must vanish at both endpoints for every xi
  return ExtensionUnitary{-bm.inverse() * bp};
}

Func1D random_bump(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd p(4);
  for (int i = 0; i < 4; ++i) p(i) = Complex(g(rng), g(rng));
  // x^2 (1-x)^2 = x^2 - 2 x^3 + x^4
  const Eigen::Vector3d env(1.0, -2.0, 1.0);
  Func1D f;
  f.poly = Eigen::VectorXcd::Zero(8);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j) f.poly(2 + i + j) += env(i) * p(j);
  return f;
}

std::vector<Func1D> extension_domain_sample(const DeficiencyModel& model,
                                            const ExtensionUnitary& k, int count,
                                            std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<Func1D> out;
  for (int s = 0; s < count; ++s) {
    Eigen::Vector2cd xi;
    xi << Complex(g(rng), g(rng)), Complex(g(rng), g(rng));
    const Func1D bump = random_bump(rng);
    const Func1D fp = model.plus_function(xi);
    const Func1D fm = model.minus_function(k.k * xi);
    Func1D f;
    f.poly = bump.poly;
    f.exps = fp.exps;
    f.exps.insert(f.exps.end(), fm.exps.begin(), fm.exps.end());
    out.push_back(std::move(f));
  }
  return out;
}

double selfadjointness_residual(const std::vector<Func1D>& samples) {
  double worst = 0.0;
  for (const auto& f : samples)
    for (const auto& g : samples) worst = std::max(worst, std::abs(lagrange_form(f, g)));
  return worst;
}

namespace {

// reflection matrix on one deficiency space, in its orthonormal frame
Eigen::Matrix2cd reflect_in_frame(const DeficiencyModel& model, bool plus,
                                  double* residual_out) {
  Eigen::Matrix2cd v;
  double worst = 0.0;
  for (int k = 0; k < 2; ++k) {
    const Func1D f = plus ? model.plus_function(Eigen::Vector2cd::Unit(k))
                          : model.minus_function(Eigen::Vector2cd::Unit(k));
    const Func1D rf = f.reflected();
    Eigen::Vector2cd c;
    Func1D defect = rf;  // rf minus its projection, assembled coefficient-wise
    for (int j = 0; j < 2; ++j) {
      const Func1D fj = plus ? model.plus_function(Eigen::Vector2cd::Unit(j))
                             : model.minus_function(Eigen::Vector2cd::Unit(j));
      c(j) = inner(fj, rf);
      for (const auto& e : fj.exps) defect.exps.push_back({-c(j) * e.coef, e.mu});
    }
    v.col(k) = c;
    // combine coefficients of equal exponents so cancellation is exact
    std::vector<Func1D::ExpTerm> merged;
    for (const auto& e : defect.exps) {
      bool found = false;
      for (auto& me : merged)
        if (std::abs(me.mu - e.mu) < 1e-14) {
          me.coef += e.coef;
          found = true;
        }
      if (!found) merged.push_back(e);
    }
    defect.exps = std::move(merged);
    worst = std::max(worst, std::sqrt(std::max(0.0, std::real(inner(defect, defect)))));
  }
  if (residual_out) *residual_out = worst;
  return v;
}

}  // namespace

DeficiencyRep reflection_on_deficiency(const DeficiencyModel& model) {
  DeficiencyRep rep;
  double rp = 0.0, rm = 0.0;
  rep.v_plus = reflect_in_frame(model, true, &rp);
  rep.v_minus = reflect_in_frame(model, false, &rm);
  rep.projection_residual = std::max(rp, rm);
  if (rep.projection_residual > 1e-8)
    throw std::runtime_error("reflection_on_deficiency: deficiency spaces not invariant");
  return rep;
}

AdaptedModel reflection_adapted_model() {
  AdaptedModel out;
  out.model = deficiency_basis();
  const DeficiencyRep rep = reflection_on_deficiency(out.model);

  // V is a Hermitian involution on each space; rotate the frame into its
  // eigenbasis ordered (+1, -1), with a deterministic phase fix
  auto adapt = [](const Eigen::Matrix2cd& v, Eigen::Matrix2cd& frame) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(0.5 * (v + v.adjoint()));
    Eigen::Matrix2cd u = es.eigenvectors();
    u.col(0).swap(u.col(1));  // ascending -> (+1, -1)
    for (int j = 0; j < 2; ++j) {
      int imax = 0;
      if (std::abs(u(1, j)) > std::abs(u(0, j))) imax = 1;
      u.col(j) *= std::abs(u(imax, j)) / u(imax, j);
    }
    frame = frame * u;
  };
  adapt(rep.v_plus, out.model.frame_plus);
  adapt(rep.v_minus, out.model.frame_minus);
  out.rep = reflection_on_deficiency(out.model);
  return out;
}

KInvarianceResult k_invariance_check(const ExtensionUnitary& k, const DeficiencyRep& rep,
                                     double tol) {
  KInvarianceResult out;
  out.residual = (rep.v_minus * k.k - k.k * rep.v_plus).cwiseAbs().maxCoeff();
  out.pass = out.residual <= tol;
  return out;
}

double transported_domain_residual(const DeficiencyModel& model, const ExtensionUnitary& k,
                                   int count, std::mt19937_64& rng) {
  const auto samples = extension_domain_sample(model, k, count, rng);
  double worst = 0.0;
  for (const auto& s : samples) {
    const Func1D r = s.reflected();
    for (const auto& g : samples) worst = std::max(worst, std::abs(lagrange_form(r, g)));
  }
  return worst;
}

Eigen::MatrixXcd cayley(const Eigen::MatrixXcd& t) {
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(t.rows(), t.cols());
  return (id - Complex(0, 1) * t) * (id + Complex(0, 1) * t).partialPivLu().solve(id);
}

Eigen::MatrixXcd inverse_cayley(const Eigen::MatrixXcd& c) {
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(c.rows(), c.cols());
  return Complex(0, 1) * (c - id) * (c + id).partialPivLu().solve(id);
}

Complex inverse_cayley_scalar(Complex lambda) {
  return Complex(0, 1) * (lambda - 1.0) / (lambda + 1.0);
}

int IrrepBlockSpec::total_dim() const {
  int d = 0;
  for (const auto& b : blocks) d += b.dim;
  return d;
}

Eigen::MatrixXcd IrrepBlockSpec::rep_matrix(int element) const {
  const int n = total_dim();
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(n, n);
  int off = 0;
  for (const auto& b : blocks) {
    v.block(off, off, b.dim, b.dim) = b.matrices[element];
    off += b.dim;
  }
  return v;
}

IrrepBlockSpec z2_blocks() {
  IrrepBlockSpec spec;
  spec.group = GroupModel::z2();
  IrrepBlock triv{1, 0, {Eigen::MatrixXcd::Ones(1, 1), Eigen::MatrixXcd::Ones(1, 1)}, {}};
  IrrepBlock sign{1, 1, {Eigen::MatrixXcd::Ones(1, 1), -Eigen::MatrixXcd::Ones(1, 1)}, {}};
  spec.blocks = {triv, sign};
  return spec;
}

namespace {

std::vector<Eigen::MatrixXcd> s3_standard() {
  // elements ordered e, r, r^2, s, sr, sr^2 to match GroupModel::s3()
  const double th = 2.0 * std::numbers::pi / 3.0;
  Eigen::Matrix2d r, s;
  r << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  s << 1.0, 0.0, 0.0, -1.0;
  std::vector<Eigen::MatrixXcd> m;
  for (int f = 0; f < 2; ++f)
    for (int p = 0; p < 3; ++p) {
      Eigen::Matrix2d a = Eigen::Matrix2d::Identity();
      for (int i = 0; i < p; ++i) a = a * r;
      if (f) a = s * a;
      m.push_back(a.cast<Complex>());
    }
  return m;
}

}  // namespace

IrrepBlockSpec s3_blocks() {
  IrrepBlockSpec spec;
  spec.group = GroupModel::s3();
  IrrepBlock triv;
  triv.dim = 1;
  triv.class_id = 0;
  for (int g = 0; g < 6; ++g) triv.matrices.push_back(Eigen::MatrixXcd::Ones(1, 1));
  IrrepBlock sign;
  sign.dim = 1;
  sign.class_id = 1;
  for (int f = 0; f < 2; ++f)
    for (int p = 0; p < 3; ++p)
      sign.matrices.push_back((f ? -1.0 : 1.0) * Eigen::MatrixXcd::Ones(1, 1));
  IrrepBlock std2;
  std2.dim = 2;
  std2.class_id = 2;
  std2.matrices = s3_standard();
  spec.blocks = {triv, sign, std2};
  return spec;
}

IrrepBlockSpec equivalent_pair_blocks(unsigned seed) {
  IrrepBlockSpec spec;
  spec.group = GroupModel::s3();
  const auto std2 = s3_standard();
  std::mt19937_64 rng(seed);
  const Eigen::MatrixXcd w = linalg::random_unitary(2, rng);

  IrrepBlock first;
  first.dim = 2;
  first.class_id = 0;
  first.matrices = std2;

  IrrepBlock second;
  second.dim = 2;
  second.class_id = 0;
  second.intertwiner = w;  // second(g) = W^* first(g) W
  for (const auto& m : std2) second.matrices.push_back(w.adjoint() * m * w);

  spec.blocks = {first, second};
  return spec;
}

Eigen::MatrixXcd commutant_average(const IrrepBlockSpec& spec, const Eigen::MatrixXcd& h) {
  const int n = spec.group.size();
  Eigen::MatrixXcd avg = Eigen::MatrixXcd::Zero(h.rows(), h.cols());
  for (int g = 0; g < n; ++g) {
    const Eigen::MatrixXcd v = spec.rep_matrix(g);
    avg += v * h * v.adjoint();
  }
  return avg / double(n);
}

ReductionReport reduction_block_test(const IrrepBlockSpec& spec, const Eigen::MatrixXcd& t,
                                     double commute_tol) {
  const int n = spec.total_dim();
  if (t.rows() != n || t.cols() != n)
    throw std::invalid_argument("reduction_block_test: size mismatch");
  for (int g = 0; g < spec.group.size(); ++g) {
    const Eigen::MatrixXcd v = spec.rep_matrix(g);
    if ((v * t - t * v).cwiseAbs().maxCoeff() > commute_tol)
      throw std::invalid_argument("reduction_block_test: T does not commute with the rep");
  }

  std::vector<int> offsets;
  int off = 0;
  for (const auto& b : spec.blocks) {
    offsets.push_back(off);
    off += b.dim;
  }

  // group blocks by class
  std::vector<std::vector<int>> classes;
  for (size_t i = 0; i < spec.blocks.size(); ++i) {
    while (static_cast<int>(classes.size()) <= spec.blocks[i].class_id) classes.emplace_back();
    classes[spec.blocks[i].class_id].push_back(static_cast<int>(i));
  }

  ReductionReport rep;
  const Eigen::MatrixXcd c = cayley(t);
  Eigen::MatrixXcd model = Eigen::MatrixXcd::Zero(n, n);

  for (const auto& cls : classes) {
    if (cls.size() == 1) {
      const int i = cls[0];
      const int d = spec.blocks[i].dim;
      const Complex lam = t.block(offsets[i], offsets[i], d, d).trace() / double(d);
      rep.block_scalars.push_back(lam);
      model.block(offsets[i], offsets[i], d, d) =
          lam * Eigen::MatrixXcd::Identity(d, d);
    } else if (cls.size() == 2) {
      rep.has_doubled_class = true;
      const int i = cls[0], j = cls[1];
      const int d = spec.blocks[i].dim;
      const Eigen::MatrixXcd& w = spec.blocks[j].intertwiner;
      auto extract = [&](const Eigen::MatrixXcd& a, Eigen::Matrix2cd& coef) {
        coef(0, 0) = a.block(offsets[i], offsets[i], d, d).trace() / double(d);
        coef(1, 1) = a.block(offsets[j], offsets[j], d, d).trace() / double(d);
        coef(0, 1) = (w.adjoint() * a.block(offsets[i], offsets[j], d, d)).trace() / double(d);
        coef(1, 0) = (w * a.block(offsets[j], offsets[i], d, d)).trace() / double(d);
      };
      extract(t, rep.coefficient_matrix);
      extract(c, rep.cayley_coefficient_matrix);
      model.block(offsets[i], offsets[i], d, d) =
          rep.coefficient_matrix(0, 0) * Eigen::MatrixXcd::Identity(d, d);
      model.block(offsets[j], offsets[j], d, d) =
          rep.coefficient_matrix(1, 1) * Eigen::MatrixXcd::Identity(d, d);
      model.block(offsets[i], offsets[j], d, d) = rep.coefficient_matrix(0, 1) * w;
      model.block(offsets[j], offsets[i], d, d) = rep.coefficient_matrix(1, 0) * w.adjoint();
    } else if (!cls.empty()) {
      throw std::invalid_argument("reduction_block_test: classes with >2 blocks unsupported");
    }
  }
  rep.off_scalar_deviation = (t - model).cwiseAbs().maxCoeff();

  for (int g = 0; g < spec.group.size(); ++g) {
    const Eigen::MatrixXcd v = spec.rep_matrix(g);
    rep.cayley_commutant_residual = std::max(
        rep.cayley_commutant_residual, (v * c - c * v).cwiseAbs().maxCoeff());
  }
  return rep;
}

}  // namespace saext::vn
