#include "plab/pde_solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "plab/errors.hpp"
#include "plab/field_calculus.hpp"

namespace plab {

namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxHalvings = 60;

// Compensated (Neumaier) summation.
class Accumulator {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Corner k of a cell with local corners 0=(0,0), 1=(1,0), 2=(0,1), 3=(1,1):
// g_k = Σ_m kCoef[k][m] * v[kNode[k][m]] / h.
constexpr int kNode[4][3] = {{0, 1, 2}, {1, 0, 3}, {2, 3, 0}, {3, 2, 1}};
constexpr double kCoef[4][3][2] = {
    {{-1, -1}, {1, 0}, {0, 1}},
    {{1, -1}, {-1, 0}, {0, 1}},
    {{-1, 1}, {1, 0}, {0, -1}},
    {{1, 1}, {-1, 0}, {0, -1}},
};

struct Cells {
  std::vector<std::array<std::size_t, 4>> corners;
};

Cells active_cells(const GridDomain& g) {
  if (g.dim() != 2) throw InvalidInput("p-energy: 2D grids only");
  Cells c;
  for (int j = 0; j + 1 < g.count(1); ++j) {
    for (int i = 0; i + 1 < g.count(0); ++i) {
      const std::array<std::size_t, 4> n{g.index(i, j), g.index(i + 1, j), g.index(i, j + 1),
                                         g.index(i + 1, j + 1)};
      if (g.active(n[0]) && g.active(n[1]) && g.active(n[2]) && g.active(n[3])) c.corners.push_back(n);
    }
  }
  return c;
}

Eigen::Vector2d corner_gradient(const std::array<double, 4>& v, int k, double h) {
  Eigen::Vector2d g = Eigen::Vector2d::Zero();
  for (int m = 0; m < 3; ++m) {
    g.x() += kCoef[k][m][0] * v[kNode[k][m]];
    g.y() += kCoef[k][m][1] * v[kNode[k][m]];
  }
  return g / h;
}

std::array<double, 4> cell_values(const ScalarField& v, const std::array<std::size_t, 4>& n) {
  return {v[n[0]], v[n[1]], v[n[2]], v[n[3]]};
}

double density(double s, double p) { return std::pow(s, 0.5 * p); }

// F(g + dg) - F(g), accurate relative to the difference itself.
double density_change(const Eigen::Vector2d& g, const Eigen::Vector2d& dg, double p, double eps) {
  const double s = g.squaredNorm() + eps;
  const double ds = 2.0 * g.dot(dg) + dg.squaredNorm();
  if (s == 0.0) return density(ds, p);
  return density(s, p) * std::expm1(0.5 * p * std::log1p(ds / s));
}

void require_values(const ScalarField& v, const Cells& cells) {
  for (const auto& n : cells.corners) {
    for (std::size_t k : n) {
      if (!std::isfinite(v[k])) throw InvalidInput("p-energy: field undefined at an active node");
    }
  }
}

// Unknown numbering and a fixed Hessian sparsity pattern with per-cell slots.
struct Assembly {
  Cells cells;
  std::vector<std::ptrdiff_t> unknown;  // node -> unknown index or -1
  std::vector<std::size_t> node_of;     // unknown -> node
  Eigen::SparseMatrix<double> hess;
  std::vector<std::array<std::ptrdiff_t, 16>> slots;  // per cell, local (a,b) -> value index
};

Assembly build_assembly(const GridDomain& g) {
  Assembly as;
  as.cells = active_cells(g);
  as.unknown.assign(g.size(), -1);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.inside(i)) {
      as.unknown[i] = static_cast<std::ptrdiff_t>(as.node_of.size());
      as.node_of.push_back(i);
    }
  }
  const auto n = static_cast<Eigen::Index>(as.node_of.size());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(as.cells.corners.size() * 16);
  for (const auto& c : as.cells.corners) {
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        const auto ua = as.unknown[c[a]];
        const auto ub = as.unknown[c[b]];
        if (ua >= 0 && ub >= 0) trip.emplace_back(ua, ub, 0.0);
      }
    }
  }
  as.hess.resize(n, n);
  as.hess.setFromTriplets(trip.begin(), trip.end());
  as.hess.makeCompressed();
  const int* outer = as.hess.outerIndexPtr();
  const int* inner = as.hess.innerIndexPtr();
  as.slots.resize(as.cells.corners.size());
  for (std::size_t ci = 0; ci < as.cells.corners.size(); ++ci) {
    const auto& c = as.cells.corners[ci];
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        const auto ua = as.unknown[c[a]];
        const auto ub = as.unknown[c[b]];
        std::ptrdiff_t slot = -1;
        if (ua >= 0 && ub >= 0) {
          // Column-major: column ub, row ua.
          const int* first = inner + outer[ub];
          const int* last = inner + outer[ub + 1];
          const int* it = std::lower_bound(first, last, static_cast<int>(ua));
          slot = it - inner;
        }
        as.slots[ci][a * 4 + b] = slot;
      }
    }
  }
  return as;
}

// Gradient (per unknown) and Hessian values for the current field.
void assemble(Assembly& as, const ScalarField& u, double p, double eps, double h, Eigen::VectorXd& grad) {
  grad.setZero(static_cast<Eigen::Index>(as.node_of.size()));
  double* val = as.hess.valuePtr();
  std::fill(val, val + as.hess.nonZeros(), 0.0);
  const double w = 0.25 * h * h;
  for (std::size_t ci = 0; ci < as.cells.corners.size(); ++ci) {
    const auto& c = as.cells.corners[ci];
    const auto v = cell_values(u, c);
    Eigen::Vector4d lg = Eigen::Vector4d::Zero();
    Eigen::Matrix4d lh = Eigen::Matrix4d::Zero();
    for (int k = 0; k < 4; ++k) {
      const Eigen::Vector2d g = corner_gradient(v, k, h);
      const double s = g.squaredNorm() + eps;
      const double f1 = p * std::pow(s, 0.5 * p - 1.0);
      const double f2 = p * (p - 2.0) * std::pow(s, 0.5 * p - 2.0);
      const Eigen::Vector2d dF = f1 * g;
      const Eigen::Matrix2d d2F = f1 * Eigen::Matrix2d::Identity() + f2 * g * g.transpose();
      Eigen::Matrix<double, 2, 3> d;
      for (int m = 0; m < 3; ++m) d.col(m) << kCoef[k][m][0] / h, kCoef[k][m][1] / h;
      const Eigen::Vector3d cg = d.transpose() * dF;
      const Eigen::Matrix3d ch = d.transpose() * d2F * d;
      for (int a = 0; a < 3; ++a) {
        lg[kNode[k][a]] += cg[a];
        for (int b = 0; b < 3; ++b) lh(kNode[k][a], kNode[k][b]) += ch(a, b);
      }
    }
    for (int a = 0; a < 4; ++a) {
      const auto ua = as.unknown[c[a]];
      if (ua < 0) continue;
      grad[ua] += w * lg[a];
      for (int b = 0; b < 4; ++b) {
        const auto slot = as.slots[ci][a * 4 + b];
        if (slot >= 0) val[slot] += w * lh(a, b);
      }
    }
  }
}

// E(u + t d) - E(u), d given per unknown.
double energy_change(const Assembly& as, const ScalarField& u, const Eigen::VectorXd& d, double t, double p,
                     double eps, double h) {
  Accumulator acc;
  const double w = 0.25 * h * h;
  for (const auto& c : as.cells.corners) {
    const auto v = cell_values(u, c);
    std::array<double, 4> dv{};
    bool moved = false;
    for (int a = 0; a < 4; ++a) {
      const auto ua = as.unknown[c[a]];
      dv[a] = ua >= 0 ? t * d[ua] : 0.0;
      moved = moved || dv[a] != 0.0;
    }
    if (!moved) continue;
    double cell = 0.0;
    for (int k = 0; k < 4; ++k) {
      cell += density_change(corner_gradient(v, k, h), corner_gradient(dv, k, h), p, eps);
    }
    acc.add(w * cell);
  }
  return acc.value();
}

double max_abs(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

DirichletProblem make_problem(DomainPtr domain, const OperatorProfile& profile,
                              const std::function<double(const Vec2&)>& phi, DataSampling sampling) {
  ScalarField values =
      sampling == DataSampling::at_nodes
          ? ScalarField::sample(domain, [&](const Vec3& x) { return phi(x.head<2>()); })
          : sample_dirichlet(domain, phi);
  return {std::move(domain), profile, std::move(values)};
}

double energy(const ScalarField& v, double p, double eps) {
  if (!(p > 1.0)) throw InvalidInput("energy: p must be > 1");
  if (!(eps >= 0.0)) throw InvalidInput("energy: eps must be >= 0");
  const GridDomain& g = v.domain();
  const Cells cells = active_cells(g);
  require_values(v, cells);
  const double h = g.h();
  Accumulator acc;
  for (const auto& c : cells.corners) {
    const auto vals = cell_values(v, c);
    double cell = 0.0;
    for (int k = 0; k < 4; ++k) cell += density(corner_gradient(vals, k, h).squaredNorm() + eps, p);
    acc.add(0.25 * h * h * cell);
  }
  return acc.value();
}

double energy(const ScalarField& v, const OperatorProfile& profile) {
  return energy(v, profile.p(), profile.eps());
}

std::vector<double> energy_gradient(const ScalarField& v, const OperatorProfile& profile) {
  Assembly as = build_assembly(v.domain());
  require_values(v, as.cells);
  Eigen::VectorXd grad;
  assemble(as, v, profile.p(), profile.eps(), v.domain().h(), grad);
  std::vector<double> out(v.size(), 0.0);
  for (std::size_t k = 0; k < as.node_of.size(); ++k) out[as.node_of[k]] = grad[static_cast<Eigen::Index>(k)];
  return out;
}

namespace {

SolveReport newton(const DirichletProblem& problem, Assembly& as, ScalarField u, double p, double eps,
                   const SolveOptions& options) {
  const GridDomain& g = *problem.domain;
  const double h = g.h();
  const double scale = 1.0 / (h * h);
  SolveReport rep{u, {}, 0.0, 0, 0, 0, false};
  double e = energy(u, p, eps);
  rep.energy_history.push_back(e);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  ldlt.analyzePattern(as.hess);
  Eigen::VectorXd grad;
  for (int it = 0; it <= options.max_iterations; ++it) {
    assemble(as, u, p, eps, h, grad);
    rep.gradient_norm = max_abs(grad) * scale;
    if (rep.gradient_norm <= options.tol) {
      rep.converged = true;
      break;
    }
    if (it == options.max_iterations) break;
    rep.iterations = it + 1;

    bool accepted = false;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      Eigen::VectorXd d;
      bool is_newton = attempt == 0;
      if (is_newton) {
        ldlt.factorize(as.hess);
        if (ldlt.info() != Eigen::Success) continue;
        d = ldlt.solve(-grad);
        if (ldlt.info() != Eigen::Success || !d.allFinite() || grad.dot(d) >= 0.0) continue;
      } else {
        d = -grad.cwiseQuotient(as.hess.diagonal().cwiseMax(std::numeric_limits<double>::min()));
      }
      const double slope = grad.dot(d);
      double t = 1.0;
      for (int k = 0; k < kMaxHalvings; ++k, t *= 0.5) {
        const double de = energy_change(as, u, d, t, p, eps, h);
        if (de < 0.0 && de <= kArmijo * t * slope) {
          for (std::size_t m = 0; m < as.node_of.size(); ++m) {
            u[as.node_of[m]] += t * d[static_cast<Eigen::Index>(m)];
          }
          e += de;
          rep.energy_history.push_back(e);
          (is_newton ? rep.newton_steps : rep.gradient_steps) += 1;
          accepted = true;
          break;
        }
      }
    }
    if (!accepted) break;
  }
  rep.u = std::move(u);
  return rep;
}

}  // namespace

SolveReport solve(const DirichletProblem& problem, const SolveOptions& options) {
  if (!problem.domain || problem.phi.domain_ptr() != problem.domain) {
    throw InvalidInput("solve: phi must live on the problem grid");
  }
  const GridDomain& g = *problem.domain;
  Assembly as = build_assembly(g);
  require_values(problem.phi, as.cells);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.inside(i) && !std::isfinite(problem.phi[i])) throw InvalidInput("solve: phi undefined at an inside node");
  }
  ScalarField start = problem.phi;
  const double p = problem.profile.p();
  const double eps = problem.profile.eps();
  if (options.initial) {
    if (options.initial->domain_ptr() != problem.domain) throw InvalidInput("solve: initial guess on another grid");
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g.inside(i)) start[i] = (*options.initial)[i];
    }
  } else if (p != 2.0) {
    SolveOptions harmonic;
    harmonic.tol = options.tol;
    harmonic.max_iterations = 10;
    const SolveReport r = newton(problem, as, start, 2.0, eps, harmonic);
    start = r.u;
  }
  SolveReport rep = newton(problem, as, std::move(start), p, eps, options);
  if (!rep.converged) {
    const double gn = rep.gradient_norm;
    throw SolveError("solve: no convergence (gradient norm " + std::to_string(gn) + " after " +
                         std::to_string(rep.iterations) + " iterations)",
                     std::move(rep));
  }
  return rep;
}

namespace {

bool has_margin(const GridDomain& g, std::size_t idx, int m) {
  if (!g.inside(idx)) return false;
  const auto c = g.coords(idx);
  for (int dj = -m; dj <= m; ++dj) {
    for (int di = -m; di <= m; ++di) {
      const int i = c[0] + di;
      const int j = c[1] + dj;
      if (i < 0 || j < 0 || i >= g.count(0) || j >= g.count(1)) return false;
      if (!g.inside(g.index(i, j))) return false;
    }
  }
  return true;
}

Eigen::Vector2d midpoint_gradient(const std::array<double, 4>& v, double h) {
  return {(v[1] - v[0] + v[3] - v[2]) / (2.0 * h), (v[2] - v[0] + v[3] - v[1]) / (2.0 * h)};
}

Vec3 cell_midpoint(const GridDomain& g, const std::array<std::size_t, 4>& c) {
  return 0.5 * (g.position(c[0]) + g.position(c[3]));
}

Norms finish(double du2, double d2u2, double lp, std::optional<double> p, double area, double d2_area) {
  Norms n;
  n.du_l2 = std::sqrt(du2);
  n.d2u_l2 = std::sqrt(d2u2);
  n.du_w12 = std::sqrt(du2 + d2u2);
  n.du_lp = p ? std::pow(lp, 1.0 / *p) : 0.0;
  n.area = area;
  n.excluded_area = area - d2_area;
  return n;
}

}  // namespace

Norms norms(const ScalarField& u, std::optional<double> p, const NormOptions& options) {
  const GridDomain& g = u.domain();
  if (p && !(*p >= 1.0)) throw InvalidInput("norms: p must be >= 1");
  if (options.d2_margin < 0) throw InvalidInput("norms: negative margin");
  const Cells cells = active_cells(g);
  require_values(u, cells);
  const MatrixField hess = hessian(u);
  const double h = g.h();
  const double w = h * h;
  Accumulator du2, d2u2, lp;
  double d2_area = 0.0;
  for (const auto& c : cells.corners) {
    const auto v = cell_values(u, c);
    const Eigen::Vector2d gm = midpoint_gradient(v, h);
    du2.add(w * gm.squaredNorm());
    if (p) lp.add(w * std::pow(gm.norm(), *p));
    bool support = true;
    for (std::size_t k : c) support = support && has_margin(g, k, options.d2_margin);
    if (!support) continue;
    SmallMat hm = SmallMat::Zero(2, 2);
    for (std::size_t k : c) hm += 0.25 * hess.at(k);
    d2u2.add(w * hm.squaredNorm());
    d2_area += w;
  }
  return finish(du2.value(), d2u2.value(), lp.value(), p, w * cells.corners.size(), d2_area);
}

Norms analytic_norms(const AnalyticScalar& f, const DomainPtr& domain, std::optional<double> p,
                     const NormOptions& options) {
  const GridDomain& g = *domain;
  if (f.dim != 2) throw InvalidInput("analytic_norms: 2D fields only");
  const Cells cells = active_cells(g);
  const double w = g.h() * g.h();
  Accumulator du2, d2u2, lp;
  double d2_area = 0.0;
  for (const auto& c : cells.corners) {
    const Vec3 x = cell_midpoint(g, c);
    const SmallVec gr = f.gradient(x);
    du2.add(w * gr.squaredNorm());
    if (p) lp.add(w * std::pow(gr.norm(), *p));
    bool support = true;
    for (std::size_t k : c) support = support && has_margin(g, k, options.d2_margin);
    if (!support) continue;
    d2u2.add(w * f.hessian(x).squaredNorm());
    d2_area += w;
  }
  return finish(du2.value(), d2u2.value(), lp.value(), p, w * cells.corners.size(), d2_area);
}

bool minimality_bound_check(const SolveReport& report, const ScalarField& phi, const OperatorProfile& profile) {
  const double eu = energy(report.u, profile);
  const double ep = energy(phi, profile);
  return eu <= ep * (1.0 + 1e-12) + 1e-14;
}

OscillationCheck local_oscillation_check(const ScalarField& u, const OperatorProfile& profile, const Vec2& center,
                                         double r) {
  const GridDomain& g = u.domain();
  if (g.dim() != 2) throw InvalidInput("oscillation check: 2D grids only");
  if (!(r > 0.0)) throw InvalidInput("oscillation check: r must be positive");
  const double h = g.h();
  const double reach = 2.0 * r + 2.0 * h;
  // Every grid point of the enlarged ball must be an inside node.
  for (int dj = -static_cast<int>(std::ceil(reach / h)); dj <= static_cast<int>(std::ceil(reach / h)); ++dj) {
    for (int di = -static_cast<int>(std::ceil(reach / h)); di <= static_cast<int>(std::ceil(reach / h)); ++di) {
      const Vec2 x(std::round(center.x() / h + di) * h, std::round(center.y() / h + dj) * h);
      if ((x - center).norm() > reach) continue;
      const std::ptrdiff_t k = g.node_at(Vec3(x.x(), x.y(), 0.0));
      if (k < 0 || !g.inside(static_cast<std::size_t>(k))) {
        throw InvalidInput("oscillation check: ball not compactly contained in the grid interior");
      }
    }
  }
  const VectorField du = gradient(u);
  VectorField vb(u.domain_ptr(), 2);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!g.active(i)) continue;
    const SmallVec gv = du.at(i);
    if (gv.allFinite()) vb.set(i, profile.b(gv.norm()) * gv);
  }
  const MatrixField dvb = jacobian(vb);
  const double w = h * h;
  Accumulator lhs, m0, m1, cnt;
  std::vector<std::size_t> outer;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double d = (g.position2(i) - center).norm();
    if (d > 2.0 * r || !g.inside(i)) continue;
    outer.push_back(i);
    cnt.add(w);
    m0.add(w * vb[0][i]);
    m1.add(w * vb[1][i]);
    if (d <= r) lhs.add(w * dvb.at(i).squaredNorm());
  }
  const Eigen::Vector2d mean(m0.value() / cnt.value(), m1.value() / cnt.value());
  Accumulator rhs;
  for (std::size_t i : outer) rhs.add(w * (Eigen::Vector2d(vb[0][i], vb[1][i]) - mean).squaredNorm());
  OscillationCheck out{lhs.value(), rhs.value(), 0.0};
  if (out.rhs > 0.0) out.ratio = out.lhs * r * r / out.rhs;
  return out;
}

ScalarField cutoff(const DomainPtr& domain, const Vec2& center, double r) {
  if (!(r > 0.0)) throw InvalidInput("cutoff: r must be positive");
  return ScalarField::sample(domain, [&](const Vec3& x) {
    const double d = (x.head<2>() - center).norm();
    if (d <= r) return 1.0;
    if (d >= 2.0 * r) return 0.0;
    const double s = (d - r) / r;
    return 1.0 - s * s * (3.0 - 2.0 * s);
  });
}

Integrals integrals(const ScalarField& v) {
  const GridDomain& g = v.domain();
  const Cells cells = active_cells(g);
  require_values(v, cells);
  const double h = g.h();
  const double w = h * h;
  Accumulator l1, l2, d2;
  for (const auto& c : cells.corners) {
    const auto vals = cell_values(v, c);
    const double mid = 0.25 * (vals[0] + vals[1] + vals[2] + vals[3]);
    l1.add(w * std::abs(mid));
    l2.add(w * mid * mid);
    d2.add(w * midpoint_gradient(vals, h).squaredNorm());
  }
  return {l1.value(), l2.value(), d2.value()};
}

SobolevCalibration calibrate_sobolev(const DomainPtr& domain, double sigma) {
  if (!(sigma > 0.0)) throw InvalidInput("sobolev calibration: sigma must be positive");
  const GridDomain& g = *domain;
  Eigen::AlignedBox2d box;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.active(i)) box.extend(g.position2(i));
  }
  const Vec2 lo = box.min();
  const Vec2 span = box.max() - box.min();
  const double pi = std::numbers::pi;
  std::vector<std::function<double(const Vec2&)>> probes;
  probes.emplace_back([](const Vec2&) { return 1.0; });
  for (int k = 0; k <= 3; ++k) {
    for (int l = 0; l <= 3; ++l) {
      if (k > 0 && l > 0) {
        probes.emplace_back([=](const Vec2& x) {
          const Vec2 s = (x - lo).cwiseQuotient(span);
          return std::sin(k * pi * s.x()) * std::sin(l * pi * s.y());
        });
      }
      if (k + l > 0) {
        probes.emplace_back([=](const Vec2& x) {
          const Vec2 s = (x - lo).cwiseQuotient(span);
          return std::cos(k * pi * s.x()) * std::cos(l * pi * s.y());
        });
      }
    }
  }
  probes.emplace_back([=](const Vec2& x) { return (x - lo).x() / span.x(); });
  probes.emplace_back([=](const Vec2& x) { return (x - lo).y() / span.y(); });
  probes.emplace_back([=](const Vec2& x) {
    const Vec2 s = (x - lo).cwiseQuotient(span);
    return s.x() * s.y();
  });
  probes.emplace_back([=](const Vec2& x) {
    const Vec2 s = (x - lo).cwiseQuotient(span);
    return s.x() * s.x() + s.y() * s.y();
  });
  const double diam = span.norm();
  for (double fx : {0.25, 0.5, 0.75}) {
    for (double fy : {0.25, 0.5, 0.75}) {
      for (double fr : {0.1, 0.2}) {
        const Vec2 c = lo + Vec2(fx * span.x(), fy * span.y());
        const double r = fr * diam;
        probes.emplace_back([=](const Vec2& x) {
          const double d = (x - c).norm();
          if (d <= r) return 1.0;
          if (d >= 2.0 * r) return 0.0;
          const double s = (d - r) / r;
          return 1.0 - s * s * (3.0 - 2.0 * s);
        });
      }
    }
  }
  SobolevCalibration cal{sigma, 0.0, probes.size()};
  for (const auto& f : probes) {
    const ScalarField v = ScalarField::sample(domain, [&](const Vec3& x) { return f(x.head<2>()); });
    const Integrals it = integrals(v);
    if (it.v_l1 <= 0.0) continue;
    cal.c_emp = std::max(cal.c_emp, (it.v_l2sq - sigma * it.dv_l2sq) / (it.v_l1 * it.v_l1));
  }
  return cal;
}

SobolevCheck sobolev_variant_check(const ScalarField& v, const SobolevCalibration& calibration) {
  const Integrals it = integrals(v);
  SobolevCheck out;
  out.lhs = it.v_l2sq;
  out.rhs = calibration.sigma * it.dv_l2sq + calibration.c_emp * it.v_l1 * it.v_l1;
  out.holds = out.lhs <= out.rhs * (1.0 + 1e-12);
  return out;
}

}  // namespace plab
