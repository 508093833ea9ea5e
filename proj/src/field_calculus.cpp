#include "plab/field_calculus.hpp"

#include <cmath>
#include <limits>

#include "plab/errors.hpp"

namespace plab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_stencil_room(const GridDomain& g) {
  for (int a = 0; a < g.dim(); ++a) {
    if (g.count(a) < 4) throw InvalidInput("finite differences: grid too coarse for the stencil");
  }
}

double at(const ScalarField& f, std::ptrdiff_t idx) {
  if (idx < 0 || !f.domain().active(static_cast<std::size_t>(idx))) return kNaN;
  return f[static_cast<std::size_t>(idx)];
}

bool ok(double v) { return std::isfinite(v); }

double hs(const SmallMat& a, const SmallMat& b) { return a.cwiseProduct(b).sum(); }

double tr_inner(const SmallMat& a, const SmallMat& b) { return a.cwiseProduct(b.transpose()).sum(); }

bool all_finite(const SmallMat& m) { return m.allFinite(); }

// Inside node whose axis neighbors are inside as well, so every nested
// difference reaching it was taken with central stencils.
bool nested_support(const GridDomain& g, std::size_t i) {
  if (!g.inside(i)) return false;
  for (int a = 0; a < g.dim(); ++a) {
    for (int s : {-1, 1}) {
      const std::ptrdiff_t j = g.shifted(i, a, s);
      if (j < 0 || !g.inside(static_cast<std::size_t>(j))) return false;
    }
  }
  return true;
}

}  // namespace

ScalarField partial(const ScalarField& f, int axis) {
  const GridDomain& g = f.domain();
  require_stencil_room(g);
  if (axis < 0 || axis >= g.dim()) throw InvalidInput("partial: bad axis");
  const double h = g.h();
  ScalarField out(f.domain_ptr());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!g.active(i)) continue;
    const double f0 = f[i];
    if (!ok(f0)) continue;
    const double fp = at(f, g.shifted(i, axis, 1));
    const double fm = at(f, g.shifted(i, axis, -1));
    if (ok(fp) && ok(fm)) {
      out[i] = (fp - fm) / (2.0 * h);
      continue;
    }
    const double fp2 = at(f, g.shifted(i, axis, 2));
    if (ok(fp) && ok(fp2)) {
      out[i] = (-3.0 * f0 + 4.0 * fp - fp2) / (2.0 * h);
      continue;
    }
    const double fm2 = at(f, g.shifted(i, axis, -2));
    if (ok(fm) && ok(fm2)) out[i] = (3.0 * f0 - 4.0 * fm + fm2) / (2.0 * h);
  }
  return out;
}

ScalarField second_partial(const ScalarField& f, int axis) {
  const GridDomain& g = f.domain();
  require_stencil_room(g);
  if (axis < 0 || axis >= g.dim()) throw InvalidInput("second_partial: bad axis");
  const double h2 = g.h() * g.h();
  ScalarField out(f.domain_ptr());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!g.active(i)) continue;
    const double f0 = f[i];
    if (!ok(f0)) continue;
    const double fp = at(f, g.shifted(i, axis, 1));
    const double fm = at(f, g.shifted(i, axis, -1));
    if (ok(fp) && ok(fm)) {
      out[i] = (fp - 2.0 * f0 + fm) / h2;
      continue;
    }
    for (int dir : {1, -1}) {
      const double f1 = at(f, g.shifted(i, axis, dir));
      const double f2 = at(f, g.shifted(i, axis, 2 * dir));
      const double f3 = at(f, g.shifted(i, axis, 3 * dir));
      if (ok(f1) && ok(f2) && ok(f3)) {
        out[i] = (2.0 * f0 - 5.0 * f1 + 4.0 * f2 - f3) / h2;
        break;
      }
    }
  }
  return out;
}

VectorField gradient(const ScalarField& f) {
  const int d = f.domain().dim();
  VectorField out(f.domain_ptr(), d);
  for (int a = 0; a < d; ++a) out[a] = partial(f, a);
  return out;
}

MatrixField hessian(const ScalarField& f) {
  const int d = f.domain().dim();
  MatrixField out(f.domain_ptr(), d, d);
  std::vector<ScalarField> first;
  for (int a = 0; a < d; ++a) first.push_back(partial(f, a));
  for (int a = 0; a < d; ++a) {
    out(a, a) = second_partial(f, a);
    for (int b = a + 1; b < d; ++b) {
      const ScalarField ab = partial(first[a], b);
      const ScalarField ba = partial(first[b], a);
      ScalarField mixed(f.domain_ptr());
      for (std::size_t i = 0; i < mixed.size(); ++i) mixed[i] = 0.5 * (ab[i] + ba[i]);
      out(a, b) = mixed;
      out(b, a) = mixed;
    }
  }
  return out;
}

ScalarField divergence(const VectorField& v) {
  const int d = v.domain().dim();
  if (v.components() != d) throw InvalidInput("divergence: component count must equal dimension");
  ScalarField out(v.domain_ptr());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (v.domain().active(i)) out[i] = 0.0;
  }
  for (int a = 0; a < d; ++a) {
    const ScalarField da = partial(v[a], a);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += da[i];
  }
  return out;
}

MatrixField jacobian(const VectorField& v) {
  const int d = v.domain().dim();
  MatrixField out(v.domain_ptr(), v.components(), d);
  for (int i = 0; i < v.components(); ++i) {
    for (int j = 0; j < d; ++j) out(i, j) = partial(v[i], j);
  }
  return out;
}

ScalarField basic_identity_residual(const ScalarField& u) {
  const GridDomain& g = u.domain();
  const int d = g.dim();
  const VectorField du = gradient(u);
  const MatrixField d2u = hessian(u);
  VectorField flux(u.domain_ptr(), d);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!g.active(i)) continue;
    const SmallMat hm = d2u.at(i);
    const SmallVec gv = du.at(i);
    if (!all_finite(hm) || !gv.allFinite()) continue;
    flux.set(i, hm * gv - hm.trace() * gv);
  }
  const ScalarField div = divergence(flux);
  ScalarField out(u.domain_ptr());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!nested_support(g, i)) continue;
    const SmallMat hm = d2u.at(i);
    const double t = hm.trace();
    out[i] = hm.squaredNorm() - div[i] - t * t;
  }
  return out;
}

ScalarField divergence_structure_residual(const VectorField& x) {
  const GridDomain& g = x.domain();
  const int d = g.dim();
  if (x.components() != d) throw InvalidInput("structure residual: component count must equal dimension");
  const MatrixField dx = jacobian(x);
  VectorField flux(x.domain_ptr(), d);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!g.active(i)) continue;
    SmallMat j = dx.at(i);
    const SmallVec xv = x.at(i);
    if (!all_finite(j) || !xv.allFinite()) continue;
    const double t = j.trace();
    j.diagonal().array() -= t;
    flux.set(i, j * xv);
  }
  const ScalarField div = divergence(flux);
  ScalarField out(x.domain_ptr());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!nested_support(g, i)) continue;
    const SmallMat j = dx.at(i);
    const double t = j.trace();
    out[i] = div[i] - (tr_inner(j, j) - t * t);
  }
  return out;
}

ScalarField infinity_laplacian_identity_residual(const ScalarField& u) {
  const GridDomain& g = u.domain();
  const VectorField du = gradient(u);
  const MatrixField d2u = hessian(u);
  ScalarField half_sq(u.domain_ptr());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!g.active(i)) continue;
    const SmallVec gv = du.at(i);
    if (gv.allFinite()) half_sq[i] = 0.5 * gv.squaredNorm();
  }
  const VectorField dhalf = gradient(half_sq);
  ScalarField out(u.domain_ptr());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!nested_support(g, i)) continue;
    const SmallVec gv = du.at(i);
    const SmallMat hm = d2u.at(i);
    const SmallVec lhs = gv * gv.dot(dhalf.at(i));
    const double inf_lap = hs(gv * gv.transpose(), hm);
    out[i] = (lhs - inf_lap * gv).norm();
  }
  return out;
}

ScalarField key_inequality_slack(const ScalarField& u, const OperatorProfile& profile,
                                 const std::optional<VectorField>& w, const CordesConstants& constants) {
  const GridDomain& g = u.domain();
  const int d = g.dim();
  if (!cordes_window_ok(profile, d)) throw InvalidInput("key inequality: profile outside the Cordes window");
  if (w && (w->components() != d || w->domain_ptr() != u.domain_ptr())) {
    throw InvalidInput("key inequality: W must be a d-component field on the same grid");
  }
  const VectorField du = gradient(u);
  VectorField va(u.domain_ptr(), d);
  VectorField vb(u.domain_ptr(), d);
  VectorField x(u.domain_ptr(), d);
  ScalarField ratio(u.domain_ptr());  // b/a at |Du|
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!g.active(i)) continue;
    const SmallVec gv = du.at(i);
    if (!gv.allFinite()) continue;
    const double t = gv.norm();
    va.set(i, profile.a(t) * gv);
    const SmallVec b = profile.b(t) * gv;
    vb.set(i, b);
    x.set(i, w ? SmallVec(b - w->at(i)) : b);
    ratio[i] = profile.b(t) / profile.a(t);
  }
  const ScalarField div_va = divergence(va);
  const MatrixField dvb = jacobian(vb);
  const MatrixField dx = jacobian(x);
  std::optional<MatrixField> dw;
  if (w) dw = jacobian(*w);
  VectorField flux(u.domain_ptr(), d);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!g.active(i)) continue;
    SmallMat j = dx.at(i);
    const SmallVec xv = x.at(i);
    if (!all_finite(j) || !xv.allFinite()) continue;
    const double t = j.trace();
    j.diagonal().array() -= t;
    flux.set(i, j * xv);
  }
  const ScalarField div_flux = divergence(flux);
  ScalarField out(u.domain_ptr());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!nested_support(g, i)) continue;
    const double lhs = constants.c * dvb.at(i).squaredNorm();
    const double r = ratio[i] * div_va[i];
    double rhs = div_flux[i] + constants.C * r * r;
    if (dw) rhs += constants.C * dw->at(i).squaredNorm();
    out[i] = rhs - lhs;
  }
  return out;
}

YoungSplitResult young_split_check(const VectorField& x, const VectorField& w, double c) {
  const GridDomain& g = x.domain();
  const int n = g.dim();
  if (x.components() != n || w.components() != n) throw InvalidInput("young split: fields must have d components");
  if (x.domain_ptr() != w.domain_ptr()) throw InvalidInput("young split: fields on different grids");
  const double big_c = young_constant(n, c);
  const MatrixField dx = jacobian(x);
  const MatrixField dw = jacobian(w);
  YoungSplitResult res;
  res.min_slack = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!g.inside(i)) continue;
    const SmallMat p = dx.at(i);
    const SmallMat q = dw.at(i);
    if (!all_finite(p) || !all_finite(q)) continue;
    const double lhs = 2.0 * (tr_inner(p, q) - p.trace() * q.trace()) + tr_inner(q, q) - q.trace() * q.trace();
    const double rhs = 0.5 * c * (p + q).squaredNorm() + big_c * q.squaredNorm();
    const double slack = rhs - lhs;
    res.min_slack = std::min(res.min_slack, slack);
    ++res.nodes;
    // Pure rounding: both sides are evaluated from the same matrices.
    if (slack < -1e-12 * (1.0 + std::abs(rhs))) res.holds = false;
  }
  if (res.nodes == 0) res.min_slack = 0.0;
  return res;
}

double max_abs_defined(const ScalarField& f) {
  const FieldExtremes e = extremes(f, NodeKind::inside);
  if (e.counted == 0) throw InvalidInput("field undefined at every inside node");
  return e.max_abs;
}

double min_defined(const ScalarField& f) {
  const FieldExtremes e = extremes(f, NodeKind::inside);
  if (e.counted == 0) throw InvalidInput("field undefined at every inside node");
  return e.min;
}

std::vector<Vec3> defined_positions(const ScalarField& f) {
  const GridDomain& g = f.domain();
  std::vector<Vec3> out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.inside(i) && ok(f[i])) out.push_back(g.position(i));
  }
  return out;
}

double max_abs_at(const ScalarField& f, const std::vector<Vec3>& points) {
  double m = 0.0;
  for (const Vec3& x : points) {
    const std::ptrdiff_t k = f.domain().node_at(x);
    if (k < 0) throw InvalidInput("max_abs_at: point is not a grid node");
    const double v = f[static_cast<std::size_t>(k)];
    if (!ok(v)) throw InvalidInput("max_abs_at: field undefined at a requested node");
    m = std::max(m, std::abs(v));
  }
  return m;
}

}  // namespace plab
