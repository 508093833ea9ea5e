#include "plab/boundary.hpp"

#include <fftw3.h>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "plab/errors.hpp"
#include "plab/pde_solver.hpp"

namespace plab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

Vec2 unit(double a) { return {std::cos(a), std::sin(a)}; }

// 8-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kGlX[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
                            0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr double kGlW[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
                            0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

double speed_integral(const ParametricCurve& c, double a, double b) {
  const double m = 0.5 * (a + b), r = 0.5 * (b - a);
  double s = 0.0;
  for (int k = 0; k < 8; ++k) s += kGlW[k] * c.d1(m + r * kGlX[k]).norm();
  return r * s;
}

double point_segment_distance(const Vec2& x, const Vec2& a, const Vec2& b) {
  const Vec2 d = b - a;
  const double len2 = d.squaredNorm();
  double t = len2 > 0.0 ? (x - a).dot(d) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (x - (a + t * d)).norm();
}

void require_samples(const BoundaryCurve& curve, std::size_t n) {
  if (n != static_cast<std::size_t>(curve.size()))
    throw InvalidInput("boundary function: expected one value per curve sample");
}

}  // namespace

ParametricCurve circle_curve(const Vec2& center, double radius) {
  if (!(radius > 0.0)) throw InvalidInput("circle: radius must be positive");
  ParametricCurve c;
  c.name = "circle";
  c.position = [=](double t) -> Vec2 { return center + radius * unit(t); };
  c.d1 = [=](double t) -> Vec2 { return radius * Vec2(-std::sin(t), std::cos(t)); };
  c.d2 = [=](double t) -> Vec2 { return -radius * unit(t); };
  c.level_set = [=](const Vec2& x) { return (x - center).norm() - radius; };
  c.level_set_gradient = [=](const Vec2& x) -> Vec2 { return (x - center).normalized(); };
  c.convex = true;
  return c;
}

ParametricCurve ellipse_curve(double a, double b) {
  if (!(a > 0.0 && b > 0.0)) throw InvalidInput("ellipse: axes must be positive");
  ParametricCurve c;
  c.name = "ellipse";
  c.position = [=](double t) -> Vec2 { return {a * std::cos(t), b * std::sin(t)}; };
  c.d1 = [=](double t) -> Vec2 { return {-a * std::sin(t), b * std::cos(t)}; };
  c.d2 = [=](double t) -> Vec2 { return {-a * std::cos(t), -b * std::sin(t)}; };
  c.level_set = [=](const Vec2& x) { return x.x() * x.x() / (a * a) + x.y() * x.y() / (b * b) - 1.0; };
  c.level_set_gradient = [=](const Vec2& x) -> Vec2 { return {2.0 * x.x() / (a * a), 2.0 * x.y() / (b * b)}; };
  c.convex = true;
  return c;
}

ParametricCurve rounded_square_curve(double half, double rho) {
  if (!(half > 0.0 && rho > 0.0 && rho <= half)) throw InvalidInput("rounded square: need 0 < rho <= half");
  const double inner = half - rho;
  const double edge = 2.0 * inner;
  const double arc = 0.25 * kTwoPi * rho;
  const double perimeter = 4.0 * (edge + arc);
  const double k = perimeter / kTwoPi;  // dsigma/dt
  const Vec2 corners[4] = {{inner, inner}, {-inner, inner}, {-inner, -inner}, {inner, -inner}};

  // Arclength sigma measured from the start (angle 0) of the upper right
  // corner arc; t = 0 sits at the middle of that arc.
  struct Piece {
    Vec2 pos, unit_tangent, curvature_vector;
  };
  auto locate = [=](double t) -> Piece {
    double sigma = std::fmod(t * k + 0.5 * arc, perimeter);
    if (sigma < 0.0) sigma += perimeter;
    const double block = edge + arc;
    int q = std::min(3, static_cast<int>(sigma / block));
    const double u = sigma - q * block;
    const double base = 0.25 * kTwoPi * q;
    if (u < arc) {
      const double phi = base + u / rho;
      return {corners[q] + rho * unit(phi), Vec2(-std::sin(phi), std::cos(phi)), -unit(phi) / rho};
    }
    const double phi = base + 0.25 * kTwoPi;
    const Vec2 dir(-std::sin(phi), std::cos(phi));
    return {corners[q] + rho * unit(phi) + (u - arc) * dir, dir, Vec2::Zero()};
  };

  ParametricCurve c;
  c.name = "rounded_square";
  c.position = [=](double t) { return locate(t).pos; };
  c.d1 = [=](double t) -> Vec2 { return k * locate(t).unit_tangent; };
  c.d2 = [=](double t) -> Vec2 { return k * k * locate(t).curvature_vector; };
  c.level_set = [=](const Vec2& x) {
    const Vec2 q(std::abs(x.x()) - inner, std::abs(x.y()) - inner);
    return q.cwiseMax(0.0).norm() + std::min(std::max(q.x(), q.y()), 0.0) - rho;
  };
  c.level_set_gradient = [=](const Vec2& x) -> Vec2 {
    const Vec2 q(std::abs(x.x()) - inner, std::abs(x.y()) - inner);
    const Vec2 sgn(x.x() < 0.0 ? -1.0 : 1.0, x.y() < 0.0 ? -1.0 : 1.0);
    Vec2 g;
    if (q.x() > 0.0 || q.y() > 0.0) {
      g = q.cwiseMax(0.0).normalized();
    } else {
      g = q.x() > q.y() ? Vec2(1.0, 0.0) : Vec2(0.0, 1.0);
    }
    return g.cwiseProduct(sgn);
  };
  c.convex = true;
  return c;
}

ParametricCurve bean_curve() {
  auto r = [](double t) { return 1.0 + 0.3 * std::cos(2.0 * t); };
  auto r1 = [](double t) { return -0.6 * std::sin(2.0 * t); };
  auto r2 = [](double t) { return -1.2 * std::cos(2.0 * t); };
  ParametricCurve c;
  c.name = "bean";
  c.position = [=](double t) -> Vec2 { return r(t) * unit(t); };
  c.d1 = [=](double t) -> Vec2 { return r1(t) * unit(t) + r(t) * Vec2(-std::sin(t), std::cos(t)); };
  c.d2 = [=](double t) -> Vec2 {
    return (r2(t) - r(t)) * unit(t) + 2.0 * r1(t) * Vec2(-std::sin(t), std::cos(t));
  };
  c.level_set = [=](const Vec2& x) { return x.norm() - r(std::atan2(x.y(), x.x())); };
  c.level_set_gradient = [=](const Vec2& x) -> Vec2 {
    const double n2 = x.squaredNorm();
    const double t = std::atan2(x.y(), x.x());
    return x / std::sqrt(n2) - r1(t) * Vec2(-x.y(), x.x()) / n2;
  };
  c.convex = false;
  return c;
}

ParametricCurve curve_catalog(const std::string& name, double rho) {
  if (name == "circle") return circle_curve(Vec2::Zero(), 1.0);
  if (name == "ellipse") return ellipse_curve(2.0, 1.0);
  if (name == "rounded_square") return rounded_square_curve(1.0, rho);
  if (name == "bean") return bean_curve();
  throw InvalidInput("unknown curve '" + name + "'");
}

BoundaryCurve::BoundaryCurve(const ParametricCurve& curve, int count)
    : name_(curve.name),
      convex_(curve.convex),
      level_set_(curve.level_set),
      level_set_gradient_(curve.level_set_gradient) {
  if (count < 16) throw InvalidInput("boundary curve: need at least 16 samples");
  if (!curve.position || !curve.d1 || !curve.d2) throw InvalidInput("boundary curve: incomplete parametrization");

  const int panels = std::max(2048, 4 * count);
  const double dt = kTwoPi / panels;
  std::vector<double> cum(panels + 1, 0.0);
  for (int k = 0; k < panels; ++k) cum[k + 1] = cum[k] + speed_integral(curve, k * dt, (k + 1) * dt);
  length_ = cum.back();

  x_.resize(count);
  tau_.resize(count);
  nu_.resize(count);
  b_.resize(count);
  for (int i = 0; i < count; ++i) {
    const double target = length_ * i / count;
    int k = static_cast<int>(std::upper_bound(cum.begin(), cum.end(), target) - cum.begin()) - 1;
    k = std::clamp(k, 0, panels - 1);
    const double a = k * dt;
    double t = a + dt * (target - cum[k]) / std::max(cum[k + 1] - cum[k], 1e-300);
    for (int it = 0; it < 8; ++it) {
      const double err = cum[k] + speed_integral(curve, a, t) - target;
      const double step = err / curve.d1(t).norm();
      t = std::clamp(t - step, a, a + dt);
      if (std::abs(step) < 1e-16 * (1.0 + std::abs(t))) break;
    }
    const Vec2 v = curve.d1(t);
    x_[i] = curve.position(t);
    tau_[i] = v.normalized();
    nu_[i] = Vec2(tau_[i].y(), -tau_[i].x());
    b_[i] = curve.d2(t).dot(nu_[i]) / v.squaredNorm();
  }

  double area2 = 0.0;
  for (int i = 0; i < count; ++i) {
    const Vec2& p = x_[i];
    const Vec2& q = x_[(i + 1) % count];
    area2 += p.x() * q.y() - p.y() * q.x();
  }
  if (!(area2 > 0.0)) throw InvalidInput("boundary curve: parametrization must be counterclockwise");
}

Vec2 BoundaryCurve::extended_normal(const Vec2& x) const {
  if (!level_set_gradient_) throw InvalidInput("boundary curve '" + name_ + "' has no level set");
  return level_set_gradient_(x).normalized();
}

std::vector<double> BoundaryCurve::derivative(const std::vector<double>& f, DerivativeMethod m) const {
  require_samples(*this, f.size());
  const int n = size();
  std::vector<double> out(n);
  if (m == DerivativeMethod::fd4) {
    const double inv = 1.0 / (12.0 * ds());
    for (int i = 0; i < n; ++i) {
      auto at = [&](int o) { return f[((i + o) % n + n) % n]; };
      out[i] = (at(-2) - 8.0 * at(-1) + 8.0 * at(1) - at(2)) * inv;
    }
    return out;
  }

  const int nc = n / 2 + 1;
  double* in = fftw_alloc_real(n);
  fftw_complex* spec = fftw_alloc_complex(nc);
  fftw_plan fwd = fftw_plan_dft_r2c_1d(n, in, spec, FFTW_ESTIMATE);
  fftw_plan bwd = fftw_plan_dft_c2r_1d(n, spec, in, FFTW_ESTIMATE);
  std::copy(f.begin(), f.end(), in);
  fftw_execute(fwd);
  const double scale = kTwoPi / length_;
  for (int k = 0; k < nc; ++k) {
    const double w = (n % 2 == 0 && k == n / 2) ? 0.0 : scale * k;
    const double re = spec[k][0], im = spec[k][1];
    spec[k][0] = -w * im;
    spec[k][1] = w * re;
  }
  fftw_execute(bwd);
  for (int i = 0; i < n; ++i) out[i] = in[i] / n;
  fftw_destroy_plan(fwd);
  fftw_destroy_plan(bwd);
  fftw_free(in);
  fftw_free(spec);
  return out;
}

double BoundaryCurve::lipschitz_estimate(double window) const {
  if (!(window > 0.0)) throw InvalidInput("lipschitz estimate: window must be positive");
  const int n = size();
  const int w = std::min(n / 2, std::max(1, static_cast<int>(window / ds())));
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int o = -w; o <= w; ++o) {
      if (o == 0) continue;
      const Vec2 d = x_[((i + o) % n + n) % n] - x_[i];
      const double a = std::abs(d.dot(tau_[i]));
      const double b = std::abs(d.dot(nu_[i]));
      if (a > 1e-14) best = std::max(best, b / a);
    }
  }
  return best;
}

double BoundaryCurve::diameter() const {
  double best = 0.0;
  for (std::size_t i = 0; i < x_.size(); ++i)
    for (std::size_t j = i + 1; j < x_.size(); ++j) best = std::max(best, (x_[i] - x_[j]).squaredNorm());
  return std::sqrt(best);
}

std::shared_ptr<const Shape> BoundaryCurve::polygon() const { return std::make_shared<PolygonShape>(x_); }

TangentialSplit tangential_split(const BoundaryCurve& curve, const std::vector<Vec2>& x) {
  require_samples(curve, x.size());
  TangentialSplit s;
  s.tangential.resize(x.size());
  s.normal.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Vec2& nu = curve.normals()[i];
    s.normal[i] = x[i].dot(nu);
    s.tangential[i] = x[i] - s.normal[i] * nu;
  }
  return s;
}

std::vector<Vec2> tangential_gradient(const BoundaryCurve& curve, const std::vector<double>& f, DerivativeMethod m) {
  const std::vector<double> df = curve.derivative(f, m);
  std::vector<Vec2> out(df.size());
  for (std::size_t i = 0; i < df.size(); ++i) out[i] = df[i] * curve.tangents()[i];
  return out;
}

std::vector<double> tangential_divergence(const BoundaryCurve& curve, const std::vector<Vec2>& x,
                                          DerivativeMethod m) {
  require_samples(curve, x.size());
  std::vector<double> cx(x.size()), cy(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    cx[i] = x[i].x();
    cy[i] = x[i].y();
  }
  const std::vector<double> dx = curve.derivative(cx, m);
  const std::vector<double> dy = curve.derivative(cy, m);
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = Vec2(dx[i], dy[i]).dot(curve.tangents()[i]);
  return out;
}

std::function<Eigen::Matrix2d(const Vec2&)> fd_jacobian(std::function<Vec2(const Vec2&)> value, double step) {
  if (!(step > 0.0)) throw InvalidInput("fd_jacobian: step must be positive");
  return [value = std::move(value), step](const Vec2& x) {
    Eigen::Matrix2d j;
    for (int c = 0; c < 2; ++c) {
      Vec2 e = Vec2::Zero();
      e[c] = step;
      j.col(c) = (value(x - 2.0 * e) - 8.0 * value(x - e) + 8.0 * value(x + e) - value(x + 2.0 * e)) / (12.0 * step);
    }
    return j;
  };
}

AmbientVectorField normal_field(const BoundaryCurve& curve, std::function<double(const Vec2&)> g) {
  AmbientVectorField f;
  f.value = [&curve, g = std::move(g)](const Vec2& x) -> Vec2 { return g(x) * curve.extended_normal(x); };
  f.jacobian = fd_jacobian(f.value);
  return f;
}

std::vector<double> boundary_flow(const BoundaryCurve& curve, const AmbientVectorField& x) {
  if (!x.value || !x.jacobian) throw InvalidInput("boundary flow: field needs values and a Jacobian");
  std::vector<double> out(curve.size());
  for (int i = 0; i < curve.size(); ++i) {
    const Vec2& p = curve.points()[i];
    const Vec2 v = x.value(p);
    const Eigen::Matrix2d j = x.jacobian(p);
    out[i] = (j * v - j.trace() * v).dot(curve.normals()[i]);
  }
  return out;
}

std::vector<double> grisvard_identity_residual(const BoundaryCurve& curve, const AmbientVectorField& x,
                                               DerivativeMethod m) {
  if (!x.jacobian) throw InvalidInput("boundary identity: missing Jacobian");
  const std::vector<double> lhs = boundary_flow(curve, x);
  std::vector<Vec2> v(curve.size());
  for (int i = 0; i < curve.size(); ++i) v[i] = x.value(curve.points()[i]);
  const TangentialSplit s = tangential_split(curve, v);
  const std::vector<Vec2> dn = tangential_gradient(curve, s.normal, m);
  const std::vector<double> div_t = tangential_divergence(curve, s.tangential, m);
  std::vector<double> out(curve.size());
  for (int i = 0; i < curve.size(); ++i) {
    const double b = curve.curvature()[i];
    const double xn = s.normal[i];
    const double rhs = s.tangential[i].dot(dn[i]) - xn * div_t[i] + b * s.tangential[i].squaredNorm() + xn * xn * b;
    out[i] = lhs[i] - rhs;
  }
  return out;
}

NormalFlowBound normal_flow_bound(const BoundaryCurve& curve, const AmbientVectorField& x) {
  if (!x.value) throw InvalidInput("normal flow: field needs values");
  std::vector<Vec2> v(curve.size());
  for (int i = 0; i < curve.size(); ++i) v[i] = x.value(curve.points()[i]);
  const TangentialSplit s = tangential_split(curve, v);
  double max_t = 0.0, max_x = 0.0;
  for (int i = 0; i < curve.size(); ++i) {
    max_t = std::max(max_t, s.tangential[i].norm());
    max_x = std::max(max_x, v[i].norm());
  }
  if (max_t > 1e-10 * max_x) throw InvalidInput("normal flow: field is not normal on the boundary");
  NormalFlowBound r;
  r.flow = boundary_flow(curve, x);
  r.bound.resize(curve.size());
  for (int i = 0; i < curve.size(); ++i) r.bound[i] = std::abs(curve.curvature()[i]) * v[i].squaredNorm();
  return r;
}

namespace {

double capacity_on_grid(const ArcSet& e, const Vec2& center, double h, double tol) {
  const int n = static_cast<int>(std::ceil(1.0 / h)) + 1;
  const int side = 2 * n + 1;
  auto id = [&](int i, int j) { return static_cast<std::size_t>(i + n) + static_cast<std::size_t>(side) * (j + n); };
  auto pos = [&](int i, int j) -> Vec2 { return center + h * Vec2(i, j); };

  enum : std::uint8_t { kOut = 0, kOne = 1, kFree = 2 };
  std::vector<std::uint8_t> state(static_cast<std::size_t>(side) * side, kOut);
  for (int j = -n; j <= n; ++j)
    for (int i = -n; i <= n; ++i)
      if ((pos(i, j) - center).norm() < 1.0) state[id(i, j)] = kFree;

  const double reach = h * (1.0 + 1e-12);
  auto mark = [&](const Vec2& a, const Vec2& b) {
    const Vec2 lo = a.cwiseMin(b) - center, hi = a.cwiseMax(b) - center;
    const int i0 = std::max(-n, static_cast<int>(std::floor(lo.x() / h)) - 1);
    const int i1 = std::min(n, static_cast<int>(std::ceil(hi.x() / h)) + 1);
    const int j0 = std::max(-n, static_cast<int>(std::floor(lo.y() / h)) - 1);
    const int j1 = std::min(n, static_cast<int>(std::ceil(hi.y() / h)) + 1);
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i)
        if (state[id(i, j)] != kOut && point_segment_distance(pos(i, j), a, b) <= reach) state[id(i, j)] = kOne;
  };
  for (const auto& arc : e) {
    if (arc.size() == 1) mark(arc[0], arc[0]);
    for (std::size_t k = 0; k + 1 < arc.size(); ++k) mark(arc[k], arc[k + 1]);
  }

  std::vector<int> number(state.size(), -1);
  int unknowns = 0;
  for (std::size_t k = 0; k < state.size(); ++k)
    if (state[k] == kFree) number[k] = unknowns++;

  std::vector<double> value(state.size(), 0.0);
  for (std::size_t k = 0; k < state.size(); ++k)
    if (state[k] == kOne) value[k] = 1.0;

  if (unknowns > 0) {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(unknowns) * 5);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(unknowns);
    const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
    for (int j = -n; j <= n; ++j)
      for (int i = -n; i <= n; ++i) {
        const int row = number[id(i, j)];
        if (row < 0) continue;
        double diag = 0.0;
        for (int d = 0; d < 4; ++d) {
          const std::size_t nb = id(i + di[d], j + dj[d]);
          diag += 1.0;
          if (state[nb] == kFree)
            trip.emplace_back(row, number[nb], -1.0);
          else if (state[nb] == kOne)
            rhs[row] += 1.0;
        }
        trip.emplace_back(row, row, diag);
      }
    Eigen::SparseMatrix<double> a(unknowns, unknowns);
    a.setFromTriplets(trip.begin(), trip.end());
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>>
        cg;
    cg.setTolerance(tol);
    cg.setMaxIterations(20 * unknowns);
    cg.compute(a);
    if (cg.info() != Eigen::Success) throw std::runtime_error("capacity: preconditioner setup failed");
    const Eigen::VectorXd v = cg.solve(rhs);
    if (cg.info() != Eigen::Success) throw std::runtime_error("capacity: conjugate gradients did not converge");
    for (std::size_t k = 0; k < state.size(); ++k)
      if (number[k] >= 0) value[k] = v[number[k]];
  }

  double energy = 0.0;
  for (int j = -n; j <= n; ++j)
    for (int i = -n; i <= n; ++i) {
      const double c = value[id(i, j)];
      if (i < n) energy += (value[id(i + 1, j)] - c) * (value[id(i + 1, j)] - c);
      if (j < n) energy += (value[id(i, j + 1)] - c) * (value[id(i, j + 1)] - c);
    }
  return energy;
}

}  // namespace

double relative_capacity(const ArcSet& e, const Vec2& center, const CapacityOptions& options) {
  if (!(options.h > 0.0 && options.h <= 0.25)) throw InvalidInput("capacity: h must lie in (0, 1/4]");
  bool empty = true;
  for (const auto& arc : e)
    for (const Vec2& p : arc) {
      empty = false;
      if (!((p - center).norm() <= 1.0 - 2.0 * options.h))
        throw InvalidInput("capacity: E must lie inside B_1(center) with a margin of 2h");
    }
  if (empty) return 0.0;
  const double coarse = capacity_on_grid(e, center, options.h, options.cg_tolerance);
  if (!options.richardson) return coarse;
  const double fine = capacity_on_grid(e, center, 0.5 * options.h, options.cg_tolerance);
  return 2.0 * fine - coarse;
}

KQuantity k_quantity(const BoundaryCurve& curve, double r, const KQuantityOptions& options) {
  if (!(r > 0.0 && r < 1.0)) throw InvalidInput("k_quantity: need 0 < r < 1");
  if (options.centers < 1 || options.dyadic_levels < 1) throw InvalidInput("k_quantity: bad candidate family");
  const int n = curve.size();
  const double ds = curve.ds();
  KQuantity out;
  for (int c = 0; c < options.centers; ++c) {
    const int i = static_cast<int>(static_cast<long>(c) * n / options.centers);
    const Vec2& x = curve.points()[i];
    auto wrap = [&](int k) { return ((k % n) + n) % n; };
    int fwd = 0, bwd = 0;
    while (fwd < n / 2 && (curve.points()[wrap(i + fwd + 1)] - x).norm() < r) ++fwd;
    while (bwd < n / 2 && (curve.points()[wrap(i - bwd - 1)] - x).norm() < r) ++bwd;
    const int half = std::min(fwd, bwd);
    for (int level = 0; level < options.dyadic_levels; ++level) {
      const int m = half >> level;
      if (m < 1) break;
      std::vector<Vec2> arc;
      double bint = 0.0;
      for (int o = -m; o <= m; ++o) {
        arc.push_back(curve.points()[wrap(i + o)]);
        const double w = (o == -m || o == m) ? 0.5 : 1.0;
        bint += w * std::abs(curve.curvature()[wrap(i + o)]) * ds;
      }
      ++out.candidates;
      if (bint == 0.0) continue;
      const double cap = relative_capacity({arc}, x, options.capacity);
      const double ratio = bint / cap;
      if (ratio > out.value) {
        out.value = ratio;
        out.best_center = i;
        out.best_arc_length = 2.0 * m * ds;
      }
    }
  }
  return out;
}

BoundaryFunction boundary_function(const BoundaryCurve& curve, std::vector<double> values) {
  require_samples(curve, values.size());
  for (double v : values)
    if (!std::isfinite(v)) throw InvalidInput("boundary function: values must be finite");
  return {std::move(values), std::vector<double>(curve.size(), curve.ds())};
}

StepFunction::StepFunction(std::vector<double> breakpoints, std::vector<double> values)
    : bp_(std::move(breakpoints)), v_(std::move(values)) {
  if (bp_.size() != v_.size()) throw InvalidInput("step function: size mismatch");
  cum_.assign(bp_.size() + 1, 0.0);
  double prev = 0.0;
  for (std::size_t k = 0; k < bp_.size(); ++k) {
    if (bp_[k] < prev) throw InvalidInput("step function: breakpoints must increase");
    if (k > 0 && v_[k] > v_[k - 1]) throw InvalidInput("step function: values must not increase");
    cum_[k + 1] = cum_[k] + v_[k] * (bp_[k] - prev);
    prev = bp_[k];
  }
}

double StepFunction::operator()(double t) const {
  const auto it = std::upper_bound(bp_.begin(), bp_.end(), t);
  return it == bp_.end() ? 0.0 : v_[it - bp_.begin()];
}

double StepFunction::integral(double s) const {
  if (bp_.empty() || s <= 0.0) return 0.0;
  if (s >= bp_.back()) return cum_.back();
  const std::size_t k = std::upper_bound(bp_.begin(), bp_.end(), s) - bp_.begin();
  const double start = k == 0 ? 0.0 : bp_[k - 1];
  return cum_[k] + v_[k] * (s - start);
}

double distribution_function(const BoundaryFunction& psi, double lambda) {
  if (psi.values.size() != psi.weights.size()) throw InvalidInput("boundary function: size mismatch");
  double mu = 0.0;
  for (std::size_t i = 0; i < psi.values.size(); ++i)
    if (std::abs(psi.values[i]) > lambda) mu += psi.weights[i];
  return mu;
}

StepFunction decreasing_rearrangement(const BoundaryFunction& psi) {
  if (psi.values.size() != psi.weights.size()) throw InvalidInput("boundary function: size mismatch");
  std::vector<std::size_t> order(psi.values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(psi.values[a]) > std::abs(psi.values[b]); });
  std::vector<double> bp, v;
  double t = 0.0;
  for (std::size_t k : order) {
    if (!(psi.weights[k] > 0.0)) continue;
    t += psi.weights[k];
    const double a = std::abs(psi.values[k]);
    if (!v.empty() && v.back() == a) {
      bp.back() = t;
    } else {
      bp.push_back(t);
      v.push_back(a);
    }
  }
  return StepFunction(std::move(bp), std::move(v));
}

WeakNorms weak_norms(const BoundaryFunction& psi, double q, std::optional<double> zygmund_c) {
  if (!(q >= 1.0)) throw InvalidInput("weak norms: need q >= 1");
  const StepFunction star = decreasing_rearrangement(psi);
  const double c = zygmund_c.value_or(star.total());
  if (!(c > 0.0) && star.total() > 0.0) throw InvalidInput("weak norms: Zygmund constant must be positive");
  const double alpha = 1.0 / q - 1.0;
  WeakNorms out;
  auto zyg = [&](double s) { return std::log1p(c / s) * star.integral(s); };
  double prev = 0.0;
  for (double s1 : star.breakpoints()) {
    if (s1 <= prev) continue;
    out.lorentz = std::max(out.lorentz, std::pow(s1, alpha) * star.integral(s1));
    out.zygmund = std::max(out.zygmund, zyg(s1));
    // Golden-section search for an interior maximum on (prev, s1).
    constexpr double g = 0.6180339887498949;
    double a = prev, b = s1;
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = zyg(x1), f2 = zyg(x2);
    for (int it = 0; it < 80 && b - a > 1e-15 * s1; ++it) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + g * (b - a);
        f2 = zyg(x2);
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - g * (b - a);
        f1 = zyg(x1);
      }
    }
    out.zygmund = std::max({out.zygmund, f1, f2});
    prev = s1;
  }
  return out;
}

TraceCheck weighted_trace_check(const ScalarField& v, const BoundaryCurve& curve, const Vec2& center, double r,
                                double k_estimate) {
  if (!(r > 0.0)) throw InvalidInput("trace check: r must be positive");
  if (!(k_estimate >= 0.0)) throw InvalidInput("trace check: K estimate must be nonnegative");
  const GridDomain& d = v.domain();
  if (d.dim() != 2) throw InvalidInput("trace check: 2D grids only");
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (!d.active(k) || !std::isfinite(v[k])) continue;
    if ((d.position2(k) - center).norm() >= r && std::abs(v[k]) > 1e-14)
      throw InvalidInput("trace check: v does not vanish outside B_r(center)");
  }

  const double h = d.h();
  const Vec2 origin = d.position2(0);
  TraceCheck out;
  for (int s = 0; s < curve.size(); ++s) {
    const Vec2 y = (curve.points()[s] - origin) / h;
    const int i = static_cast<int>(std::floor(y.x()));
    const int j = static_cast<int>(std::floor(y.y()));
    if (i < 0 || j < 0 || i + 1 >= d.count(0) || j + 1 >= d.count(1))
      throw InvalidInput("trace check: curve leaves the grid");
    const double fx = y.x() - i, fy = y.y() - j;
    const int oi[4] = {0, 1, 0, 1}, oj[4] = {0, 0, 1, 1};
    double corner[4];
    bool defined[4];
    double sum = 0.0;
    int count = 0;
    for (int c = 0; c < 4; ++c) {
      const std::size_t idx = d.index(i + oi[c], j + oj[c]);
      defined[c] = d.active(idx) && std::isfinite(v[idx]);
      corner[c] = defined[c] ? v[idx] : 0.0;
      if (defined[c]) sum += corner[c], ++count;
    }
    if (count == 0) throw InvalidInput("trace check: v undefined next to the curve");
    double val = 0.0;
    for (int c = 0; c < 4; ++c)
      val += (oi[c] ? fx : 1.0 - fx) * (oj[c] ? fy : 1.0 - fy) * (defined[c] ? corner[c] : sum / count);
    out.lhs += val * val * std::abs(curve.curvature()[s]) * curve.ds();
  }
  out.rhs_factor = k_estimate * integrals(v).dv_l2sq;
  out.ratio = out.rhs_factor > 0.0 ? out.lhs / out.rhs_factor : (out.lhs == 0.0 ? 0.0 : INFINITY);
  return out;
}

}  // namespace plab
