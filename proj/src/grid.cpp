#include "plab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "plab/errors.hpp"

namespace plab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Vec2 nearest_on_segment(const Vec2& x, const Vec2& a, const Vec2& b) {
  const Vec2 d = b - a;
  const double len2 = d.squaredNorm();
  if (len2 == 0.0) return a;
  const double t = std::clamp((x - a).dot(d) / len2, 0.0, 1.0);
  return a + t * d;
}

// Point on the circle |y - c| = r closest to x (any point when x == c).
Vec2 nearest_on_circle(const Vec2& x, const Vec2& c, double r) {
  const Vec2 d = x - c;
  const double len = d.norm();
  if (len == 0.0) return c + Vec2(r, 0.0);
  return c + d * (r / len);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

BoxShape::BoxShape(Vec2 lo, Vec2 hi) : lo_(lo), hi_(hi) {
  if (!(hi.x() > lo.x() && hi.y() > lo.y())) throw InvalidInput("box: need lo < hi");
}

bool BoxShape::contains(const Vec2& x) const {
  return x.x() > lo_.x() && x.x() < hi_.x() && x.y() > lo_.y() && x.y() < hi_.y();
}

Vec2 BoxShape::nearest_boundary_point(const Vec2& x) const {
  if (!contains(x)) return x.cwiseMax(lo_).cwiseMin(hi_);
  const double d[4] = {x.x() - lo_.x(), hi_.x() - x.x(), x.y() - lo_.y(), hi_.y() - x.y()};
  const int k = static_cast<int>(std::min_element(d, d + 4) - d);
  Vec2 y = x;
  if (k == 0) y.x() = lo_.x();
  if (k == 1) y.x() = hi_.x();
  if (k == 2) y.y() = lo_.y();
  if (k == 3) y.y() = hi_.y();
  return y;
}

std::string BoxShape::describe() const {
  return "square[" + fmt(lo_.x()) + "," + fmt(hi_.x()) + "]x[" + fmt(lo_.y()) + "," + fmt(hi_.y()) + "]";
}

DiskShape::DiskShape(Vec2 center, double radius) : center_(center), radius_(radius) {
  if (!(radius > 0.0)) throw InvalidInput("disk: radius must be positive");
}

bool DiskShape::contains(const Vec2& x) const { return (x - center_).norm() < radius_; }

Vec2 DiskShape::nearest_boundary_point(const Vec2& x) const { return nearest_on_circle(x, center_, radius_); }

Eigen::AlignedBox2d DiskShape::bounds() const {
  const Vec2 r(radius_, radius_);
  return {center_ - r, center_ + r};
}

double DiskShape::area() const { return std::numbers::pi * radius_ * radius_; }

std::string DiskShape::describe() const {
  return "disk(" + fmt(center_.x()) + "," + fmt(center_.y()) + ";" + fmt(radius_) + ")";
}

AnnulusShape::AnnulusShape(Vec2 center, double r_inner, double r_outer)
    : center_(center), r_in_(r_inner), r_out_(r_outer) {
  if (!(r_inner > 0.0 && r_outer > r_inner)) throw InvalidInput("annulus: need 0 < r_inner < r_outer");
}

bool AnnulusShape::contains(const Vec2& x) const {
  const double r = (x - center_).norm();
  return r > r_in_ && r < r_out_;
}

Vec2 AnnulusShape::nearest_boundary_point(const Vec2& x) const {
  const double r = (x - center_).norm();
  return std::abs(r - r_in_) <= std::abs(r - r_out_) ? nearest_on_circle(x, center_, r_in_)
                                                     : nearest_on_circle(x, center_, r_out_);
}

Eigen::AlignedBox2d AnnulusShape::bounds() const {
  const Vec2 r(r_out_, r_out_);
  return {center_ - r, center_ + r};
}

double AnnulusShape::area() const { return std::numbers::pi * (r_out_ * r_out_ - r_in_ * r_in_); }

std::string AnnulusShape::describe() const {
  return "annulus(" + fmt(center_.x()) + "," + fmt(center_.y()) + ";" + fmt(r_in_) + "," + fmt(r_out_) + ")";
}

PolygonShape::PolygonShape(std::vector<Vec2> vertices) : v_(std::move(vertices)) {
  if (v_.size() < 3) throw InvalidInput("polygon: need at least 3 vertices");
  if (!(area() > 0.0)) throw InvalidInput("polygon: degenerate");
}

bool PolygonShape::contains(const Vec2& x) const {
  bool in = false;
  const std::size_t n = v_.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = v_[i];
    const Vec2& b = v_[j];
    if ((a.y() > x.y()) != (b.y() > x.y())) {
      const double xc = a.x() + (x.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (x.x() < xc) in = !in;
    }
  }
  if (!in) return false;
  // Points on an edge are not interior.
  return (nearest_boundary_point(x) - x).norm() > 0.0;
}

Vec2 PolygonShape::nearest_boundary_point(const Vec2& x) const {
  Vec2 best = v_.front();
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v_.size(); ++i) {
    const Vec2 y = nearest_on_segment(x, v_[i], v_[(i + 1) % v_.size()]);
    const double d = (y - x).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = y;
    }
  }
  return best;
}

Eigen::AlignedBox2d PolygonShape::bounds() const {
  Eigen::AlignedBox2d b;
  for (const auto& p : v_) b.extend(p);
  return b;
}

double PolygonShape::area() const {
  double s = 0.0;
  for (std::size_t i = 0; i < v_.size(); ++i) {
    const Vec2& a = v_[i];
    const Vec2& b = v_[(i + 1) % v_.size()];
    s += a.x() * b.y() - b.x() * a.y();
  }
  return 0.5 * std::abs(s);
}

bool PolygonShape::convex() const {
  int sign = 0;
  for (std::size_t i = 0; i < v_.size(); ++i) {
    const Vec2 e1 = v_[(i + 1) % v_.size()] - v_[i];
    const Vec2 e2 = v_[(i + 2) % v_.size()] - v_[(i + 1) % v_.size()];
    const double cross = e1.x() * e2.y() - e1.y() * e2.x();
    if (cross == 0.0) continue;
    const int s = cross > 0 ? 1 : -1;
    if (sign == 0) sign = s;
    if (s != sign) return false;
  }
  return true;
}

std::string PolygonShape::describe() const {
  std::string s = "polygon(";
  for (std::size_t i = 0; i < v_.size(); ++i) {
    if (i) s += ";";
    s += fmt(v_[i].x()) + "," + fmt(v_[i].y());
  }
  return s + ")";
}

std::shared_ptr<const GridDomain> GridDomain::box(int dim, const Vec3& lo, const Vec3& hi, double h) {
  if (dim != 2 && dim != 3) throw InvalidInput("grid: dimension must be 2 or 3");
  if (!(h > 0.0)) throw InvalidInput("grid: h must be positive");
  if (dim == 2) {
    for (int a = 0; a < 2; ++a) {
      const double r = lo[a] / h;
      const double s = hi[a] / h;
      if (std::abs(r - std::round(r)) > 1e-9 || std::abs(s - std::round(s)) > 1e-9) {
        throw InvalidInput("grid: box corners must be multiples of h");
      }
    }
    return from_shape(std::make_shared<BoxShape>(lo.head<2>(), hi.head<2>()), h);
  }
  std::shared_ptr<GridDomain> g(new GridDomain());
  g->dim_ = 3;
  g->h_ = h;
  for (int a = 0; a < 3; ++a) {
    const double r = lo[a] / h;
    const double s = hi[a] / h;
    if (std::abs(r - std::round(r)) > 1e-9 || std::abs(s - std::round(s)) > 1e-9) {
      throw InvalidInput("grid: box corners must be multiples of h");
    }
    g->first_[a] = std::lround(r);
    g->count_[a] = static_cast<int>(std::lround(s) - std::lround(r)) + 1;
    if (g->count_[a] < 3) throw InvalidInput("grid: box must span at least two cells per axis");
  }
  g->stride_ = {1, static_cast<std::size_t>(g->count_[0]),
                static_cast<std::size_t>(g->count_[0]) * g->count_[1]};
  g->kind_.assign(g->stride_[2] * g->count_[2], NodeKind::inside);
  for (std::size_t idx = 0; idx < g->kind_.size(); ++idx) {
    const auto c = g->coords(idx);
    for (int a = 0; a < 3; ++a) {
      if (c[a] == 0 || c[a] == g->count_[a] - 1) g->kind_[idx] = NodeKind::boundary;
    }
  }
  return g;
}

std::shared_ptr<const GridDomain> GridDomain::from_shape(std::shared_ptr<const Shape> shape, double h) {
  if (!shape) throw InvalidInput("grid: null shape");
  if (!(h > 0.0)) throw InvalidInput("grid: h must be positive");
  const auto bb = shape->bounds();
  std::shared_ptr<GridDomain> g(new GridDomain());
  g->dim_ = 2;
  g->h_ = h;
  g->shape_ = shape;
  for (int a = 0; a < 2; ++a) {
    const long lo = static_cast<long>(std::floor(bb.min()[a] / h + 1e-9)) - 2;
    const long hi = static_cast<long>(std::ceil(bb.max()[a] / h - 1e-9)) + 2;
    g->first_[a] = lo;
    g->count_[a] = static_cast<int>(hi - lo + 1);
  }
  if (g->count_[0] < 7 || g->count_[1] < 7) throw InvalidInput("grid: h too coarse for the shape");
  g->stride_ = {1, static_cast<std::size_t>(g->count_[0]),
                static_cast<std::size_t>(g->count_[0]) * g->count_[1]};
  g->kind_.assign(g->stride_[2], NodeKind::outside);
  const double tol = 1e-9 * h;
  for (std::size_t idx = 0; idx < g->kind_.size(); ++idx) {
    const Vec2 x = g->position2(idx);
    if (shape->contains(x) && (shape->nearest_boundary_point(x) - x).norm() > tol) {
      g->kind_[idx] = NodeKind::inside;
    }
  }
  for (int j = 0; j < g->count_[1]; ++j) {
    for (int i = 0; i < g->count_[0]; ++i) {
      const std::size_t idx = g->index(i, j);
      if (g->kind_[idx] != NodeKind::inside) continue;
      if (i == 0 || j == 0 || i == g->count_[0] - 1 || j == g->count_[1] - 1) {
        throw InvalidInput("grid: inside node on the grid edge");
      }
      for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          const std::size_t n = g->index(i + di, j + dj);
          if (g->kind_[n] == NodeKind::outside) g->kind_[n] = NodeKind::boundary;
        }
      }
    }
  }
  if (g->count_kind(NodeKind::inside) == 0) throw InvalidInput("grid: no inside nodes");
  return g;
}

std::array<int, 3> GridDomain::coords(std::size_t idx) const {
  const int k = static_cast<int>(idx / stride_[2]);
  const std::size_t rem = idx - k * stride_[2];
  const int j = static_cast<int>(rem / stride_[1]);
  const int i = static_cast<int>(rem - j * stride_[1]);
  return {i, j, k};
}

Vec3 GridDomain::position(std::size_t idx) const {
  const auto c = coords(idx);
  Vec3 x = Vec3::Zero();
  for (int a = 0; a < dim_; ++a) x[a] = static_cast<double>(first_[a] + c[a]) * h_;
  return x;
}

Vec2 GridDomain::position2(std::size_t idx) const { return position(idx).head<2>(); }

std::ptrdiff_t GridDomain::shifted(std::size_t idx, int axis, int offset) const {
  const int m = static_cast<int>((idx / stride_[axis]) % count_[axis]) + offset;
  if (m < 0 || m >= count_[axis]) return -1;
  return static_cast<std::ptrdiff_t>(idx) + static_cast<std::ptrdiff_t>(stride_[axis]) * offset;
}

std::ptrdiff_t GridDomain::node_at(const Vec3& x) const {
  std::array<int, 3> c{0, 0, 0};
  for (int a = 0; a < dim_; ++a) {
    const double r = x[a] / h_;
    const double k = std::round(r);
    if (std::abs(r - k) > 1e-6) return -1;
    const long m = static_cast<long>(k) - first_[a];
    if (m < 0 || m >= count_[a]) return -1;
    c[a] = static_cast<int>(m);
  }
  return static_cast<std::ptrdiff_t>(index(c[0], c[1], c[2]));
}

std::size_t GridDomain::count_kind(NodeKind k) const {
  return static_cast<std::size_t>(std::count(kind_.begin(), kind_.end(), k));
}

ScalarField::ScalarField(DomainPtr domain) : domain_(std::move(domain)) {
  if (!domain_) throw InvalidInput("field: null domain");
  values_.assign(domain_->size(), kNaN);
}

ScalarField ScalarField::sample(DomainPtr domain, const std::function<double(const Vec3&)>& f) {
  ScalarField out(std::move(domain));
  const GridDomain& g = out.domain();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.active(i)) out.values_[i] = f(g.position(i));
  }
  return out;
}

ScalarField sample_dirichlet(DomainPtr domain, const std::function<double(const Vec2&)>& f) {
  ScalarField out(domain);
  const GridDomain& g = *domain;
  if (g.dim() != 2) throw InvalidInput("sample_dirichlet: 2D grids only");
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec2 x = g.position2(i);
    if (g.inside(i)) {
      out[i] = f(x);
    } else if (g.kind(i) == NodeKind::boundary) {
      out[i] = f(g.shape() ? g.shape()->nearest_boundary_point(x) : x);
    }
  }
  return out;
}

VectorField::VectorField(DomainPtr domain, int components) {
  if (components < 1) throw InvalidInput("vector field: need at least one component");
  comp_.assign(components, ScalarField(std::move(domain)));
}

VectorField VectorField::sample(DomainPtr domain, int components,
                                const std::function<SmallVec(const Vec3&)>& f) {
  VectorField out(domain, components);
  for (std::size_t i = 0; i < domain->size(); ++i) {
    if (domain->active(i)) out.set(i, f(domain->position(i)));
  }
  return out;
}

SmallVec VectorField::at(std::size_t idx) const {
  SmallVec v(components());
  for (int c = 0; c < components(); ++c) v[c] = comp_[c][idx];
  return v;
}

void VectorField::set(std::size_t idx, const SmallVec& v) {
  if (v.size() != components()) throw InvalidInput("vector field: component count mismatch");
  for (int c = 0; c < components(); ++c) comp_[c][idx] = v[c];
}

MatrixField::MatrixField(DomainPtr domain, int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 1 || cols < 1) throw InvalidInput("matrix field: bad shape");
  e_.assign(static_cast<std::size_t>(rows) * cols, ScalarField(std::move(domain)));
}

SmallMat MatrixField::at(std::size_t idx) const {
  SmallMat m(rows_, cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j)[idx];
  }
  return m;
}

void MatrixField::set(std::size_t idx, const SmallMat& m) {
  if (m.rows() != rows_ || m.cols() != cols_) throw InvalidInput("matrix field: shape mismatch");
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) (*this)(i, j)[idx] = m(i, j);
  }
}

FieldExtremes extremes(const ScalarField& f, NodeKind kind) {
  FieldExtremes e;
  e.min = std::numeric_limits<double>::infinity();
  e.max = -std::numeric_limits<double>::infinity();
  const GridDomain& g = f.domain();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.kind(i) != kind) continue;
    const double v = f[i];
    if (!std::isfinite(v)) {
      ++e.skipped;
      continue;
    }
    ++e.counted;
    e.min = std::min(e.min, v);
    e.max = std::max(e.max, v);
    e.max_abs = std::max(e.max_abs, std::abs(v));
  }
  if (e.counted == 0) e.min = e.max = 0.0;
  return e;
}

void write_field_csv(std::ostream& os, const ScalarField& f, const std::string& value_name) {
  const GridDomain& g = f.domain();
  os << (g.dim() == 2 ? "x,y" : "x,y,z") << ",kind," << value_name << "\n";
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!g.active(i)) continue;
    const Vec3 x = g.position(i);
    os << fmt(x[0]) << "," << fmt(x[1]);
    if (g.dim() == 3) os << "," << fmt(x[2]);
    os << "," << (g.inside(i) ? "inside" : "boundary") << "," << fmt(f[i]) << "\n";
  }
}

}  // namespace plab
