#pragma once

// Uniform Cartesian grids with an inside/boundary/outside node mask, and the
// grid-sampled scalar, vector and matrix fields that live on them.

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace plab {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using SmallVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;
using SmallMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;

/// Open planar region with a projection onto its boundary.
class Shape {
 public:
  virtual ~Shape() = default;
  virtual bool contains(const Vec2& x) const = 0;
  virtual Vec2 nearest_boundary_point(const Vec2& x) const = 0;
  virtual Eigen::AlignedBox2d bounds() const = 0;
  virtual double area() const = 0;
  virtual bool convex() const = 0;
  virtual std::string describe() const = 0;
};

class BoxShape final : public Shape {
 public:
  BoxShape(Vec2 lo, Vec2 hi);
  bool contains(const Vec2& x) const override;
  Vec2 nearest_boundary_point(const Vec2& x) const override;
  Eigen::AlignedBox2d bounds() const override { return {lo_, hi_}; }
  double area() const override { return (hi_ - lo_).prod(); }
  bool convex() const override { return true; }
  std::string describe() const override;

 private:
  Vec2 lo_, hi_;
};

class DiskShape final : public Shape {
 public:
  DiskShape(Vec2 center, double radius);
  bool contains(const Vec2& x) const override;
  Vec2 nearest_boundary_point(const Vec2& x) const override;
  Eigen::AlignedBox2d bounds() const override;
  double area() const override;
  bool convex() const override { return true; }
  std::string describe() const override;
  const Vec2& center() const { return center_; }
  double radius() const { return radius_; }

 private:
  Vec2 center_;
  double radius_;
};

class AnnulusShape final : public Shape {
 public:
  AnnulusShape(Vec2 center, double r_inner, double r_outer);
  bool contains(const Vec2& x) const override;
  Vec2 nearest_boundary_point(const Vec2& x) const override;
  Eigen::AlignedBox2d bounds() const override;
  double area() const override;
  bool convex() const override { return false; }
  std::string describe() const override;
  const Vec2& center() const { return center_; }
  double r_inner() const { return r_in_; }
  double r_outer() const { return r_out_; }

 private:
  Vec2 center_;
  double r_in_, r_out_;
};

/// Simple polygon given by its vertices (either orientation).
class PolygonShape final : public Shape {
 public:
  explicit PolygonShape(std::vector<Vec2> vertices);
  bool contains(const Vec2& x) const override;
  Vec2 nearest_boundary_point(const Vec2& x) const override;
  Eigen::AlignedBox2d bounds() const override;
  double area() const override;
  bool convex() const override;
  std::string describe() const override;

 private:
  std::vector<Vec2> v_;
};

enum class NodeKind : std::uint8_t { outside = 0, boundary = 1, inside = 2 };

class GridDomain {
 public:
  /// Box [lo, hi] in 2 or 3 dimensions; lo and hi must be multiples of h.
  /// Face nodes are boundary nodes, the rest inside.
  static std::shared_ptr<const GridDomain> box(int dim, const Vec3& lo, const Vec3& hi, double h);

  /// 2D grid aligned with multiples of h covering `shape`. Nodes inside the
  /// open shape are inside; non-inside nodes sharing a cell with an inside
  /// node are boundary nodes (so every inside node has its full 3x3
  /// neighborhood in inside u boundary).
  static std::shared_ptr<const GridDomain> from_shape(std::shared_ptr<const Shape> shape, double h);

  int dim() const { return dim_; }
  double h() const { return h_; }
  int count(int axis) const { return count_[axis]; }
  std::size_t size() const { return kind_.size(); }
  std::size_t stride(int axis) const { return stride_[axis]; }

  NodeKind kind(std::size_t idx) const { return kind_[idx]; }
  bool active(std::size_t idx) const { return kind_[idx] != NodeKind::outside; }
  bool inside(std::size_t idx) const { return kind_[idx] == NodeKind::inside; }

  std::size_t index(int i, int j, int k = 0) const {
    return static_cast<std::size_t>(i) + stride_[1] * j + stride_[2] * k;
  }
  std::array<int, 3> coords(std::size_t idx) const;
  /// Position; the z component is zero for 2D grids.
  Vec3 position(std::size_t idx) const;
  Vec2 position2(std::size_t idx) const;

  /// Index of the node `offset` steps along `axis`, or -1 off the grid.
  std::ptrdiff_t shifted(std::size_t idx, int axis, int offset) const;

  /// Index of the node at x (within 1e-6 h), or -1 if x is not a node.
  std::ptrdiff_t node_at(const Vec3& x) const;

  /// Shape this grid was built from (nullptr for 3D boxes).
  const Shape* shape() const { return shape_.get(); }

  std::size_t count_kind(NodeKind k) const;

 private:
  GridDomain() = default;
  int dim_ = 2;
  double h_ = 0.0;
  std::array<int, 3> count_{1, 1, 1};
  std::array<long, 3> first_{0, 0, 0};  // position = (first + i) * h
  std::array<std::size_t, 3> stride_{1, 1, 1};
  std::vector<NodeKind> kind_;
  std::shared_ptr<const Shape> shape_;
};

using DomainPtr = std::shared_ptr<const GridDomain>;

/// Real value per node; NaN where undefined.
class ScalarField {
 public:
  explicit ScalarField(DomainPtr domain);
  /// f at every active node.
  static ScalarField sample(DomainPtr domain, const std::function<double(const Vec3&)>& f);

  const GridDomain& domain() const { return *domain_; }
  const DomainPtr& domain_ptr() const { return domain_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

 private:
  DomainPtr domain_;
  std::vector<double> values_;
};

/// Dirichlet data on a shape-based grid: f at inside nodes, f at the nearest
/// boundary point for boundary nodes.
ScalarField sample_dirichlet(DomainPtr domain, const std::function<double(const Vec2&)>& f);

class VectorField {
 public:
  VectorField(DomainPtr domain, int components);
  static VectorField sample(DomainPtr domain, int components,
                            const std::function<SmallVec(const Vec3&)>& f);

  int components() const { return static_cast<int>(comp_.size()); }
  const GridDomain& domain() const { return comp_.front().domain(); }
  const DomainPtr& domain_ptr() const { return comp_.front().domain_ptr(); }
  const ScalarField& operator[](int c) const { return comp_[c]; }
  ScalarField& operator[](int c) { return comp_[c]; }
  SmallVec at(std::size_t idx) const;
  void set(std::size_t idx, const SmallVec& v);

 private:
  std::vector<ScalarField> comp_;
};

/// rows x cols matrix per node, entry (i, j) stored as a ScalarField.
class MatrixField {
 public:
  MatrixField(DomainPtr domain, int rows, int cols);
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const ScalarField& operator()(int i, int j) const { return e_[i * cols_ + j]; }
  ScalarField& operator()(int i, int j) { return e_[i * cols_ + j]; }
  SmallMat at(std::size_t idx) const;
  void set(std::size_t idx, const SmallMat& m);
  const DomainPtr& domain_ptr() const { return e_.front().domain_ptr(); }

 private:
  int rows_, cols_;
  std::vector<ScalarField> e_;
};

struct FieldExtremes {
  double max_abs = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::size_t counted = 0;   // finite values over the selected nodes
  std::size_t skipped = 0;   // selected nodes holding NaN
};

/// Extremes over nodes of the given kind (inside by default).
FieldExtremes extremes(const ScalarField& f, NodeKind kind = NodeKind::inside);

/// CSV snapshot: one row per active node with coordinates, kind and value.
void write_field_csv(std::ostream& os, const ScalarField& f, const std::string& value_name = "value");

}  // namespace plab
