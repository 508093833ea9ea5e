#pragma once

// Closed planar boundary curves sampled uniformly in arclength: tangential
// calculus, the boundary divergence identity for vector fields, relative
// capacity of boundary arcs, the curvature-to-capacity quantity K(r), and
// rearrangement-invariant norms of boundary functions.
//
// Orientation is counterclockwise, nu is the outward normal and the scalar
// second fundamental form is B = <d^2 gamma/ds^2, nu>. A convex curve has
// B <= 0 and ∮ B ds = -2π; the unit circle has B = -1.

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "plab/grid.hpp"

namespace plab {

/// 2π-periodic parametrization with its first two derivatives and a
/// level-set function F (F < 0 inside) with its gradient; DF/|DF| extends nu
/// off the curve.
struct ParametricCurve {
  std::string name;
  std::function<Vec2(double)> position;
  std::function<Vec2(double)> d1;
  std::function<Vec2(double)> d2;
  std::function<double(const Vec2&)> level_set;
  std::function<Vec2(const Vec2&)> level_set_gradient;
  bool convex = false;
};

ParametricCurve circle_curve(const Vec2& center, double radius);
/// Axes a (along x) and b.
ParametricCurve ellipse_curve(double a, double b);
/// Square [-half, half]^2 with corners rounded to radius rho; the parameter
/// is proportional to arclength and starts at the middle of a corner arc.
ParametricCurve rounded_square_curve(double half, double rho);
/// Polar curve r = 1 + 0.3 cos(2t): smooth and nonconvex.
ParametricCurve bean_curve();

/// Catalog: "circle", "ellipse" (2, 1), "rounded_square" (half 1, rho),
/// "bean". `rho` is used by rounded_square only.
ParametricCurve curve_catalog(const std::string& name, double rho = 0.25);

enum class DerivativeMethod { spectral, fd4 };

class BoundaryCurve {
 public:
  /// Samples `count` points equally spaced in arclength (count >= 16).
  BoundaryCurve(const ParametricCurve& curve, int count);

  const std::string& name() const { return name_; }
  int size() const { return static_cast<int>(x_.size()); }
  double length() const { return length_; }
  double ds() const { return length_ / size(); }
  bool convex() const { return convex_; }

  const std::vector<Vec2>& points() const { return x_; }
  const std::vector<Vec2>& tangents() const { return tau_; }
  const std::vector<Vec2>& normals() const { return nu_; }
  /// B at each sample.
  const std::vector<double>& curvature() const { return b_; }
  const std::function<double(const Vec2&)>& level_set() const { return level_set_; }

  /// Outward unit normal extended off the curve by the level set; throws if
  /// the curve has none.
  Vec2 extended_normal(const Vec2& x) const;

  /// d/ds of periodic samples.
  std::vector<double> derivative(const std::vector<double>& f, DerivativeMethod m = DerivativeMethod::spectral) const;

  /// Largest secant slope |<y - x_i, nu_i>| / |<y - x_i, tau_i>| over samples
  /// y within arclength `window` of x_i, maximized over i.
  double lipschitz_estimate(double window) const;
  double diameter() const;

  /// Polygon through the samples (for building grids on the enclosed domain).
  std::shared_ptr<const Shape> polygon() const;

 private:
  std::string name_;
  double length_ = 0.0;
  bool convex_ = false;
  std::vector<Vec2> x_, tau_, nu_;
  std::vector<double> b_;
  std::function<double(const Vec2&)> level_set_;
  std::function<Vec2(const Vec2&)> level_set_gradient_;
};

struct TangentialSplit {
  std::vector<Vec2> tangential;  // X_T
  std::vector<double> normal;    // <X, nu>
};
TangentialSplit tangential_split(const BoundaryCurve& curve, const std::vector<Vec2>& x);

/// D_T f = (df/ds) tau. Requires one value per sample.
std::vector<Vec2> tangential_gradient(const BoundaryCurve& curve, const std::vector<double>& f,
                                      DerivativeMethod m = DerivativeMethod::spectral);
/// div_T X = <dX/ds, tau>.
std::vector<double> tangential_divergence(const BoundaryCurve& curve, const std::vector<Vec2>& x,
                                          DerivativeMethod m = DerivativeMethod::spectral);

/// A vector field on a neighborhood of the curve with its Jacobian.
struct AmbientVectorField {
  std::function<Vec2(const Vec2&)> value;
  /// J_ij = dX_i/dx_j.
  std::function<Eigen::Matrix2d(const Vec2&)> jacobian;
};

/// Jacobian by fourth-order central differences with step `step`.
std::function<Eigen::Matrix2d(const Vec2&)> fd_jacobian(std::function<Vec2(const Vec2&)> value, double step = 1e-3);

/// X = g(x) * extended_normal(x), Jacobian by fd_jacobian.
AmbientVectorField normal_field(const BoundaryCurve& curve, std::function<double(const Vec2&)> g);

/// Per sample: <DX X - div(X) X, nu>.
std::vector<double> boundary_flow(const BoundaryCurve& curve, const AmbientVectorField& x);

/// Per sample: flow minus
///   <X_T, D_T<X,nu>> - <X,nu> div_T(X_T) + B(X_T,X_T) + <X,nu>^2 tr(B).
/// Throws if the field has no Jacobian.
std::vector<double> grisvard_identity_residual(const BoundaryCurve& curve, const AmbientVectorField& x,
                                               DerivativeMethod m = DerivativeMethod::spectral);

struct NormalFlowBound {
  std::vector<double> flow;
  std::vector<double> bound;  // |B| |X|^2
};
/// Requires max |X_T| <= 1e-10 max |X| on the samples.
NormalFlowBound normal_flow_bound(const BoundaryCurve& curve, const AmbientVectorField& x);

/// Finite union of polylines.
using ArcSet = std::vector<std::vector<Vec2>>;

struct CapacityOptions {
  double h = 1.0 / 64.0;
  /// Combine solves at h and h/2 as 2 cap(h/2) - cap(h).
  bool richardson = true;
  double cg_tolerance = 1e-10;
};

/// Discrete capacity of E relative to B_1(center): minimize Σ_edges (v_i - v_j)^2
/// over 5-point grid functions on B_1(center) with v = 0 at nodes with
/// |x - center| >= 1 and v = 1 at nodes within h of E. Conjugate gradients
/// with a Jacobi preconditioner. E must keep a distance of at
/// least 2h from the unit circle.
double relative_capacity(const ArcSet& e, const Vec2& center, const CapacityOptions& options = {});

struct KQuantityOptions {
  int centers = 16;         // centers equally spaced among the samples
  int dyadic_levels = 3;    // sub-arcs of length L, L/2, ..., L/2^(levels-1)
  CapacityOptions capacity;
};

struct KQuantity {
  double value = 0.0;        // best ratio found (a lower-bound estimate)
  int best_center = -1;      // sample index
  double best_arc_length = 0.0;
  std::size_t candidates = 0;
};

/// Candidate-family estimate of sup_x sup_E ∫_E |B| ds / cap_{B_1(x)}(E):
/// x runs over sampled boundary points, E over sub-arcs of the connected arc
/// of the boundary inside B_r(x) that are centered at x with dyadic lengths.
KQuantity k_quantity(const BoundaryCurve& curve, double r, const KQuantityOptions& options = {});

/// Boundary function sampled with quadrature weights (arclength elements).
struct BoundaryFunction {
  std::vector<double> values;
  std::vector<double> weights;
};
BoundaryFunction boundary_function(const BoundaryCurve& curve, std::vector<double> values);

/// Right-continuous non-increasing step function on (0, total).
class StepFunction {
 public:
  StepFunction(std::vector<double> breakpoints, std::vector<double> values);
  /// Value on [breakpoints[k-1], breakpoints[k]) with breakpoints[-1] = 0.
  double operator()(double t) const;
  /// ∫_0^s.
  double integral(double s) const;
  double total() const { return bp_.empty() ? 0.0 : bp_.back(); }
  const std::vector<double>& breakpoints() const { return bp_; }
  const std::vector<double>& values() const { return v_; }

 private:
  std::vector<double> bp_;
  std::vector<double> v_;
  std::vector<double> cum_;
};

/// mu({|psi| > lambda}).
double distribution_function(const BoundaryFunction& psi, double lambda);
/// psi*(t) = sup{lambda > 0 : mu_psi(lambda) > t}.
StepFunction decreasing_rearrangement(const BoundaryFunction& psi);

struct WeakNorms {
  double lorentz = 0.0;  // sup_s s^(1/q - 1) ∫_0^s psi*
  double zygmund = 0.0;  // sup_s log(1 + C/s) ∫_0^s psi*
};
/// Suprema over 0 < s < mu(total). The Lorentz expression is maximized over
/// the breakpoints (it has no interior maximum on a piece); the Zygmund one
/// by golden-section search on each piece. `zygmund_c` defaults to the total
/// measure.
WeakNorms weak_norms(const BoundaryFunction& psi, double q, std::optional<double> zygmund_c = std::nullopt);

struct TraceCheck {
  double lhs = 0.0;         // ∮ v^2 |B| ds
  double rhs_factor = 0.0;  // k_estimate * ∫_{Ω ∩ B_r} |Dv|^2
  double ratio = 0.0;       // lhs / rhs_factor, 0 when both vanish
};
/// v lives on a grid over the domain bounded by `curve`; it is interpolated
/// bilinearly at the samples, with cell corners where v is undefined replaced
/// by the mean of the defined ones. Rejects v that is nonzero at a node outside
/// B_r(center).
TraceCheck weighted_trace_check(const ScalarField& v, const BoundaryCurve& curve, const Vec2& center, double r,
                                double k_estimate);

}  // namespace plab
