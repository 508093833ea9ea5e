#pragma once

// Discrete regularized p-energy  E(v) = ∫ (|Dv|^2 + eps)^{p/2}  on 2D grids,
// its minimization under Dirichlet data by damped Newton, and the discrete
// norms used by the global estimates.
//
// Discretization: every cell whose four corners are active contributes
// (h^2/4) Σ_corners F(g_k), where g_k is the forward-difference gradient
// along the two cell edges meeting at corner k (the P1 gradient of the
// corner triangle, both diagonal splittings averaged). Affine functions have
// g_k constant, so they are exact discrete minimizers.

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "plab/analytic.hpp"
#include "plab/grid.hpp"
#include "plab/operator_profile.hpp"

namespace plab {

struct DirichletProblem {
  DomainPtr domain;
  OperatorProfile profile;
  /// Values on inside and boundary nodes; boundary values are imposed.
  ScalarField phi;
};

enum class DataSampling {
  /// phi evaluated at every active node (phi must be defined outside the domain).
  at_nodes,
  /// Boundary nodes take phi at the nearest boundary point (sample_dirichlet).
  nearest_boundary_point,
};

/// Dirichlet problem on a shape grid. With at_nodes, affine phi is an exact
/// discrete solution on any domain.
DirichletProblem make_problem(DomainPtr domain, const OperatorProfile& profile,
                              const std::function<double(const Vec2&)>& phi,
                              DataSampling sampling = DataSampling::at_nodes);

struct SolveOptions {
  /// Stop when max_i |dE/du_i| / h^2 <= tol.
  double tol = 1e-9;
  int max_iterations = 200;
  /// Starting values on inside nodes; the p = 2 solution when absent.
  std::optional<ScalarField> initial;
};

struct SolveReport {
  ScalarField u;
  /// E at the start and after every accepted step. Each entry is the previous
  /// one plus an accurately evaluated, nonpositive energy change.
  std::vector<double> energy_history;
  double gradient_norm = 0.0;  // max_i |dE/du_i| / h^2 at exit
  int iterations = 0;
  int newton_steps = 0;
  int gradient_steps = 0;
  bool converged = false;
};

class SolveError : public std::runtime_error {
 public:
  SolveError(const std::string& what, SolveReport report)
      : std::runtime_error(what), report_(std::move(report)) {}
  const SolveReport& report() const { return report_; }

 private:
  SolveReport report_;
};

/// Discrete energy for a profile.
double energy(const ScalarField& v, const OperatorProfile& profile);
/// Same with raw (p, eps); eps = 0 is allowed here.
double energy(const ScalarField& v, double p, double eps);

/// Gradient of the energy with respect to the values at inside nodes
/// (zero elsewhere), in node order.
std::vector<double> energy_gradient(const ScalarField& v, const OperatorProfile& profile);

/// Damped Newton with Armijo backtracking (factor 1e-4); falls back to a
/// diagonally scaled gradient step when the Newton direction fails.
/// Throws SolveError (carrying the report) if not converged.
SolveReport solve(const DirichletProblem& problem, const SolveOptions& options = {});

struct Norms {
  double du_l2 = 0.0;   // ||Du||_{L^2}
  double d2u_l2 = 0.0;  // ||D^2u||_{L^2}, over cells with stencil support
  double du_w12 = 0.0;  // (||Du||^2 + ||D^2u||^2)^{1/2}
  double du_lp = 0.0;   // ||Du||_{L^p}; 0 when p is absent
  double area = 0.0;            // total area of the quadrature cells
  double excluded_area = 0.0;   // area of cells left out of ||D^2u||
};

struct NormOptions {
  /// Cells used for ||D^2u|| must have all corners at least this many node
  /// steps (in the max norm) away from any non-inside node.
  int d2_margin = 1;
};

/// Midpoint quadrature over cells with four active corners. Du at the cell
/// midpoint is the average of the two edge differences per axis; D^2u is the
/// average of the nodal central-difference Hessians at the corners.
Norms norms(const ScalarField& u, std::optional<double> p = std::nullopt, const NormOptions& options = {});

/// Same quantities for an analytic field, with exact derivatives evaluated at
/// the midpoints of the same cells that norms() would use on this grid.
Norms analytic_norms(const AnalyticScalar& f, const DomainPtr& domain, std::optional<double> p = std::nullopt,
                     const NormOptions& options = {});

/// energy(u) <= energy(phi) * (1 + 1e-12) + 1e-14.
bool minimality_bound_check(const SolveReport& report, const ScalarField& phi, const OperatorProfile& profile);

struct OscillationCheck {
  double lhs = 0.0;    // ∫_{B_r} |DV_b|^2
  double rhs = 0.0;    // ∫_{B_2r} |V_b - mean_{B_2r} V_b|^2
  double ratio = 0.0;  // lhs * r^2 / rhs (0 when both vanish)
};

/// Node quadrature (weight h^2) over nodes in the balls; V_b = b(|Du|)Du
/// with Du from central differences. Rejects balls whose closed 2r-ball
/// (plus two nodes) is not covered by inside nodes.
OscillationCheck local_oscillation_check(const ScalarField& u, const OperatorProfile& profile, const Vec2& center,
                                         double r);

/// eta = 1 on B_r(center), 0 outside B_2r(center), 1 - S((|x-c| - r)/r)
/// between with S(s) = 3s^2 - 2s^3; C^1 and |D eta| <= 1.5 / r.
ScalarField cutoff(const DomainPtr& domain, const Vec2& center, double r);

struct Integrals {
  double v_l1 = 0.0;    // ∫|v|
  double v_l2sq = 0.0;  // ∫v^2
  double dv_l2sq = 0.0; // ∫|Dv|^2
};
/// Midpoint quadrature over cells with four active corners.
Integrals integrals(const ScalarField& v);

/// Empirical constant C with ∫v^2 <= sigma ∫|Dv|^2 + C (∫|v|)^2 over a fixed
/// probe family on the grid (constants, products of sines and cosines up to
/// frequency 3, low-order polynomials, cutoff bumps).
struct SobolevCalibration {
  double sigma = 0.0;
  double c_emp = 0.0;
  std::size_t probes = 0;
};
SobolevCalibration calibrate_sobolev(const DomainPtr& domain, double sigma);

struct SobolevCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};
SobolevCheck sobolev_variant_check(const ScalarField& v, const SobolevCalibration& calibration);

}  // namespace plab
