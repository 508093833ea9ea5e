#pragma once

// Power-type profiles a(t) = (t^2+eps)^((p-2)/2), b(t) = (t^2+eps)^(beta/2),
// their log-derivatives, the ratio theta = (1+vartheta_a)/(1+vartheta_b), the
// structure matrices A, B built from a gradient, and the admissibility window
// under which A satisfies the Cordes condition relative to B.

#include <Eigen/Dense>

#include <iosfwd>
#include <string>

#include "plab/matrix_cordes.hpp"

namespace plab {

struct ThetaBounds {
  double inf;
  double sup;
};

class OperatorProfile {
 public:
  /// Requires p > 1, 0 < eps < 1, beta > -1.
  OperatorProfile(double p, double eps, double beta);

  double p() const { return p_; }
  double eps() const { return eps_; }
  double beta() const { return beta_; }

  double a(double t) const;
  double b(double t) const;
  /// t a'(t) / a(t) = (p-2) t^2 / (t^2 + eps).
  double vartheta_a(double t) const;
  /// t b'(t) / b(t) = beta t^2 / (t^2 + eps).
  double vartheta_b(double t) const;

  double i_a() const;
  double s_a() const;
  double i_b() const;
  double s_b() const;

  /// ((p-1) t^2 + eps) / ((beta+1) t^2 + eps).
  double theta(double t) const;
  /// (min((p-1)/(beta+1), 1), max((p-1)/(beta+1), 1)).
  ThetaBounds theta_bounds() const;

 private:
  double p_;
  double eps_;
  double beta_;
};

/// True iff sup theta < 2(n-1)/(n-2) (always for n = 2). Both the theta form
/// and the equivalent lower bound on beta are evaluated; both must agree.
bool cordes_window_ok(const OperatorProfile& profile, int n);

/// g(theta) = (2(n-1) - (n-2) theta) theta / (n-1+theta^2), the Cordes delta of
/// the structure matrices at a point where theta(|Du|) = theta.
double cordes_delta_of_theta(double theta, int n);

/// inf over t >= 0 of g(theta(t)), evaluated on a 10^4-point uniform grid over
/// [i_theta, s_theta] including both endpoints. Throws outside the window.
double delta_max(const OperatorProfile& profile, int n);

struct StructureMatrices {
  SymMatrix a;
  SymMatrix b;
};

/// A = I + vartheta_a(|g|) g (x) g / |g|^2, B likewise; A = B = I for g = 0.
StructureMatrices structure_matrices(const OperatorProfile& profile, const Eigen::VectorXd& grad);

/// Checks (n-1+delta)(n-1+theta^2) <= (n-1+theta)^2 at theta = theta(t) with
/// delta = delta_max. False when no positive delta exists.
bool pointwise_cordes_check(const OperatorProfile& profile, int n, double t);

/// Constants (c, C) for the pointwise inequality
///   c|DV_b|^2 <= div((DV_b - tr(DV_b) I) V_b) + C (b/a)^2 (div V_a)^2.
/// C = C_cordes(n, delta_max); c = c_cordes(n, delta_max) times the squared
/// eigenvalue ratio (min{1,1+i_b} / max{1,1+s_b})^2 of B. Not sharp.
CordesConstants key_inequality_constants(const OperatorProfile& profile, int n);

/// Young-split constant C(n, c) = 2(n+1)(1 + 2/c). Valid for n <= 4: the
/// bilinear form <P,Q^T> - tr P tr Q is bounded by (n-1)|P||Q|.
double young_constant(int n, double c);

/// Constants for the variant with an arbitrary field W:
///   c'|DV_b|^2 <= div((DX - tr(DX) I) X) + C'(|DW|^2 + (b/a)^2 (div V_a)^2),
/// X = V_b - W, with c' = c/2 and C' = max(C, young_constant(n, c)).
CordesConstants shifted_inequality_constants(const OperatorProfile& profile, int n);

/// key=value lines: p, eps, beta (and n when given).
std::string serialize_profile(const OperatorProfile& profile, int n);
struct ProfileWithDim {
  OperatorProfile profile;
  int n;
};
ProfileWithDim parse_profile(const std::string& text);

}  // namespace plab
