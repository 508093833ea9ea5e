#pragma once

// Second-order finite differences on grid fields and pointwise residuals of
// the divergence identities and inequalities satisfied by gradient fields.
//
// Stencils: central differences where both neighbors hold finite values,
// otherwise one-sided second-order stencils. A node with neither gets NaN.
// Residuals built from nested differences are evaluated on inside nodes whose
// axis neighbors are also inside (NaN elsewhere): one node further out, the
// outer difference straddles a central and a one-sided stencil and the
// error drops to first order.

#include <optional>

#include "plab/grid.hpp"
#include "plab/matrix_cordes.hpp"
#include "plab/operator_profile.hpp"

namespace plab {

/// df/dx_axis.
ScalarField partial(const ScalarField& f, int axis);
/// d^2 f/dx_axis^2.
ScalarField second_partial(const ScalarField& f, int axis);

VectorField gradient(const ScalarField& f);
/// Diagonal from second_partial; mixed entries average the two nested
/// first-difference orders, so the result is exactly symmetric.
MatrixField hessian(const ScalarField& f);
ScalarField divergence(const VectorField& v);
/// J_ij = dV_i/dx_j.
MatrixField jacobian(const VectorField& v);

/// |D^2u|^2 - div(D^2u Du - Δu Du) - (Δu)^2 on inside nodes.
ScalarField basic_identity_residual(const ScalarField& u);

/// div((DX - tr(DX) I) X) - (<DX, DX^T> - (tr DX)^2) on inside nodes.
ScalarField divergence_structure_residual(const VectorField& x);

/// | Du <Du, D(|Du|^2/2)> - <(Du (x) Du), D^2u> Du | on inside nodes; the
/// first term differentiates |Du|^2/2 numerically, the second uses the
/// Hessian.
ScalarField infinity_laplacian_identity_residual(const ScalarField& u);

/// Pointwise slack (right side minus left side) of
///   c|DV_b|^2 <= div((DX - tr(DX) I) X) + C(|DW|^2 + (b/a)^2 (div V_a)^2),
/// X = V_b - W, with V_a = a(|Du|)Du, V_b = b(|Du|)Du. Without W this is the
/// unshifted inequality (X = V_b, no |DW|^2 term). Rejects profiles outside
/// the Cordes window for the grid dimension. Values on inside nodes.
ScalarField key_inequality_slack(const ScalarField& u, const OperatorProfile& profile,
                                 const std::optional<VectorField>& w, const CordesConstants& constants);

struct YoungSplitResult {
  bool holds = true;
  double min_slack = 0.0;   // min over checked nodes of rhs - lhs
  std::size_t nodes = 0;
};

/// Checks pointwise on inside nodes, with n the grid dimension,
///   2(<DX,(DW)^T> - tr DX tr DW) + <DW,(DW)^T> - (tr DW)^2
///     <= (c/2)|D(X+W)|^2 + young_constant(n, c)|DW|^2.
YoungSplitResult young_split_check(const VectorField& x, const VectorField& w, double c);

/// Max |value| / min value over the inside nodes where the field is defined.
/// Throws when it is defined nowhere.
double max_abs_defined(const ScalarField& f);
double min_defined(const ScalarField& f);

/// Positions of the inside nodes where f is defined.
std::vector<Vec3> defined_positions(const ScalarField& f);
/// Max |f| over the given positions; throws if one is not a node of f's grid
/// or f is undefined there. Used to compare grids at common points.
double max_abs_at(const ScalarField& f, const std::vector<Vec3>& points);

}  // namespace plab
