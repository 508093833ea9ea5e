#pragma once

// Named analytic scalar and vector fields with hand-coded exact derivatives.
// Used as Dirichlet data and as test fields for the identity suites.

#include <functional>
#include <string>
#include <vector>

#include "plab/grid.hpp"

namespace plab {

/// Polynomial class of a field; finite differences of the identity residuals
/// are exact (up to rounding) on affine and quadratic fields.
enum class FieldClass { affine, quadratic, smooth };

struct AnalyticScalar {
  std::string name;
  int dim = 2;
  FieldClass cls = FieldClass::smooth;
  std::function<double(const Vec3&)> value;
  std::function<SmallVec(const Vec3&)> gradient;
  std::function<SmallMat(const Vec3&)> hessian;
};

struct AnalyticVector {
  std::string name;
  int dim = 2;
  FieldClass cls = FieldClass::smooth;
  std::function<SmallVec(const Vec3&)> value;
  /// J_ij = d V_i / d x_j.
  std::function<SmallMat(const Vec3&)> jacobian;
};

/// Catalog lookup; throws InvalidInput for unknown names.
/// Also accepts "radial_power:k" for |x|^k (2D, defined away from 0).
AnalyticScalar scalar_catalog(const std::string& name);
AnalyticVector vector_catalog(const std::string& name);

std::vector<std::string> scalar_catalog_names(int dim);
std::vector<std::string> vector_catalog_names(int dim);

/// |x|^k in 2D.
AnalyticScalar radial_power(double k);

/// The gradient of a scalar catalog field as a vector field.
AnalyticVector gradient_field(const AnalyticScalar& f);

}  // namespace plab
