#include "plab/analytic.hpp"

#include <cmath>
#include <numbers>

#include "plab/config.hpp"
#include "plab/errors.hpp"

namespace plab {

namespace {

using std::cos;
using std::exp;
using std::sin;
constexpr double kPi = std::numbers::pi;

SmallVec vec2(double a, double b) {
  SmallVec v(2);
  v << a, b;
  return v;
}

SmallVec vec3(double a, double b, double c) {
  SmallVec v(3);
  v << a, b, c;
  return v;
}

SmallMat mat2(double a, double b, double c, double d) {
  SmallMat m(2, 2);
  m << a, b, c, d;
  return m;
}

SmallMat mat3(double a, double b, double c, double d, double e, double f, double g, double h, double i) {
  SmallMat m(3, 3);
  m << a, b, c, d, e, f, g, h, i;
  return m;
}

std::vector<AnalyticScalar> build_scalars() {
  std::vector<AnalyticScalar> out;
  out.push_back({"constant", 2, FieldClass::affine, [](const Vec3&) { return 0.75; },
                 [](const Vec3&) { return vec2(0, 0); }, [](const Vec3&) { return mat2(0, 0, 0, 0); }});
  out.push_back({"x1", 2, FieldClass::affine, [](const Vec3& x) { return x[0]; },
                 [](const Vec3&) { return vec2(1, 0); }, [](const Vec3&) { return mat2(0, 0, 0, 0); }});
  out.push_back({"affine", 2, FieldClass::affine,
                 [](const Vec3& x) { return 0.75 * x[0] - 0.5 * x[1] + 0.25; },
                 [](const Vec3&) { return vec2(0.75, -0.5); }, [](const Vec3&) { return mat2(0, 0, 0, 0); }});
  out.push_back({"paraboloid", 2, FieldClass::quadratic,
                 [](const Vec3& x) { return 0.5 * (x[0] * x[0] + x[1] * x[1]); },
                 [](const Vec3& x) { return vec2(x[0], x[1]); }, [](const Vec3&) { return mat2(1, 0, 0, 1); }});
  out.push_back({"saddle", 2, FieldClass::quadratic, [](const Vec3& x) { return x[0] * x[1]; },
                 [](const Vec3& x) { return vec2(x[1], x[0]); }, [](const Vec3&) { return mat2(0, 1, 1, 0); }});
  out.push_back({"quadratic", 2, FieldClass::quadratic,
                 [](const Vec3& x) {
                   return 0.5 * x[0] * x[0] - 0.25 * x[0] * x[1] + 0.75 * x[1] * x[1] + 0.5 * x[0] - 0.125;
                 },
                 [](const Vec3& x) { return vec2(x[0] - 0.25 * x[1] + 0.5, -0.25 * x[0] + 1.5 * x[1]); },
                 [](const Vec3&) { return mat2(1, -0.25, -0.25, 1.5); }});
  out.push_back({"sin_cos", 2, FieldClass::smooth, [](const Vec3& x) { return sin(x[0]) * cos(x[1]); },
                 [](const Vec3& x) { return vec2(cos(x[0]) * cos(x[1]), -sin(x[0]) * sin(x[1])); },
                 [](const Vec3& x) {
                   const double s = sin(x[0]) * cos(x[1]);
                   const double m = -cos(x[0]) * sin(x[1]);
                   return mat2(-s, m, m, -s);
                 }});
  out.push_back({"exp_sin", 2, FieldClass::smooth, [](const Vec3& x) { return exp(x[0]) * sin(x[1]); },
                 [](const Vec3& x) { return vec2(exp(x[0]) * sin(x[1]), exp(x[0]) * cos(x[1])); },
                 [](const Vec3& x) {
                   const double s = exp(x[0]) * sin(x[1]);
                   const double c = exp(x[0]) * cos(x[1]);
                   return mat2(s, c, c, -s);
                 }});
  // x^4 - 2x^2y^2 + y^4/2 + x^3 y
  out.push_back({"poly4", 2, FieldClass::smooth,
                 [](const Vec3& v) {
                   const double x = v[0], y = v[1];
                   return x * x * x * x - 2 * x * x * y * y + 0.5 * y * y * y * y + x * x * x * y;
                 },
                 [](const Vec3& v) {
                   const double x = v[0], y = v[1];
                   return vec2(4 * x * x * x - 4 * x * y * y + 3 * x * x * y,
                               -4 * x * x * y + 2 * y * y * y + x * x * x);
                 },
                 [](const Vec3& v) {
                   const double x = v[0], y = v[1];
                   const double xy = -8 * x * y + 3 * x * x;
                   return mat2(12 * x * x - 4 * y * y + 6 * x * y, xy, xy, -4 * x * x + 6 * y * y);
                 }});
  out.push_back({"sin_sin", 2, FieldClass::smooth,
                 [](const Vec3& x) { return sin(kPi * x[0]) * sin(kPi * x[1]); },
                 [](const Vec3& x) {
                   return vec2(kPi * cos(kPi * x[0]) * sin(kPi * x[1]), kPi * sin(kPi * x[0]) * cos(kPi * x[1]));
                 },
                 [](const Vec3& x) {
                   const double s = kPi * kPi * sin(kPi * x[0]) * sin(kPi * x[1]);
                   const double m = kPi * kPi * cos(kPi * x[0]) * cos(kPi * x[1]);
                   return mat2(-s, m, m, -s);
                 }});

  out.push_back({"affine3", 3, FieldClass::affine,
                 [](const Vec3& x) { return 0.5 * x[0] - 0.25 * x[1] + 0.75 * x[2] + 1.0; },
                 [](const Vec3&) { return vec3(0.5, -0.25, 0.75); },
                 [](const Vec3&) { return mat3(0, 0, 0, 0, 0, 0, 0, 0, 0); }});
  out.push_back({"quadratic3", 3, FieldClass::quadratic,
                 [](const Vec3& x) {
                   return 0.5 * x[0] * x[0] + 0.25 * x[1] * x[1] - 0.375 * x[2] * x[2] + 0.5 * x[0] * x[1] -
                          0.25 * x[1] * x[2] + x[2];
                 },
                 [](const Vec3& x) {
                   return vec3(x[0] + 0.5 * x[1], 0.5 * x[1] + 0.5 * x[0] - 0.25 * x[2],
                               -0.75 * x[2] - 0.25 * x[1] + 1.0);
                 },
                 [](const Vec3&) { return mat3(1, 0.5, 0, 0.5, 0.5, -0.25, 0, -0.25, -0.75); }});
  out.push_back({"sin_exp_cos3", 3, FieldClass::smooth,
                 [](const Vec3& x) { return sin(x[0]) * exp(0.5 * x[1]) * cos(x[2]); },
                 [](const Vec3& x) {
                   const double e = exp(0.5 * x[1]);
                   return vec3(cos(x[0]) * e * cos(x[2]), 0.5 * sin(x[0]) * e * cos(x[2]),
                               -sin(x[0]) * e * sin(x[2]));
                 },
                 [](const Vec3& x) {
                   const double e = exp(0.5 * x[1]);
                   const double s0 = sin(x[0]), c0 = cos(x[0]), s2 = sin(x[2]), c2 = cos(x[2]);
                   const double h01 = 0.5 * c0 * e * c2;
                   const double h02 = -c0 * e * s2;
                   const double h12 = -0.5 * s0 * e * s2;
                   return mat3(-s0 * e * c2, h01, h02, h01, 0.25 * s0 * e * c2, h12, h02, h12, -s0 * e * c2);
                 }});
  out.push_back({"poly4_3", 3, FieldClass::smooth,
                 [](const Vec3& v) {
                   const double x = v[0], y = v[1], z = v[2];
                   return x * x * x * x + x * y * z * z - 0.5 * y * y * y * y + x * x * y * y;
                 },
                 [](const Vec3& v) {
                   const double x = v[0], y = v[1], z = v[2];
                   return vec3(4 * x * x * x + y * z * z + 2 * x * y * y, x * z * z - 2 * y * y * y + 2 * x * x * y,
                               2 * x * y * z);
                 },
                 [](const Vec3& v) {
                   const double x = v[0], y = v[1], z = v[2];
                   const double h01 = z * z + 4 * x * y;
                   const double h02 = 2 * y * z;
                   const double h12 = 2 * x * z;
                   return mat3(12 * x * x + 2 * y * y, h01, h02, h01, -6 * y * y + 2 * x * x, h12, h02, h12,
                               2 * x * y);
                 }});
  return out;
}

std::vector<AnalyticVector> build_vectors() {
  std::vector<AnalyticVector> out;
  out.push_back({"constant_v", 2, FieldClass::affine, [](const Vec3&) { return vec2(1.5, -0.5); },
                 [](const Vec3&) { return mat2(0, 0, 0, 0); }});
  out.push_back({"identity", 2, FieldClass::affine, [](const Vec3& x) { return vec2(x[0], x[1]); },
                 [](const Vec3&) { return mat2(1, 0, 0, 1); }});
  out.push_back({"affine_v", 2, FieldClass::affine,
                 [](const Vec3& x) { return vec2(0.5 * x[0] + 0.25 * x[1], -0.75 * x[0] + 0.5 * x[1] + 1.0); },
                 [](const Vec3&) { return mat2(0.5, 0.25, -0.75, 0.5); }});
  out.push_back({"sin_cos_v", 2, FieldClass::smooth, [](const Vec3& x) { return vec2(sin(x[1]), cos(x[0])); },
                 [](const Vec3& x) { return mat2(0, cos(x[1]), -sin(x[0]), 0); }});
  out.push_back({"exp_trig_v", 2, FieldClass::smooth,
                 [](const Vec3& x) { return vec2(exp(0.5 * x[0]) * cos(x[1]), sin(x[0] * x[1])); },
                 [](const Vec3& x) {
                   const double e = exp(0.5 * x[0]);
                   const double c = cos(x[0] * x[1]);
                   return mat2(0.5 * e * cos(x[1]), -e * sin(x[1]), x[1] * c, x[0] * c);
                 }});
  out.push_back({"identity3", 3, FieldClass::affine, [](const Vec3& x) { return vec3(x[0], x[1], x[2]); },
                 [](const Vec3&) { return mat3(1, 0, 0, 0, 1, 0, 0, 0, 1); }});
  out.push_back({"trig_v3", 3, FieldClass::smooth,
                 [](const Vec3& x) { return vec3(sin(x[1] + x[2]), cos(x[0]) * x[2], exp(0.5 * x[0]) * x[1]); },
                 [](const Vec3& x) {
                   const double c12 = cos(x[1] + x[2]);
                   const double e = exp(0.5 * x[0]);
                   return mat3(0, c12, c12, -sin(x[0]) * x[2], 0, cos(x[0]), 0.5 * e * x[1], e, 0);
                 }});
  return out;
}

const std::vector<AnalyticScalar>& scalars() {
  static const std::vector<AnalyticScalar> s = build_scalars();
  return s;
}

const std::vector<AnalyticVector>& vectors() {
  static const std::vector<AnalyticVector> v = build_vectors();
  return v;
}

}  // namespace

AnalyticScalar radial_power(double k) {
  AnalyticScalar f;
  f.name = "radial_power:" + std::to_string(k);
  f.dim = 2;
  f.cls = FieldClass::smooth;
  f.value = [k](const Vec3& x) { return std::pow(std::hypot(x[0], x[1]), k); };
  f.gradient = [k](const Vec3& x) {
    const double r = std::hypot(x[0], x[1]);
    const double s = k * std::pow(r, k - 2.0);
    return vec2(s * x[0], s * x[1]);
  };
  f.hessian = [k](const Vec3& x) {
    const double r2 = x[0] * x[0] + x[1] * x[1];
    const double s = k * std::pow(r2, 0.5 * (k - 2.0));
    const double t = k * (k - 2.0) * std::pow(r2, 0.5 * (k - 4.0));
    return mat2(s + t * x[0] * x[0], t * x[0] * x[1], t * x[0] * x[1], s + t * x[1] * x[1]);
  };
  return f;
}

AnalyticScalar scalar_catalog(const std::string& name) {
  const std::string prefix = "radial_power:";
  if (name.rfind(prefix, 0) == 0) return radial_power(parse_double(name.substr(prefix.size())));
  for (const auto& f : scalars()) {
    if (f.name == name) return f;
  }
  throw InvalidInput("unknown scalar field: " + name);
}

AnalyticVector vector_catalog(const std::string& name) {
  for (const auto& v : vectors()) {
    if (v.name == name) return v;
  }
  throw InvalidInput("unknown vector field: " + name);
}

std::vector<std::string> scalar_catalog_names(int dim) {
  std::vector<std::string> out;
  for (const auto& f : scalars()) {
    if (f.dim == dim) out.push_back(f.name);
  }
  return out;
}

std::vector<std::string> vector_catalog_names(int dim) {
  std::vector<std::string> out;
  for (const auto& v : vectors()) {
    if (v.dim == dim) out.push_back(v.name);
  }
  return out;
}

AnalyticVector gradient_field(const AnalyticScalar& f) {
  const FieldClass cls = f.cls == FieldClass::smooth ? FieldClass::smooth : FieldClass::affine;
  return {"grad_" + f.name, f.dim, cls, f.gradient, f.hessian};
}

}  // namespace plab
