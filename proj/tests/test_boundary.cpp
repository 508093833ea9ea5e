#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "plab/boundary.hpp"
#include "plab/errors.hpp"

using namespace plab;

namespace {

// Capacity of the symmetric slit [-a, a] relative to the unit disk. The map
// z -> z^2 folds the slit disk twice onto the Grötzsch ring (disk minus
// [0, a^2]) whose modulus is mu(r) = (π/2) K(sqrt(1 - r^2)) / K(r).
double slit_capacity(double a) {
  const double r = a * a;
  const double mu = M_PI / 2 * std::comp_ellint_1(std::sqrt(1 - r * r)) / std::comp_ellint_1(r);
  return 4 * M_PI / mu;
}

AmbientVectorField quadratic_field() {
  return {[](const Vec2& x) { return Vec2(x(0) * x(0) - x(1), x(0) * x(1) + 0.5); },
          [](const Vec2& x) {
            Eigen::Matrix2d j;
            j << 2 * x(0), -1, x(1), x(0);
            return j;
          }};
}

double max_abs(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST(BoundaryCurve, CircleGeometry) {
  const BoundaryCurve c(circle_curve(Vec2(0.5, -1), 2.0), 256);
  EXPECT_NEAR(c.length(), 4 * M_PI, 1e-12);
  for (int i = 0; i < c.size(); ++i) {
    EXPECT_NEAR(c.curvature()[i], -0.5, 1e-10);
    EXPECT_NEAR((c.normals()[i] - (c.points()[i] - Vec2(0.5, -1)) / 2).norm(), 0.0, 1e-12);
    EXPECT_NEAR(c.normals()[i].dot(c.tangents()[i]), 0.0, 1e-14);
  }
  EXPECT_NEAR(c.diameter(), 4.0, 1e-3);
}

TEST(BoundaryCurve, EllipsePerimeterAndTotalCurvature) {
  const BoundaryCurve c(ellipse_curve(2, 1), 512);
  EXPECT_NEAR(c.length(), 8 * std::comp_ellint_2(std::sqrt(0.75)), 1e-10);
  double total = 0;
  for (double b : c.curvature()) total += b * c.ds();
  EXPECT_NEAR(total, -2 * M_PI, 1e-9);
  for (int i = 0; i < c.size(); ++i) EXPECT_LT(c.curvature()[i], 0.0);
  const BoundaryCurve bean(bean_curve(), 512);
  EXPECT_FALSE(bean.convex());
  double bt = 0, bmax = -1;
  for (double b : bean.curvature()) bt += b * bean.ds(), bmax = std::max(bmax, b);
  EXPECT_NEAR(bt, -2 * M_PI, 1e-9);
  EXPECT_GT(bmax, 0.0);
}

TEST(BoundaryCurve, RejectsBadInput) {
  EXPECT_THROW(BoundaryCurve(circle_curve(Vec2(0, 0), 1), 8), InvalidInput);
  ParametricCurve cw = circle_curve(Vec2(0, 0), 1);
  cw.position = [](double t) { return Vec2(std::cos(t), -std::sin(t)); };
  cw.d1 = [](double t) { return Vec2(-std::sin(t), -std::cos(t)); };
  cw.d2 = [](double t) { return Vec2(-std::cos(t), std::sin(t)); };
  EXPECT_THROW(BoundaryCurve(cw, 64), InvalidInput);
  EXPECT_THROW(curve_catalog("triangle"), InvalidInput);
}

TEST(Tangential, SplitAndGradientOnCircle) {
  const BoundaryCurve c(circle_curve(Vec2(0, 0), 1), 128);
  std::vector<Vec2> x(c.size(), Vec2(1, 0));
  const TangentialSplit s = tangential_split(c, x);
  std::vector<double> f(c.size());
  for (int i = 0; i < c.size(); ++i) f[i] = c.points()[i](0);
  const auto g = tangential_gradient(c, f);
  const auto g4 = tangential_gradient(c, f, DerivativeMethod::fd4);
  for (int i = 0; i < c.size(); ++i) {
    const Vec2 p = c.points()[i];
    EXPECT_NEAR(s.normal[i], p(0), 1e-12);
    EXPECT_NEAR((s.tangential[i] - Vec2(p(1) * p(1), -p(0) * p(1))).norm(), 0.0, 1e-12);
    // D_T x_1 is the tangential part of e_1.
    EXPECT_NEAR((g[i] - s.tangential[i]).norm(), 0.0, 1e-10);
    EXPECT_NEAR((g4[i] - s.tangential[i]).norm(), 0.0, 1e-5);
  }
  // div_T of the tangent field is 0; of the position field it is 1.
  const auto dt = tangential_divergence(c, c.tangents());
  const auto dp = tangential_divergence(c, c.points());
  for (int i = 0; i < c.size(); ++i) {
    EXPECT_NEAR(dt[i], 0.0, 1e-10);
    EXPECT_NEAR(dp[i], 1.0, 1e-10);
  }
}

TEST(Grisvard, PositionFieldOnUnitCircle) {
  // X = x: DX X - div X X = -x, so the flow is -1 = B |X|^2.
  const BoundaryCurve c(circle_curve(Vec2(0, 0), 1), 64);
  const AmbientVectorField x{[](const Vec2& p) { return p; }, [](const Vec2&) { return Eigen::Matrix2d::Identity(); }};
  for (double f : boundary_flow(c, x)) EXPECT_NEAR(f, -1.0, 1e-12);
  EXPECT_LE(max_abs(grisvard_identity_residual(c, x)), 1e-12);
}

TEST(Grisvard, IdentityOnSmoothCurves) {
  for (const char* name : {"circle", "ellipse", "bean"}) {
    const BoundaryCurve c(curve_catalog(name), 512);
    EXPECT_LE(max_abs(grisvard_identity_residual(c, quadratic_field())), 1e-9) << name;
  }
}

TEST(Grisvard, FourthOrderDerivativesConverge) {
  const AmbientVectorField x = quadratic_field();
  const double e1 = max_abs(grisvard_identity_residual(BoundaryCurve(ellipse_curve(2, 1), 128), x, DerivativeMethod::fd4));
  const double e2 =
      max_abs(grisvard_identity_residual(BoundaryCurve(ellipse_curve(2, 1), 256), x, DerivativeMethod::fd4));
  EXPECT_GT(e1 / e2, 12.0);
}

TEST(Grisvard, NormalFieldsFlowIsCurvatureWeighted) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1, 1);
  const BoundaryCurve c(ellipse_curve(2, 1), 256);
  for (int k = 0; k < 5; ++k) {
    const double a = u(rng), b = u(rng), w = u(rng);
    const AmbientVectorField x =
        normal_field(c, [=](const Vec2& p) { return 1 + a * p(0) + b * std::sin(3 * w * p(1)); });
    const NormalFlowBound nb = normal_flow_bound(c, x);
    const auto split = tangential_split(c, [&] {
      std::vector<Vec2> v;
      for (const auto& p : c.points()) v.push_back(x.value(p));
      return v;
    }());
    for (int i = 0; i < c.size(); ++i) {
      EXPECT_LE(nb.flow[i], 1e-8);
      EXPECT_LE(std::abs(nb.flow[i]) - nb.bound[i], 1e-8);
      EXPECT_NEAR(nb.flow[i], c.curvature()[i] * split.normal[i] * split.normal[i], 1e-7);
    }
  }
  EXPECT_THROW(normal_flow_bound(c, quadratic_field()), InvalidInput);
}

TEST(Capacity, SlitMatchesEllipticIntegralFormula) {
  for (double a : {0.05, 0.3}) {
    const double cap = relative_capacity({{Vec2(-a, 0), Vec2(a, 0)}}, Vec2(0, 0));
    EXPECT_NEAR(cap, slit_capacity(a), 0.02 * slit_capacity(a)) << "a=" << a;
  }
}

TEST(Capacity, EmptyMonotoneAndTranslationInvariant) {
  CapacityOptions opt;
  opt.h = 1.0 / 32;
  EXPECT_EQ(relative_capacity({}, Vec2(0, 0), opt), 0.0);
  const double small = relative_capacity({{Vec2(0, 0), Vec2(0.2, 0)}}, Vec2(0, 0), opt);
  const double large = relative_capacity({{Vec2(0, 0), Vec2(0.2, 0), Vec2(0.3, 0.1)}}, Vec2(0, 0), opt);
  const double shifted = relative_capacity({{Vec2(2, 1), Vec2(2.2, 1)}}, Vec2(2, 1), opt);
  EXPECT_GT(small, 0.0);
  EXPECT_GE(large, small);
  EXPECT_NEAR(shifted, small, 1e-8 * small);
  EXPECT_THROW(relative_capacity({{Vec2(0, 0), Vec2(0.99, 0)}}, Vec2(0, 0), opt), InvalidInput);
}

TEST(KQuantity, CircleValueShrinksWithRadius) {
  const BoundaryCurve c(circle_curve(Vec2(0, 0), 1), 256);
  KQuantityOptions opt;
  opt.centers = 1;
  opt.dyadic_levels = 2;
  opt.capacity.h = 1.0 / 32;
  const KQuantity big = k_quantity(c, 0.4, opt);
  const KQuantity small = k_quantity(c, 0.1, opt);
  EXPECT_GT(big.value, small.value);
  EXPECT_GT(small.value, 0.0);
  EXPECT_EQ(big.candidates, 2u);
}

TEST(Rearrangement, StepFunctionExample) {
  const BoundaryFunction psi{{1.0, -3.0, 2.0}, {0.5, 1.0, 0.25}};
  EXPECT_DOUBLE_EQ(distribution_function(psi, 1.5), 1.25);
  EXPECT_DOUBLE_EQ(distribution_function(psi, 3.0), 0.0);
  const StepFunction s = decreasing_rearrangement(psi);
  EXPECT_EQ(s.values(), (std::vector<double>{3, 2, 1}));
  EXPECT_EQ(s.breakpoints(), (std::vector<double>{1, 1.25, 1.75}));
  EXPECT_DOUBLE_EQ(s(1.1), 2.0);
  EXPECT_DOUBLE_EQ(s.integral(1.5), 3 + 0.5 + 0.25);
  EXPECT_DOUBLE_EQ(s.integral(s.total()), 4.0);
}

TEST(Rearrangement, EqualValuesMerge) {
  const BoundaryFunction psi{{2.0, 1.0, 2.0, -2.0}, {0.1, 0.2, 0.3, 0.4}};
  const StepFunction s = decreasing_rearrangement(psi);
  EXPECT_EQ(s.values().size(), 2u);
  EXPECT_NEAR(s.breakpoints()[0], 0.8, 1e-15);
}

TEST(WeakNorms, MatchBruteForceSup) {
  const BoundaryFunction psi{{1.0, -3.0, 2.0}, {0.5, 1.0, 0.25}};
  const StepFunction s = decreasing_rearrangement(psi);
  for (double q : {1.0, 1.5, 2.0, 4.0}) {
    double lor = 0, zyg = 0;
    for (int k = 1; k <= 200000; ++k) {
      const double t = 1.75 * k / 200000;
      lor = std::max(lor, std::pow(t, 1 / q - 1) * s.integral(t));
      zyg = std::max(zyg, std::log(1 + 1.75 / t) * s.integral(t));
    }
    const WeakNorms w = weak_norms(psi, q);
    EXPECT_NEAR(w.lorentz, lor, 1e-6 * lor) << q;
    EXPECT_NEAR(w.zygmund, zyg, 1e-6 * zyg);
    EXPECT_GE(w.lorentz, lor - 1e-12);
    EXPECT_GE(w.zygmund, zyg - 1e-12);
  }
  EXPECT_THROW(weak_norms(psi, 0.5), InvalidInput);
}

TEST(WeakNorms, ConstantFunctionAndHomogeneity) {
  const BoundaryCurve c(circle_curve(Vec2(0, 0), 1), 64);
  const BoundaryFunction psi = boundary_function(c, std::vector<double>(64, 0.7));
  EXPECT_NEAR(weak_norms(psi, 3.0).lorentz, 0.7 * std::pow(2 * M_PI, 1 / 3.0), 1e-12);
  std::vector<double> v(64), v3(64);
  for (int i = 0; i < 64; ++i) v[i] = std::sin(3.0 * i) + 0.2, v3[i] = 3 * v[i];
  const WeakNorms a = weak_norms(boundary_function(c, v), 2.0);
  const WeakNorms b = weak_norms(boundary_function(c, v3), 2.0);
  EXPECT_NEAR(b.lorentz, 3 * a.lorentz, 1e-12 * b.lorentz);
  EXPECT_NEAR(b.zygmund, 3 * a.zygmund, 1e-9 * b.zygmund);
}

TEST(Trace, ZeroFieldAndSupportCheck) {
  const BoundaryCurve c(circle_curve(Vec2(0, 0), 1), 256);
  const DomainPtr d = GridDomain::from_shape(std::make_shared<DiskShape>(Vec2(0, 0), 1.0), 1.0 / 32);
  const ScalarField zero = ScalarField::sample(d, [](const Vec3&) { return 0.0; });
  const TraceCheck t = weighted_trace_check(zero, c, Vec2(1, 0), 0.3, 0.2);
  EXPECT_EQ(t.lhs, 0.0);
  EXPECT_EQ(t.ratio, 0.0);
  const ScalarField one = ScalarField::sample(d, [](const Vec3&) { return 1.0; });
  EXPECT_THROW(weighted_trace_check(one, c, Vec2(1, 0), 0.3, 0.2), InvalidInput);
  const ScalarField bump = ScalarField::sample(d, [](const Vec3& x) {
    const double r = (x.head<2>() - Vec2(1, 0)).norm();
    return r < 0.3 ? std::pow(1 - r * r / 0.09, 2) : 0.0;
  });
  const TraceCheck tb = weighted_trace_check(bump, c, Vec2(1, 0), 0.3, 0.2);
  EXPECT_GT(tb.lhs, 0.0);
  EXPECT_GT(tb.rhs_factor, 0.0);
  EXPECT_NEAR(tb.ratio, tb.lhs / tb.rhs_factor, 1e-15);
}
