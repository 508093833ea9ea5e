#include <gtest/gtest.h>

#include <cmath>

#include "plab/analytic.hpp"
#include "plab/errors.hpp"
#include "plab/field_calculus.hpp"
#include "plab/grid.hpp"

using namespace plab;

namespace {

DomainPtr box2(double h) { return GridDomain::box(2, Vec3(-0.5, -0.5, 0), Vec3(0.5, 0.5, 0), h); }

}  // namespace

TEST(Grid, BoxMaskAndPositions) {
  const DomainPtr d = box2(0.125);
  // Face nodes are boundary nodes of the open box; an outside layer surrounds it.
  EXPECT_EQ(d->count_kind(NodeKind::boundary), 32u);
  EXPECT_EQ(d->count_kind(NodeKind::inside), 49u);
  const auto idx = d->node_at(Vec3(0.25, -0.125, 0));
  ASSERT_GE(idx, 0);
  EXPECT_NEAR((d->position(idx) - Vec3(0.25, -0.125, 0)).norm(), 0.0, 1e-15);
  EXPECT_EQ(d->node_at(Vec3(0.3, 0, 0)), -1);
}

TEST(Grid, ShapeGridGivesInsideNodesFullNeighborhoods) {
  const DomainPtr d = GridDomain::from_shape(std::make_shared<DiskShape>(Vec2(0, 0), 1.0), 1.0 / 16);
  for (std::size_t i = 0; i < d->size(); ++i) {
    if (!d->inside(i)) continue;
    ASSERT_TRUE(d->shape()->contains(d->position2(i)));
    for (int ax = 0; ax < 2; ++ax)
      for (int o : {-1, 1}) {
        const auto j = d->shifted(i, ax, o);
        ASSERT_GE(j, 0);
        ASSERT_TRUE(d->active(j));
      }
  }
}

TEST(Grid, AnnulusShape) {
  const AnnulusShape a(Vec2(0, 0), 0.25, 1.0);
  EXPECT_FALSE(a.contains(Vec2(0.1, 0)));
  EXPECT_TRUE(a.contains(Vec2(0.5, 0)));
  EXPECT_NEAR((a.nearest_boundary_point(Vec2(0.2, 0)) - Vec2(0.25, 0)).norm(), 0.0, 1e-15);
  EXPECT_NEAR(a.area(), M_PI * (1 - 0.0625), 1e-14);
}

TEST(Analytic, DerivativesAgreeWithFiniteDifferences) {
  const double h = 1e-4;
  const Vec3 x(0.21, -0.17, 0.13);
  for (int dim : {2, 3}) {
    for (const auto& name : scalar_catalog_names(dim)) {
      const AnalyticScalar f = scalar_catalog(name);
      const SmallVec g = f.gradient(x);
      const SmallMat H = f.hessian(x);
      for (int i = 0; i < dim; ++i) {
        Vec3 e = Vec3::Zero();
        e(i) = h;
        EXPECT_NEAR(g(i), (f.value(x + e) - f.value(x - e)) / (2 * h), 1e-6) << name;
        const SmallVec dg = (f.gradient(x + e) - f.gradient(x - e)) / (2 * h);
        for (int j = 0; j < dim; ++j) EXPECT_NEAR(H(j, i), dg(j), 1e-6) << name;
      }
    }
    for (const auto& name : vector_catalog_names(dim)) {
      const AnalyticVector v = vector_catalog(name);
      const SmallMat J = v.jacobian(x);
      for (int j = 0; j < dim; ++j) {
        Vec3 e = Vec3::Zero();
        e(j) = h;
        const SmallVec dv = (v.value(x + e) - v.value(x - e)) / (2 * h);
        for (int i = 0; i < dim; ++i) EXPECT_NEAR(J(i, j), dv(i), 1e-6) << name;
      }
    }
  }
  EXPECT_THROW(scalar_catalog("no_such_field"), InvalidInput);
}

TEST(FieldCalculus, QuadraticDerivativesAreExact) {
  const DomainPtr d = box2(1.0 / 16);
  const ScalarField u = ScalarField::sample(d, [](const Vec3& x) { return x(0) * x(0) - 3 * x(0) * x(1) + 2 * x(1); });
  const VectorField g = gradient(u);
  const MatrixField H = hessian(u);
  for (std::size_t i = 0; i < d->size(); ++i) {
    if (!d->active(i)) continue;
    const Vec3 x = d->position(i);
    EXPECT_NEAR(g[0][i], 2 * x(0) - 3 * x(1), 1e-12);
    EXPECT_NEAR(g[1][i], -3 * x(0) + 2, 1e-12);
    EXPECT_NEAR(H(0, 0)[i], 2.0, 1e-10);
    EXPECT_NEAR(H(0, 1)[i], -3.0, 1e-10);
    EXPECT_EQ(H(0, 1)[i], H(1, 0)[i]);
  }
}

TEST(FieldCalculus, SecondOrderConvergence) {
  const AnalyticScalar f = scalar_catalog("sin_sin");
  double prev = 0;
  for (int n : {16, 32, 64}) {
    const DomainPtr d = box2(1.0 / n);
    const ScalarField u = ScalarField::sample(d, f.value);
    const ScalarField dx = partial(u, 0);
    double err = 0;
    for (std::size_t i = 0; i < d->size(); ++i)
      if (d->active(i)) err = std::max(err, std::abs(dx[i] - f.gradient(d->position(i))(0)));
    if (prev > 0) {
      EXPECT_GT(prev / err, 3.5);
    }
    prev = err;
  }
}

TEST(FieldCalculus, IdentityResidualsVanishOnQuadratics) {
  const DomainPtr d = box2(1.0 / 16);
  const ScalarField u =
      ScalarField::sample(d, [](const Vec3& x) { return 0.5 * x(0) * x(0) + x(0) * x(1) - 2 * x(1) * x(1) + x(0); });
  EXPECT_LE(max_abs_defined(basic_identity_residual(u)), 1e-10);
  EXPECT_LE(max_abs_defined(infinity_laplacian_identity_residual(u)), 1e-10);
  EXPECT_LE(max_abs_defined(divergence_structure_residual(gradient(u))), 1e-10);
}

TEST(FieldCalculus, BasicResidualConvergesForSmoothField) {
  const AnalyticScalar f = scalar_catalog("sin_sin");
  std::vector<Vec3> common;
  std::vector<double> errs;
  for (int n : {32, 64, 128}) {
    const ScalarField r = basic_identity_residual(ScalarField::sample(box2(1.0 / n), f.value));
    if (common.empty()) common = defined_positions(r);
    errs.push_back(max_abs_at(r, common));
  }
  EXPECT_GT(errs[0] / errs[1], 3.2);
  EXPECT_GT(errs[1] / errs[2], 3.2);
}

TEST(FieldCalculus, KeySlackNonnegativeForSmoothField) {
  const OperatorProfile prof(3.0, 1e-2, 0.0);
  const ScalarField u = ScalarField::sample(box2(1.0 / 64), scalar_catalog("sin_sin").value);
  const ScalarField s = key_inequality_slack(u, prof, std::nullopt, key_inequality_constants(prof, 2));
  EXPECT_GE(min_defined(s), -1e-3);
  // Outside the Cordes window in 3D the slack is rejected.
  const DomainPtr d3 = GridDomain::box(3, Vec3(-0.5, -0.5, -0.5), Vec3(0.5, 0.5, 0.5), 0.25);
  const ScalarField u3 = ScalarField::sample(d3, [](const Vec3& x) { return x.squaredNorm(); });
  const OperatorProfile bad(6.0, 1e-2, 0.0);
  EXPECT_THROW(key_inequality_slack(u3, bad, std::nullopt, CordesConstants{0.1, 1.0}), InvalidInput);
}

TEST(FieldCalculus, YoungSplitHoldsOnCatalogFields) {
  const DomainPtr d = box2(1.0 / 32);
  const VectorField x = VectorField::sample(d, 2, vector_catalog(vector_catalog_names(2).front()).value);
  const VectorField w = VectorField::sample(d, 2, vector_catalog(vector_catalog_names(2).back()).value);
  const YoungSplitResult r = young_split_check(x, w, 0.1);
  EXPECT_TRUE(r.holds);
  EXPECT_GT(r.nodes, 0u);
}

TEST(FieldCalculus, UndefinedEverywhereThrows) {
  ScalarField f(box2(0.25));
  for (auto& v : f.values()) v = std::nan("");
  EXPECT_THROW(max_abs_defined(f), std::exception);
}
