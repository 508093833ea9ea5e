#include <gtest/gtest.h>

#include <cmath>

#include "plab/analytic.hpp"
#include "plab/errors.hpp"
#include "plab/grid.hpp"
#include "plab/pde_solver.hpp"
#include "radial_oracle.hpp"

using namespace plab;

namespace {

DomainPtr disk(double h) { return GridDomain::from_shape(std::make_shared<DiskShape>(Vec2(0, 0), 1.0), h); }

DomainPtr annulus(double h) {
  return GridDomain::from_shape(std::make_shared<AnnulusShape>(Vec2(0, 0), 0.25, 1.0), h);
}

}  // namespace

TEST(Energy, AffineFieldOnBox) {
  const DomainPtr d = GridDomain::box(2, Vec3(-0.5, -0.5, 0), Vec3(0.5, 0.5, 0), 1.0 / 8);
  const ScalarField u = ScalarField::sample(d, [](const Vec3& x) { return 0.3 * x(0) - 0.4 * x(1); });
  EXPECT_NEAR(energy(u, 3.0, 0.0), std::pow(0.25, 1.5), 1e-14);
  EXPECT_NEAR(energy(u, OperatorProfile(2.0, 0.5, 0.0)), 0.25 + 0.5, 1e-14);
}

TEST(Energy, GradientMatchesFiniteDifferences) {
  const OperatorProfile prof(3.0, 1e-2, 0.0);
  const DomainPtr d = disk(1.0 / 8);
  ScalarField u = ScalarField::sample(d, scalar_catalog("sin_sin").value);
  const std::vector<double> g = energy_gradient(u, prof);
  const double step = 1e-6;
  int checked = 0;
  for (std::size_t i = 0; i < d->size() && checked < 20; ++i) {
    if (!d->inside(i)) {
      EXPECT_EQ(g[i], 0.0);
      continue;
    }
    const double v = u[i];
    u[i] = v + step;
    const double ep = energy(u, prof);
    u[i] = v - step;
    const double em = energy(u, prof);
    u[i] = v;
    EXPECT_NEAR(g[i], (ep - em) / (2 * step), 1e-7);
    ++checked;
  }
}

TEST(Solve, AffineDataIsReproducedOnDisk) {
  const DirichletProblem pb =
      make_problem(disk(1.0 / 32), OperatorProfile(3.0, 1e-3, 0.0), [](const Vec2& x) { return 1 + x(0) - 2 * x(1); });
  const SolveReport r = solve(pb);
  EXPECT_TRUE(r.converged);
  double dev = 0;
  for (std::size_t i = 0; i < r.u.size(); ++i)
    if (pb.domain->active(i)) dev = std::max(dev, std::abs(r.u[i] - pb.phi[i]));
  EXPECT_LE(dev, 1e-10);
}

TEST(Solve, EnergyHistoryMonotoneAndMinimal) {
  const OperatorProfile prof(4.0, 1e-3, 0.0);
  const DirichletProblem pb = make_problem(disk(1.0 / 24), prof, [](const Vec2& x) { return std::sin(3 * x(0)) * x(1); });
  const SolveReport r = solve(pb);
  ASSERT_TRUE(r.converged);
  for (std::size_t k = 1; k < r.energy_history.size(); ++k) EXPECT_LE(r.energy_history[k], r.energy_history[k - 1]);
  EXPECT_TRUE(minimality_bound_check(r, pb.phi, prof));
  EXPECT_NEAR(r.energy_history.back(), energy(r.u, prof), 1e-10 * r.energy_history.back());
}

TEST(Solve, ConstantShiftAndMaximumPrinciple) {
  const OperatorProfile prof(1.5, 1e-2, 0.0);
  auto phi = [](const Vec2& x) { return x(0) * x(0) - x(1) * x(1) * x(0); };
  const DomainPtr d = disk(1.0 / 16);
  const SolveReport a = solve(make_problem(d, prof, phi));
  const SolveReport b = solve(make_problem(d, prof, [&](const Vec2& x) { return phi(x) + 5.0; }));
  double lo = 1e300, hi = -1e300;
  const ScalarField data = make_problem(d, prof, phi).phi;
  for (std::size_t i = 0; i < d->size(); ++i)
    if (d->kind(i) == NodeKind::boundary) lo = std::min(lo, data[i]), hi = std::max(hi, data[i]);
  for (std::size_t i = 0; i < d->size(); ++i) {
    if (!d->inside(i)) continue;
    EXPECT_NEAR(b.u[i] - a.u[i], 5.0, 1e-7);
    EXPECT_GE(a.u[i], lo - 1e-9);
    EXPECT_LE(a.u[i], hi + 1e-9);
  }
}

TEST(Solve, ReflectionSymmetry) {
  // Data even in x gives an even solution; the disk grid is symmetric.
  const OperatorProfile prof(3.0, 1e-3, 0.0);
  const DomainPtr d = disk(1.0 / 16);
  const SolveReport r = solve(make_problem(d, prof, [](const Vec2& x) { return x(0) * x(0) + x(1); }));
  for (std::size_t i = 0; i < d->size(); ++i) {
    if (!d->inside(i)) continue;
    const Vec3 x = d->position(i);
    const auto j = d->node_at(Vec3(-x(0), x(1), 0));
    ASSERT_GE(j, 0);
    EXPECT_NEAR(r.u[i], r.u[j], 1e-8);
  }
}

TEST(Solve, AnnulusMatchesRadialSolution) {
  const double p = 3.0, eps = 1e-5;
  const RadialOracle oracle(p, eps, 0.25, 1.0, 0.5, 1.0);
  const DomainPtr d = annulus(1.0 / 64);
  const SolveReport r = solve(make_problem(d, OperatorProfile(p, eps, 0.0), [](const Vec2& x) { return std::sqrt(x.norm()); }));
  double err = 0;
  for (std::size_t i = 0; i < d->size(); ++i)
    if (d->inside(i)) err = std::max(err, std::abs(r.u[i] - oracle(d->position2(i).norm())));
  EXPECT_LE(err, 0.02);
}

TEST(Solve, FailureCarriesReport) {
  SolveOptions opt;
  opt.max_iterations = 1;
  opt.tol = 1e-300;
  const DirichletProblem pb = make_problem(disk(1.0 / 16), OperatorProfile(6.0, 1e-3, 0.0),
                                           [](const Vec2& x) { return std::sin(4 * x(0)) * std::cos(3 * x(1)); });
  try {
    solve(pb, opt);
    FAIL() << "expected SolveError";
  } catch (const SolveError& e) {
    EXPECT_FALSE(e.report().converged);
    EXPECT_EQ(e.report().iterations, 1);
  }
}

TEST(Norms, AnalyticAgreesWithDiscreteOnSmoothField) {
  const AnalyticScalar f = scalar_catalog("sin_sin");
  const DomainPtr d = disk(1.0 / 64);
  const Norms a = analytic_norms(f, d, 3.0);
  const Norms n = norms(ScalarField::sample(d, f.value), 3.0);
  EXPECT_NEAR(n.du_l2, a.du_l2, 1e-3 * a.du_l2);
  EXPECT_NEAR(n.d2u_l2, a.d2u_l2, 1e-2 * a.d2u_l2);
  EXPECT_NEAR(n.du_lp, a.du_lp, 1e-3 * a.du_lp);
  EXPECT_EQ(n.area, a.area);
}

TEST(Local, OscillationVanishesForAffine) {
  const DomainPtr d = disk(1.0 / 32);
  const ScalarField u = ScalarField::sample(d, [](const Vec3& x) { return 2 * x(0) + x(1); });
  const OscillationCheck c = local_oscillation_check(u, OperatorProfile(3.0, 1e-3, 0.0), Vec2(0, 0), 0.2);
  EXPECT_NEAR(c.lhs, 0.0, 1e-18);
  EXPECT_NEAR(c.rhs, 0.0, 1e-18);
  EXPECT_THROW(local_oscillation_check(u, OperatorProfile(3.0, 1e-3, 0.0), Vec2(0.8, 0), 0.2), InvalidInput);
}

TEST(Local, CutoffShape) {
  const DomainPtr d = disk(1.0 / 32);
  const ScalarField eta = cutoff(d, Vec2(0, 0), 0.25);
  for (std::size_t i = 0; i < d->size(); ++i) {
    if (!d->active(i)) continue;
    const double r = d->position2(i).norm();
    if (r <= 0.25) {
      EXPECT_EQ(eta[i], 1.0);
    }
    if (r >= 0.5) {
      EXPECT_EQ(eta[i], 0.0);
    }
    EXPECT_GE(eta[i], 0.0);
    EXPECT_LE(eta[i], 1.0);
  }
}

TEST(Local, SobolevCalibrationCoversProbes) {
  const DomainPtr d = disk(1.0 / 32);
  const SobolevCalibration cal = calibrate_sobolev(d, 0.1);
  EXPECT_GT(cal.probes, 10u);
  const ScalarField v = ScalarField::sample(d, [](const Vec3& x) { return std::cos(3 * x(0)) * std::sin(2 * x(1)); });
  EXPECT_TRUE(sobolev_variant_check(v, cal).holds);
  const Integrals in = integrals(ScalarField::sample(d, [](const Vec3&) { return 1.0; }));
  EXPECT_NEAR(in.v_l1, in.v_l2sq, 1e-14);
  EXPECT_EQ(in.dv_l2sq, 0.0);
}
