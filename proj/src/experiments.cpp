#include "plab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "plab/analytic.hpp"
#include "plab/boundary.hpp"
#include "plab/errors.hpp"
#include "plab/field_calculus.hpp"
#include "plab/matrix_cordes.hpp"
#include "plab/operator_profile.hpp"
#include "plab/pde_solver.hpp"

namespace plab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::mt19937_64 stream(std::uint64_t seed, std::uint32_t a, std::uint32_t b = 0, std::uint32_t c = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), a, b, c};
  return std::mt19937_64(seq);
}

std::vector<int> to_ints(const std::vector<double>& v) {
  std::vector<int> out;
  for (double x : v) {
    if (x != std::floor(x)) throw InvalidInput("expected integer values");
    out.push_back(static_cast<int>(x));
  }
  return out;
}

std::string str(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

bool flag(const ExperimentConfig& c, const std::string& key) { return c.extra.get_int(key, 1) != 0; }

std::function<double(const Vec2&)> planar(const AnalyticScalar& f) {
  return [f](const Vec2& x) { return f.value(Vec3(x.x(), x.y(), 0.0)); };
}

DomainPtr unit_box(int dim, int n) {
  const Vec3 lo = dim == 2 ? Vec3(-0.5, -0.5, 0.0) : Vec3(-0.5, -0.5, -0.5);
  const Vec3 hi = dim == 2 ? Vec3(0.5, 0.5, 0.0) : Vec3(0.5, 0.5, 0.5);
  return GridDomain::box(dim, lo, hi, 1.0 / n);
}

const char* class_name(FieldClass c) {
  switch (c) {
    case FieldClass::affine: return "affine";
    case FieldClass::quadratic: return "quadratic";
    default: return "smooth";
  }
}

std::vector<int> default_grids(const std::string& experiment) {
  if (experiment == "verify-identities") return {32, 64, 128};
  if (experiment == "global-estimate") return {128};
  return {64};
}

std::vector<double> default_eps(const std::string& experiment) {
  if (experiment == "global-estimate") return {1e-2, 1e-3, 1e-4, 1e-5};
  return {};
}

}  // namespace

std::vector<std::string> experiment_names() {
  return {"verify-cordes", "verify-identities", "solve", "global-estimate", "boundary-suite"};
}

ExperimentConfig ExperimentConfig::from_config(const std::string& experiment, const KeyValueConfig& cfg) {
  ExperimentConfig c;
  c.experiment = experiment;
  c.extra = cfg;
  c.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 1));
  c.out_dir = cfg.get_string("out", "results");
  c.p = cfg.get_double("profile.p", 2.0);
  c.eps = cfg.get_double("profile.eps", 1e-3);
  c.beta = cfg.get_double("profile.beta", 0.0);
  c.domain = cfg.get_string("problem.domain", "disk");
  c.phi = cfg.get_string("problem.phi", "sin_sin");
  c.grids = cfg.has("problem.grids") ? to_ints(cfg.get_doubles("problem.grids")) : default_grids(experiment);
  c.eps_list = cfg.get_doubles("problem.eps_list", default_eps(experiment));
  return c;
}

void ExperimentConfig::validate() const {
  const auto names = experiment_names();
  if (std::find(names.begin(), names.end(), experiment) == names.end())
    throw InvalidInput("unknown experiment '" + experiment + "'");
  if (grids.empty()) throw InvalidInput("config: at least one grid size is required");
  for (std::size_t i = 0; i < grids.size(); ++i) {
    if (grids[i] < 8) throw InvalidInput("config: grid sizes must be at least 8");
    if (i && grids[i] <= grids[i - 1]) throw InvalidInput("config: grid sizes must be strictly increasing");
  }
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0 && eps_list[i] < 1.0)) throw InvalidInput("config: eps values must lie in (0, 1)");
    if (i && eps_list[i] >= eps_list[i - 1]) throw InvalidInput("config: eps list must be strictly decreasing");
  }
  OperatorProfile(p, eps, beta);
  make_domain(domain, 8);
  scalar_catalog(phi);
  if (out_dir.empty()) throw InvalidInput("config: output directory must not be empty");
}

DomainPtr make_domain(const std::string& spec, int n) {
  if (n < 2) throw InvalidInput("domain: grid size too small");
  const auto parts = split(spec, ':');
  std::vector<double> args;
  for (std::size_t i = 1; i < parts.size(); ++i) args.push_back(parse_double(parts[i]));
  const std::string& kind = parts.front();
  std::shared_ptr<const Shape> shape;
  if (kind == "disk" && args.size() <= 1) {
    shape = std::make_shared<DiskShape>(Vec2::Zero(), args.empty() ? 1.0 : args[0]);
  } else if (kind == "square" && args.size() <= 1) {
    const double a = args.empty() ? 0.5 : args[0];
    shape = std::make_shared<BoxShape>(Vec2(-a, -a), Vec2(a, a));
  } else if (kind == "annulus" && (args.empty() || args.size() == 2)) {
    shape = std::make_shared<AnnulusShape>(Vec2::Zero(), args.empty() ? 0.25 : args[0], args.empty() ? 1.0 : args[1]);
  } else {
    throw InvalidInput("unknown domain '" + spec + "'");
  }
  return GridDomain::from_shape(shape, 1.0 / n);
}

// ---------------------------------------------------------------------------
// Matrix sweeps

ExperimentReport run_verify_cordes(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport rep;
  rep.name = "verify-cordes";
  const auto dims = to_ints(config.extra.get_doubles("sweep.dims", {2, 3, 4, 5, 6}));
  const auto deltas = config.extra.get_doubles("sweep.deltas", {0.25, 0.5, 1.0});
  const auto trials = config.extra.get_int("sweep.trials", 100000);
  const auto gdims = to_ints(config.extra.get_doubles("sweep.general_dims", {2, 3, 4}));
  const auto gtrials = config.extra.get_int("sweep.general_trials", 100000);
  if (trials < 1 || gtrials < 1) throw InvalidInput("sweep: trial counts must be positive");

  CsvTable table("cordes_sweep", {"kind", "n", "delta", "c", "C", "trials", "min_normalized_gap", "violations"});
  SvgChart chart{"Smallest normalized gap", "n", "min gap / (1 + |M|^2)", false, true, {}};
  constexpr double kTol = 1e-9;

  if (flag(config, "sweep.basic")) {
    for (std::size_t k = 0; k < deltas.size(); ++k) {
      Series s{"basic delta=" + str(deltas[k]), {}, {}};
      for (int n : dims) {
        const CordesCertificate cert = make_certificate(n, deltas[k]);
        auto rng = stream(config.seed, 1, static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(k));
        double min_gap = kInf, closed_err = 0.0;
        std::int64_t bad = 0;
        for (std::int64_t t = 0; t < trials; ++t) {
          const SymMatrix a = random_admissible(n, deltas[k], rng);
          const SymMatrix m = random_symmetric(n, rng);
          const double scale = 1.0 + m.squared_norm();
          const double gap = basic_cordes_gap(a, m, cert);
          min_gap = std::min(min_gap, gap / scale);
          if (gap < -kTol * scale) ++bad;
          if (deltas[k] == 1.0) closed_err = std::max(closed_err, std::abs(gap - (1.0 - cert.c) * m.squared_norm()) / scale);
        }
        table.add_row({std::string("basic"), std::int64_t{n}, deltas[k], cert.c, cert.C, trials, min_gap, bad});
        s.x.push_back(n);
        s.y.push_back(min_gap);
        rep.checks.push_back(check_ge("basic gap n=" + std::to_string(n) + " delta=" + str(deltas[k]), min_gap, -kTol));
        if (deltas[k] == 1.0)
          rep.checks.push_back(check_le("basic gap closed form n=" + std::to_string(n), closed_err, 1e-12));
      }
      chart.series.push_back(s);
    }
  }

  if (flag(config, "sweep.general")) {
    for (std::size_t k = 0; k < deltas.size(); ++k) {
      Series s{"general delta=" + str(deltas[k]), {}, {}};
      for (int n : gdims) {
        auto rng = stream(config.seed, 2, static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(k));
        double min_gap = kInf, min_prod = kInf, c = 0.0, big_c = 0.0;
        std::int64_t bad = 0, bad_prod = 0;
        for (std::int64_t t = 0; t < gtrials; ++t) {
          const SymMatrix b = random_spd(n, rng);
          const SymMatrix a = random_admissible_wrt(b, deltas[k], rng);
          const SymMatrix m = random_symmetric(n, rng);
          const CordesCertificate cert = make_certificate(deltas[k], b);
          c = cert.c;
          big_c = cert.C;
          const double scale = 1.0 + (b.matrix() * m.matrix()).squaredNorm();
          const double gap = general_cordes_gap(a, m, cert);
          min_gap = std::min(min_gap, gap / scale);
          if (gap < -kTol * scale) ++bad;
          const ProductBound pb = transpose_product_bound(b, m);
          const double pscale = 1.0 + pb.lhs;
          min_prod = std::min(min_prod, (pb.rhs - pb.lhs) / pscale);
          if (pb.rhs - pb.lhs < -kTol * pscale) ++bad_prod;
        }
        table.add_row({std::string("general"), std::int64_t{n}, deltas[k], c, big_c, gtrials, min_gap, bad});
        table.add_row({std::string("transpose_product"), std::int64_t{n}, deltas[k], kNaN, kNaN, gtrials, min_prod,
                       bad_prod});
        s.x.push_back(n);
        s.y.push_back(min_gap);
        rep.checks.push_back(
            check_ge("general gap n=" + std::to_string(n) + " delta=" + str(deltas[k]), min_gap, -kTol));
        rep.checks.push_back(
            check_ge("transpose product n=" + std::to_string(n) + " delta=" + str(deltas[k]), min_prod, -kTol));
      }
      chart.series.push_back(s);
    }
  }

  rep.tables.emplace_back("cordes_sweep.csv", std::move(table));
  rep.charts.emplace_back("cordes_sweep.svg", std::move(chart));
  return rep;
}

// ---------------------------------------------------------------------------
// Identity suites

namespace {

struct Refinement {
  std::vector<double> errors;  // max |residual| at the coarse grid's nodes
};

Refinement refine(const std::vector<ScalarField>& residuals) {
  Refinement r;
  const std::vector<Vec3> pts = defined_positions(residuals.front());
  for (const auto& f : residuals) r.errors.push_back(max_abs_at(f, pts));
  return r;
}

struct OrderSummary {
  double exact_max = 0.0;
  double ratio_min = kInf;
  double ratio_max = -kInf;
  bool any_exact = false;
  bool any_ratio = false;
};

void record_refinement(CsvTable& table, SvgChart& chart, OrderSummary& sum, const std::string& identity,
                       const std::string& field, FieldClass cls, const std::vector<int>& grids,
                       const Refinement& r) {
  const bool rounding = std::all_of(r.errors.begin(), r.errors.end(), [](double e) { return e <= 1e-12; });
  const bool exact = cls != FieldClass::smooth || rounding;
  Series s{field, {}, {}};
  for (std::size_t k = 0; k < grids.size(); ++k) {
    const double ratio = k ? r.errors[k - 1] / r.errors[k] : kNaN;
    table.add_row({identity, field, std::string(class_name(cls)), std::int64_t{grids[k]}, 1.0 / grids[k], r.errors[k],
                   ratio, std::string(exact ? "exact" : "order")});
    s.x.push_back(1.0 / grids[k]);
    s.y.push_back(r.errors[k]);
    if (exact) continue;
    if (k) {
      sum.any_ratio = true;
      sum.ratio_min = std::min(sum.ratio_min, ratio);
      sum.ratio_max = std::max(sum.ratio_max, ratio);
    }
  }
  if (exact) {
    sum.any_exact = true;
    for (double e : r.errors) sum.exact_max = std::max(sum.exact_max, e);
  }
  chart.series.push_back(s);
}

void summarize(ExperimentReport& rep, const std::string& identity, const OrderSummary& s) {
  if (s.any_exact) rep.checks.push_back(check_le(identity + " exact fields max residual", s.exact_max, 1e-12));
  if (s.any_ratio) {
    rep.checks.push_back(check_in(identity + " smallest refinement ratio", s.ratio_min, 3.2, 4.8));
    rep.checks.push_back(check_in(identity + " largest refinement ratio", s.ratio_max, 3.2, 4.8));
  }
}

void slack_study(ExperimentReport& rep, CsvTable& table, int dim, const std::vector<int>& grids,
                 const OperatorProfile& profile) {
  const CordesConstants k = key_inequality_constants(profile, dim);
  std::vector<DomainPtr> doms;
  for (int n : grids) doms.push_back(unit_box(dim, n));
  double worst = kInf;
  std::string worst_field;
  for (const auto& name : scalar_catalog_names(dim)) {
    const AnalyticScalar f = scalar_catalog(name);
    std::vector<double> mins;
    for (const auto& d : doms) {
      const ScalarField u = ScalarField::sample(d, f.value);
      mins.push_back(min_defined(key_inequality_slack(u, profile, std::nullopt, k)));
    }
    double big_k = 0.0;
    for (std::size_t i = 0; i + 1 < grids.size(); ++i) big_k = std::max(big_k, -mins[i] * grids[i] * grids[i]);
    const double hf = 1.0 / grids.back();
    const double margin = mins.back() + big_k * hf * hf + 1e-9;
    for (std::size_t i = 0; i < grids.size(); ++i)
      table.add_row({std::int64_t{dim}, profile.p(), profile.beta(), profile.eps(), name, std::int64_t{grids[i]},
                     mins[i], big_k, k.c, k.C});
    if (margin < worst) {
      worst = margin;
      worst_field = name;
    }
  }
  rep.checks.push_back(check_ge("key slack n=" + std::to_string(dim) + " p=" + str(profile.p()) +
                                    " beta=" + str(profile.beta()) + " (worst " + worst_field + ") min + K h^2 + 1e-9",
                                worst, 0.0));
}

}  // namespace

ExperimentReport run_verify_identities(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport rep;
  rep.name = "verify-identities";
  const std::vector<int>& grids = config.grids;
  if (grids.size() < 2) throw InvalidInput("identities: need at least two grid sizes");

  if (flag(config, "identities.residuals")) {
    std::vector<DomainPtr> doms;
    for (int n : grids) doms.push_back(unit_box(2, n));
    CsvTable table("identity_residuals",
                   {"identity", "field", "class", "N", "h", "max_residual", "ratio", "mode"});
    SvgChart c_basic{"Hessian identity residual", "h", "max residual", true, true, {}};
    SvgChart c_inf{"Infinity-Laplacian identity residual", "h", "max residual", true, true, {}};
    SvgChart c_div{"Divergence structure residual", "h", "max residual", true, true, {}};
    OrderSummary s_basic, s_inf, s_div;
    for (const auto& name : scalar_catalog_names(2)) {
      const AnalyticScalar f = scalar_catalog(name);
      std::vector<ScalarField> rb, ri, rg;
      for (const auto& d : doms) {
        const ScalarField u = ScalarField::sample(d, f.value);
        rb.push_back(basic_identity_residual(u));
        ri.push_back(infinity_laplacian_identity_residual(u));
        const AnalyticVector g = gradient_field(f);
        rg.push_back(divergence_structure_residual(VectorField::sample(d, 2, g.value)));
      }
      record_refinement(table, c_basic, s_basic, "hessian_identity", name, f.cls, grids, refine(rb));
      record_refinement(table, c_inf, s_inf, "infinity_laplacian_identity", name, f.cls, grids, refine(ri));
      record_refinement(table, c_div, s_div, "divergence_structure", "grad_" + name, f.cls, grids, refine(rg));
    }
    for (const auto& name : vector_catalog_names(2)) {
      const AnalyticVector v = vector_catalog(name);
      std::vector<ScalarField> rv;
      for (const auto& d : doms) rv.push_back(divergence_structure_residual(VectorField::sample(d, 2, v.value)));
      record_refinement(table, c_div, s_div, "divergence_structure", name, v.cls, grids, refine(rv));
    }
    summarize(rep, "hessian identity", s_basic);
    summarize(rep, "infinity-Laplacian identity", s_inf);
    summarize(rep, "divergence structure identity", s_div);
    rep.tables.emplace_back("identity_residuals.csv", std::move(table));
    rep.charts.emplace_back("hessian_identity.svg", std::move(c_basic));
    rep.charts.emplace_back("infinity_laplacian_identity.svg", std::move(c_inf));
    rep.charts.emplace_back("divergence_structure.svg", std::move(c_div));
  }

  if (flag(config, "identities.slack")) {
    CsvTable table("key_inequality_slack", {"n", "p", "beta", "eps", "field", "N", "min_slack", "K", "c", "C"});
    const double eps = config.extra.get_double("identities.slack_eps", 1e-2);
    for (double p : config.extra.get_doubles("identities.slack_p", {1.5, 2.0, 3.0, 6.0})) {
      std::vector<double> betas{0.0};
      if (p != 2.0 && (p - 2.0) / 2.0 > -1.0) betas.push_back((p - 2.0) / 2.0);
      for (double beta : betas) slack_study(rep, table, 2, grids, OperatorProfile(p, eps, beta));
    }
    if (flag(config, "identities.slack3d")) {
      const auto g3 = to_ints(config.extra.get_doubles("identities.grids3d", {16, 32, 64}));
      slack_study(rep, table, 3, g3, OperatorProfile(4.0, eps, 0.0));
    }

    // With p = 2 and beta = 0 the slack is an exact rearrangement of the
    // divergence structure residual of X = Du.
    const DomainPtr d = unit_box(2, grids.back());
    const OperatorProfile flat(2.0, eps, 0.0);
    const CordesConstants k = key_inequality_constants(flat, 2);
    double worst = 0.0;
    for (const auto& name : scalar_catalog_names(2)) {
      const ScalarField u = ScalarField::sample(d, scalar_catalog(name).value);
      const VectorField x = gradient(u);
      const MatrixField j = jacobian(x);
      const ScalarField r = divergence_structure_residual(x);
      const ScalarField slack = key_inequality_slack(u, flat, std::nullopt, k);
      for (std::size_t i = 0; i < d->size(); ++i) {
        if (!std::isfinite(slack[i])) continue;
        const SmallMat m = j.at(i);
        const double t = m.trace();
        const double expect = r[i] + m.cwiseProduct(m.transpose()).sum() - t * t + k.C * t * t - k.c * m.squaredNorm();
        worst = std::max(worst, std::abs(slack[i] - expect) / (1.0 + std::abs(expect)));
      }
    }
    rep.checks.push_back(check_le("p=2 beta=0 slack matches structure identity", worst, 1e-10));

    if (flag(config, "identities.young")) {
      // Shifted variant: the Young split must hold for X = V_b - W with any W.
      const OperatorProfile prof(config.p, config.eps, config.beta);
      const CordesConstants kc = key_inequality_constants(prof, 2);
      double min_slack = kInf;
      for (const auto& name : scalar_catalog_names(2)) {
        const ScalarField u = ScalarField::sample(d, scalar_catalog(name).value);
        const VectorField du = gradient(u);
        VectorField vb(d, 2);
        for (std::size_t i = 0; i < d->size(); ++i) {
          const SmallVec g = du.at(i);
          if (g.allFinite()) vb.set(i, prof.b(g.norm()) * g);
        }
        for (const auto& wn : vector_catalog_names(2)) {
          const VectorField w = VectorField::sample(d, 2, vector_catalog(wn).value);
          VectorField x(d, 2);
          for (std::size_t i = 0; i < d->size(); ++i)
            if (d->active(i)) x.set(i, vb.at(i) - w.at(i));
          const YoungSplitResult y = young_split_check(x, w, kc.c);
          min_slack = std::min(min_slack, y.min_slack);
        }
      }
      rep.checks.push_back(check_ge("Young split slack", min_slack, -1e-9));
    }
    rep.tables.emplace_back("key_inequality_slack.csv", std::move(table));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Solver runs

namespace {

SolveOptions solve_options(const ExperimentConfig& c) {
  SolveOptions o;
  o.tol = c.extra.get_double("solve.tol", 1e-9);
  o.max_iterations = static_cast<int>(c.extra.get_int("solve.max_iterations", 200));
  return o;
}

bool non_increasing(const std::vector<double>& h) {
  for (std::size_t i = 1; i < h.size(); ++i)
    if (h[i] > h[i - 1]) return false;
  return true;
}

}  // namespace

ExperimentReport run_solve(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport rep;
  rep.name = "solve";
  const OperatorProfile profile(config.p, config.eps, config.beta);
  const AnalyticScalar phi = scalar_catalog(config.phi);
  CsvTable summary("solve_summary", {"domain", "phi", "p", "eps", "N", "h", "unknowns", "iterations", "newton_steps",
                                     "gradient_steps", "energy", "energy_phi", "gradient_norm", "max_dev_from_phi",
                                     "monotone", "minimal"});
  CsvTable history("solve_energy_history", {"N", "step", "energy"});
  SvgChart chart{"Energy history", "step", "E - E_final", false, true, {}};
  for (int n : config.grids) {
    const DomainPtr d = make_domain(config.domain, n);
    const DirichletProblem prob = make_problem(d, profile, planar(phi));
    const SolveReport r = solve(prob, solve_options(config));
    double dev = 0.0;
    for (std::size_t i = 0; i < d->size(); ++i)
      if (d->active(i)) dev = std::max(dev, std::abs(r.u[i] - prob.phi[i]));
    const bool mono = non_increasing(r.energy_history);
    const bool minimal = minimality_bound_check(r, prob.phi, profile);
    summary.add_row({config.domain, config.phi, config.p, config.eps, std::int64_t{n}, 1.0 / n,
                     static_cast<std::int64_t>(d->count_kind(NodeKind::inside)), std::int64_t{r.iterations},
                     std::int64_t{r.newton_steps}, std::int64_t{r.gradient_steps}, r.energy_history.back(),
                     energy(prob.phi, profile), r.gradient_norm, dev, std::int64_t{mono}, std::int64_t{minimal}});
    Series s{"N=" + std::to_string(n), {}, {}};
    for (std::size_t k = 0; k < r.energy_history.size(); ++k) {
      history.add_row({std::int64_t{n}, static_cast<std::int64_t>(k), r.energy_history[k]});
      s.x.push_back(static_cast<double>(k));
      s.y.push_back(r.energy_history[k] - r.energy_history.back());
    }
    chart.series.push_back(s);
    const std::string tag = " N=" + std::to_string(n);
    rep.checks.push_back(check_true("converged" + tag, r.converged, r.gradient_norm));
    rep.checks.push_back(check_true("energy history non-increasing" + tag, mono));
    rep.checks.push_back(check_true("energy below Dirichlet data energy" + tag, minimal));
    if (phi.cls == FieldClass::affine) rep.checks.push_back(check_le("affine data reproduced" + tag, dev, 1e-10));
    if (config.extra.get_int("solve.write_field", 0) != 0) {
      CsvTable field("solution_field", {"x", "y", "kind", "u"});
      for (std::size_t i = 0; i < d->size(); ++i) {
        if (!d->active(i)) continue;
        const Vec2 x = d->position2(i);
        field.add_row({x.x(), x.y(), std::int64_t{static_cast<int>(d->kind(i))}, r.u[i]});
      }
      rep.tables.emplace_back("solution_N" + std::to_string(n) + ".csv", std::move(field));
    }
  }
  rep.tables.emplace(rep.tables.begin(), "solve_summary.csv", std::move(summary));
  rep.tables.emplace_back("solve_energy_history.csv", std::move(history));
  rep.charts.emplace_back("solve_energy_history.svg", std::move(chart));
  return rep;
}

namespace {

void estimate_series(const ExperimentConfig& config, const std::string& domain_spec, int n,
                     const std::vector<double>& p_list, std::vector<EstimateRecord>& out) {
  const DomainPtr d = make_domain(domain_spec, n);
  const AnalyticScalar phi = scalar_catalog(config.phi);
  for (double p : p_list) {
    const Norms np = analytic_norms(phi, d, p);
    std::optional<ScalarField> warm;
    for (double eps : config.eps_list) {
      const auto t0 = std::chrono::steady_clock::now();
      const OperatorProfile profile(p, eps, 0.0);
      if (!cordes_window_ok(profile, 2)) throw InvalidInput("estimate: profile outside the Cordes window");
      const DirichletProblem prob = make_problem(d, profile, planar(phi));
      SolveOptions opt = solve_options(config);
      opt.initial = warm;
      const SolveReport r = solve(prob, opt);
      warm = r.u;
      const Norms nu = norms(r.u, p);
      EstimateRecord rec;
      rec.domain = domain_spec;
      rec.p = p;
      rec.h = 1.0 / n;
      rec.eps = eps;
      rec.du_w12 = nu.du_w12;
      rec.dphi_w12 = np.du_w12;
      rec.dphi_lp = np.du_lp;
      rec.ratio = nu.du_w12 / (np.du_w12 + np.du_lp + eps);
      rec.d2_ratio = nu.d2u_l2 * nu.d2u_l2 / (np.d2u_l2 * np.d2u_l2);
      rec.newton_steps = r.newton_steps;
      rec.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      out.push_back(rec);
    }
  }
}

double drift(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return (*hi - *lo) / *lo;
}

}  // namespace

ExperimentReport run_global_estimate(const ExperimentConfig& config, std::vector<EstimateRecord>* records) {
  config.validate();
  if (config.eps_list.empty()) throw InvalidInput("estimate: eps list is empty");
  ExperimentReport rep;
  rep.name = "global-estimate";
  const auto p_list = config.extra.get_doubles("estimate.p_list", {1.5, 2.0, 2.5, 4.0});
  const int n = config.grids.back();
  std::vector<EstimateRecord> recs;
  estimate_series(config, config.domain, n, p_list, recs);
  const bool square = flag(config, "estimate.square");
  const std::string square_spec = config.extra.get_string("estimate.square_domain", "square");
  if (square) estimate_series(config, square_spec, n, p_list, recs);

  CsvTable table("global_estimate", {"domain", "phi", "p", "h", "eps", "du_w12", "dphi_w12", "dphi_lp", "ratio",
                                     "d2_ratio", "newton_steps"});
  SvgChart chart{"Global estimate ratio", "eps", "ratio", true, false, {}};
  std::map<std::pair<std::string, double>, std::vector<const EstimateRecord*>> groups;
  for (const auto& r : recs) {
    table.add_row({r.domain, config.phi, r.p, r.h, r.eps, r.du_w12, r.dphi_w12, r.dphi_lp, r.ratio, r.d2_ratio,
                   std::int64_t{r.newton_steps}});
    groups[{r.domain, r.p}].push_back(&r);
  }
  for (const auto& [key, g] : groups) {
    std::vector<double> ratios, d2;
    Series s{key.first + " p=" + str(key.second), {}, {}};
    for (const auto* r : g) {
      ratios.push_back(r->ratio);
      d2.push_back(r->d2_ratio);
      s.x.push_back(r->eps);
      s.y.push_back(r->ratio);
    }
    chart.series.push_back(s);
    const std::string tag = key.first + " p=" + str(key.second);
    const bool finite = std::all_of(ratios.begin(), ratios.end(), [](double v) { return std::isfinite(v) && v > 0; });
    rep.checks.push_back(check_true("ratio finite " + tag, finite));
    if (key.first == config.domain) rep.checks.push_back(check_le("ratio drift across eps " + tag, drift(ratios), 0.10));
    if (square && key.first == square_spec) {
      rep.checks.push_back(check_le("Hessian ratio drift across eps " + tag, drift(d2), 0.10));
    }
  }
  rep.tables.emplace_back("global_estimate.csv", std::move(table));
  rep.charts.emplace_back("global_estimate.svg", std::move(chart));
  if (records) *records = std::move(recs);
  return rep;
}

// ---------------------------------------------------------------------------
// Boundary suite

namespace {

AmbientVectorField ambient(const AnalyticVector& v) {
  AmbientVectorField f;
  f.value = [v](const Vec2& x) -> Vec2 { return v.value(Vec3(x.x(), x.y(), 0.0)).head<2>(); };
  f.jacobian = [v](const Vec2& x) -> Eigen::Matrix2d { return v.jacobian(Vec3(x.x(), x.y(), 0.0)).topLeftCorner<2, 2>(); };
  return f;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

std::function<double(const Vec2&)> random_scalar(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  struct Mode {
    double a, kx, ky, ph;
  };
  const double c0 = 1.0 + 0.5 * u(rng);
  std::vector<Mode> modes;
  for (int k = 0; k < 3; ++k) modes.push_back({0.4 * u(rng), 2.0 * u(rng), 2.0 * u(rng), 3.0 * u(rng)});
  return [c0, modes](const Vec2& x) {
    double s = c0;
    for (const auto& m : modes) s += m.a * std::sin(m.kx * x.x() + m.ky * x.y() + m.ph);
    return s;
  };
}

ArcSet circle_arc(double radius, double angle, int points) {
  std::vector<Vec2> arc;
  for (int k = 0; k <= points; ++k) {
    const double t = angle * k / points;
    arc.emplace_back(radius * std::cos(t), radius * std::sin(t));
  }
  return {arc};
}

}  // namespace

ExperimentReport run_boundary_suite(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport rep;
  rep.name = "boundary-suite";
  const int samples = static_cast<int>(config.extra.get_int("boundary.samples", 512));

  if (flag(config, "boundary.grisvard")) {
    CsvTable table("grisvard_residual", {"curve", "field", "method", "samples", "max_residual"});
    SvgChart chart{"Boundary identity residual (4th-order differences)", "samples", "max residual", true, true, {}};
    for (const std::string name : {"circle", "ellipse", "bean"}) {
      const BoundaryCurve curve(curve_catalog(name), samples);
      double worst = 0.0;
      for (const auto& vn : vector_catalog_names(2)) {
        const double r = max_abs(grisvard_identity_residual(curve, ambient(vector_catalog(vn))));
        table.add_row({name, vn, std::string("spectral"), std::int64_t{samples}, r});
        worst = std::max(worst, r);
      }
      const auto g = [](const Vec2& x) { return 1.0 + 0.5 * std::sin(2.0 * x.x() + x.y()); };
      const double rn = max_abs(grisvard_identity_residual(curve, normal_field(curve, g)));
      table.add_row({name, std::string("normal_field"), std::string("spectral"), std::int64_t{samples}, rn});
      worst = std::max(worst, rn);
      rep.checks.push_back(check_le("boundary identity residual " + name + " M=" + std::to_string(samples), worst, 1e-6));

      AmbientVectorField constant;
      constant.value = [](const Vec2&) -> Vec2 { return {0.3, -0.7}; };
      constant.jacobian = [](const Vec2&) -> Eigen::Matrix2d { return Eigen::Matrix2d::Zero(); };
      const double rc = max_abs(grisvard_identity_residual(curve, constant));
      table.add_row({name, std::string("constant"), std::string("spectral"), std::int64_t{samples}, rc});
      rep.checks.push_back(check_le("boundary identity constant field " + name, rc, 1e-12));

      // 4th-order periodic differences, refined twice. A normal field would
      // not exercise them (its tangential terms vanish), so use a general one.
      Series s{name, {}, {}};
      std::vector<double> errs;
      const AmbientVectorField general = ambient(vector_catalog("exp_trig_v"));
      for (int m : {samples / 4, samples / 2, samples}) {
        const BoundaryCurve c(curve_catalog(name), m);
        const double r = max_abs(grisvard_identity_residual(c, general, DerivativeMethod::fd4));
        table.add_row({name, std::string("exp_trig_v"), std::string("fd4"), std::int64_t{m}, r});
        errs.push_back(r);
        s.x.push_back(m);
        s.y.push_back(r);
      }
      chart.series.push_back(s);
      rep.checks.push_back(check_ge("fd4 refinement ratio " + name, std::min(errs[0] / errs[1], errs[1] / errs[2]), 4.0));
    }
    rep.tables.emplace_back("grisvard_residual.csv", std::move(table));
    rep.charts.emplace_back("grisvard_fd4.svg", std::move(chart));
  }

  if (flag(config, "boundary.normal_fields")) {
    const int count = static_cast<int>(config.extra.get_int("boundary.normal_fields_count", 20));
    CsvTable table("normal_flow", {"curve", "field", "max_flow", "max_excess_over_bound", "max_identity_error"});
    const std::vector<std::string> names{"circle", "ellipse", "bean"};
    for (std::size_t ci = 0; ci < names.size(); ++ci) {
      const std::string& name = names[ci];
      const BoundaryCurve curve(curve_catalog(name), samples);
      auto rng = stream(config.seed, 10, static_cast<std::uint32_t>(ci));
      double max_flow = -kInf, excess = -kInf, ident = 0.0;
      for (int k = 0; k < count; ++k) {
        const auto g = random_scalar(rng);
        const NormalFlowBound fb = normal_flow_bound(curve, normal_field(curve, g));
        double mf = -kInf, ex = -kInf, id = 0.0;
        for (int i = 0; i < curve.size(); ++i) {
          const double gi = g(curve.points()[i]);
          mf = std::max(mf, fb.flow[i]);
          ex = std::max(ex, std::abs(fb.flow[i]) - fb.bound[i]);
          id = std::max(id, std::abs(fb.flow[i] - curve.curvature()[i] * gi * gi));
        }
        table.add_row({name, std::int64_t{k}, mf, ex, id});
        max_flow = std::max(max_flow, mf);
        excess = std::max(excess, ex);
        ident = std::max(ident, id);
      }
      if (curve.convex()) rep.checks.push_back(check_le("normal flow nonpositive on " + name, max_flow, 1e-8));
      rep.checks.push_back(check_le("normal flow within |B||X|^2 on " + name, excess, 1e-8));
      rep.checks.push_back(check_le("normal flow equals B g^2 on " + name, ident, 1e-8));
    }
    rep.tables.emplace_back("normal_flow.csv", std::move(table));
  }

  CapacityOptions cap_opt;
  cap_opt.h = 1.0 / static_cast<double>(config.extra.get_int("boundary.capacity_grid", 64));

  if (flag(config, "boundary.capacity")) {
    CsvTable table("capacity", {"set", "angle", "radius", "capacity", "exact"});
    const double exact = 2.0 * M_PI / std::log(4.0);
    double prev = 0.0;
    bool monotone = true;
    double full = 0.0;
    for (double frac : {0.25, 0.5, 0.75, 1.0}) {
      const double c = relative_capacity(circle_arc(0.25, 2.0 * M_PI * frac, 512), Vec2::Zero(), cap_opt);
      table.add_row({std::string("concentric_arc"), 2.0 * M_PI * frac, 0.25, c, frac == 1.0 ? exact : kNaN});
      monotone = monotone && c >= prev;
      prev = c;
      full = c;
    }
    table.add_row({std::string("empty"), 0.0, 0.0, relative_capacity({}, Vec2::Zero(), cap_opt), 0.0});
    rep.checks.push_back(check_le("concentric condenser relative error", std::abs(full - exact) / exact, 0.03));
    rep.checks.push_back(check_true("capacity monotone in nested arcs", monotone));
    rep.tables.emplace_back("capacity.csv", std::move(table));
  }

  if (flag(config, "boundary.rearrangement")) {
    const int count = static_cast<int>(config.extra.get_int("boundary.step_functions", 100));
    const BoundaryCurve circle(curve_catalog("circle"), samples);
    auto rng = stream(config.seed, 11);
    std::uniform_int_distribution<int> pieces(1, 8);
    std::uniform_real_distribution<double> val(-3.0, 3.0), unit01(0.0, 1.0);
    double worst_id = 0.0, worst_dist = 0.0, worst_scale = 0.0;
    CsvTable table("rearrangement", {"function", "pieces", "integral", "rearranged_integral", "lorentz_q2",
                                     "zygmund"});
    for (int k = 0; k < count; ++k) {
      const int m = pieces(rng);
      std::vector<double> cuts(m), vals(m);
      for (auto& c : cuts) c = unit01(rng) * 2.0 * M_PI;
      std::sort(cuts.begin(), cuts.end());
      for (auto& v : vals) v = val(rng);
      std::vector<double> psi(circle.size());
      for (int i = 0; i < circle.size(); ++i) {
        const double t = circle.ds() * i;
        const auto it = std::upper_bound(cuts.begin(), cuts.end(), t);
        psi[i] = vals[(it - cuts.begin()) % m];
      }
      const BoundaryFunction f = boundary_function(circle, psi);
      const StepFunction star = decreasing_rearrangement(f);
      double direct = 0.0;
      for (std::size_t i = 0; i < psi.size(); ++i) direct += std::abs(psi[i]) * f.weights[i];
      const double rearranged = star.integral(star.total());
      worst_id = std::max(worst_id, std::abs(direct - rearranged));
      for (double lambda = 0.0; lambda <= 3.0; lambda += 0.125) {
        double mu_star = 0.0, prev = 0.0;
        for (std::size_t j = 0; j < star.values().size(); ++j) {
          if (star.values()[j] > lambda) mu_star += star.breakpoints()[j] - prev;
          prev = star.breakpoints()[j];
        }
        worst_dist = std::max(worst_dist, std::abs(mu_star - distribution_function(f, lambda)));
      }
      const WeakNorms w = weak_norms(f, 2.0);
      BoundaryFunction f2 = f;
      for (double& v : f2.values) v *= 2.0;
      const WeakNorms w2 = weak_norms(f2, 2.0);
      worst_scale = std::max({worst_scale, std::abs(w2.lorentz - 2.0 * w.lorentz) / (1.0 + w.lorentz),
                              std::abs(w2.zygmund - 2.0 * w.zygmund) / (1.0 + w.zygmund)});
      table.add_row({std::int64_t{k}, std::int64_t{m}, direct, rearranged, w.lorentz, w.zygmund});
    }
    rep.checks.push_back(check_le("rearrangement preserves the integral", worst_id, 1e-10));
    rep.checks.push_back(check_le("rearrangement equimeasurable", worst_dist, 1e-10));
    rep.checks.push_back(check_le("weak norms 1-homogeneous", worst_scale, 1e-12));
    rep.tables.emplace_back("rearrangement.csv", std::move(table));
  }

  KQuantityOptions kopt;
  kopt.centers = static_cast<int>(config.extra.get_int("boundary.k_centers", 4));
  kopt.capacity = cap_opt;
  std::map<double, double> k_circle;
  const BoundaryCurve circle(curve_catalog("circle"), samples);
  auto k_on_circle = [&](double r) {
    auto it = k_circle.find(r);
    if (it == k_circle.end()) it = k_circle.emplace(r, k_quantity(circle, r, kopt).value).first;
    return it->second;
  };

  if (flag(config, "boundary.k_quantity")) {
    CsvTable table("k_quantity", {"curve", "rho", "r", "k_estimate", "best_arc_length", "candidates"});
    SvgChart chart{"Curvature-capacity estimate on the unit circle", "r", "K estimate (candidate family)", true, false,
                   {}};
    Series s{"circle", {}, {}};
    const auto radii = config.extra.get_doubles("boundary.k_radii", {0.4, 0.2, 0.1, 0.05});
    bool monotone = true;
    double prev = kInf;
    for (double r : radii) {
      const KQuantity k = k_quantity(circle, r, kopt);
      k_circle[r] = k.value;
      table.add_row({std::string("circle"), kNaN, r, k.value, k.best_arc_length, static_cast<std::int64_t>(k.candidates)});
      s.x.push_back(r);
      s.y.push_back(k.value);
      monotone = monotone && k.value <= prev;
      prev = k.value;
    }
    chart.series.push_back(s);
    rep.checks.push_back(check_true("circle K estimate non-increasing as r decreases", monotone, prev));

    const double r_fixed = config.extra.get_double("boundary.k_rho_radius", 0.2);
    bool increasing = true;
    prev = -kInf;
    for (double rho : config.extra.get_doubles("boundary.rho_list", {0.5, 0.25, 0.125})) {
      const BoundaryCurve sq(curve_catalog("rounded_square", rho), samples);
      const KQuantity k = k_quantity(sq, r_fixed, kopt);
      table.add_row({std::string("rounded_square"), rho, r_fixed, k.value, k.best_arc_length,
                     static_cast<std::int64_t>(k.candidates)});
      increasing = increasing && k.value > prev;
      prev = k.value;
    }
    rep.checks.push_back(check_true("rounded square K estimate grows as the corner radius shrinks", increasing, prev));
    rep.tables.emplace_back("k_quantity.csv", std::move(table));
    rep.charts.emplace_back("k_quantity.svg", std::move(chart));
  }

  if (flag(config, "boundary.trace")) {
    CsvTable table("weighted_trace", {"r", "k_estimate", "lhs", "rhs_factor", "ratio"});
    const DomainPtr d = make_domain("disk", static_cast<int>(config.extra.get_int("boundary.trace_grid", 128)));
    std::vector<double> ratios;
    for (double r : config.extra.get_doubles("boundary.trace_radii", {0.2, 0.4})) {
      const Vec2 center(1.0, 0.0);
      const ScalarField v = cutoff(d, center, 0.5 * r);
      const double k = k_on_circle(r);
      const TraceCheck t = weighted_trace_check(v, circle, center, r, k);
      table.add_row({r, k, t.lhs, t.rhs_factor, t.ratio});
      ratios.push_back(t.ratio);
    }
    const bool finite = std::all_of(ratios.begin(), ratios.end(), [](double v) { return std::isfinite(v) && v > 0; });
    rep.checks.push_back(check_true("weighted trace ratio finite", finite));
    if (finite && ratios.size() > 1) {
      const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
      rep.checks.push_back(check_le("weighted trace ratio spread (max/min)", *hi / *lo,
                                    config.extra.get_double("boundary.trace_spread", 4.0)));
    }
    rep.tables.emplace_back("weighted_trace.csv", std::move(table));
  }
  return rep;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  if (config.experiment == "verify-cordes") return run_verify_cordes(config);
  if (config.experiment == "verify-identities") return run_verify_identities(config);
  if (config.experiment == "solve") return run_solve(config);
  if (config.experiment == "global-estimate") return run_global_estimate(config);
  if (config.experiment == "boundary-suite") return run_boundary_suite(config);
  throw InvalidInput("unknown experiment '" + config.experiment + "'");
}

}  // namespace plab
