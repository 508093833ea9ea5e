#include "plab/operator_profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "plab/config.hpp"
#include "plab/errors.hpp"

namespace plab {

namespace {

constexpr int kThetaGridPoints = 10000;

void require_dim(int n) {
  if (n < 2) throw InvalidInput("dimension n must be >= 2");
}

}  // namespace

OperatorProfile::OperatorProfile(double p, double eps, double beta) : p_(p), eps_(eps), beta_(beta) {
  if (!(p > 1.0) || !std::isfinite(p)) throw InvalidInput("profile: p must be > 1");
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidInput("profile: eps must lie in (0,1)");
  if (!(beta > -1.0) || !std::isfinite(beta)) throw InvalidInput("profile: beta must be > -1");
}

double OperatorProfile::a(double t) const { return std::pow(t * t + eps_, 0.5 * (p_ - 2.0)); }

double OperatorProfile::b(double t) const { return std::pow(t * t + eps_, 0.5 * beta_); }

double OperatorProfile::vartheta_a(double t) const { return (p_ - 2.0) * t * t / (t * t + eps_); }

double OperatorProfile::vartheta_b(double t) const { return beta_ * t * t / (t * t + eps_); }

double OperatorProfile::i_a() const { return std::min(p_ - 2.0, 0.0); }
double OperatorProfile::s_a() const { return std::max(p_ - 2.0, 0.0); }
double OperatorProfile::i_b() const { return std::min(beta_, 0.0); }
double OperatorProfile::s_b() const { return std::max(beta_, 0.0); }

double OperatorProfile::theta(double t) const {
  const double t2 = t * t;
  return ((p_ - 1.0) * t2 + eps_) / ((beta_ + 1.0) * t2 + eps_);
}

ThetaBounds OperatorProfile::theta_bounds() const {
  const double r = (p_ - 1.0) / (beta_ + 1.0);
  return {std::min(r, 1.0), std::max(r, 1.0)};
}

bool cordes_window_ok(const OperatorProfile& profile, int n) {
  require_dim(n);
  if (n == 2) return true;
  const bool theta_form = profile.theta_bounds().sup < 2.0 * (n - 1) / (n - 2);
  const bool beta_form =
      profile.beta() > -1.0 + (n - 2) * (profile.p() - 1.0) / (2.0 * (n - 1));
  return theta_form && beta_form;
}

double cordes_delta_of_theta(double theta, int n) {
  return (2.0 * (n - 1) - (n - 2) * theta) * theta / (n - 1 + theta * theta);
}

double delta_max(const OperatorProfile& profile, int n) {
  if (!cordes_window_ok(profile, n)) throw InvalidInput("delta_max: profile outside the Cordes window");
  const auto [lo, hi] = profile.theta_bounds();
  double best = std::min(cordes_delta_of_theta(lo, n), cordes_delta_of_theta(hi, n));
  for (int k = 1; k < kThetaGridPoints - 1; ++k) {
    const double th = lo + (hi - lo) * k / (kThetaGridPoints - 1);
    best = std::min(best, cordes_delta_of_theta(th, n));
  }
  if (!(best > 0.0)) throw InvalidInput("delta_max: no positive delta");
  return best;
}

StructureMatrices structure_matrices(const OperatorProfile& profile, const Eigen::VectorXd& grad) {
  const int n = static_cast<int>(grad.size());
  require_dim(n);
  const double t2 = grad.squaredNorm();
  if (t2 == 0.0) return {SymMatrix::identity(n), SymMatrix::identity(n)};
  const double t = std::sqrt(t2);
  const Eigen::MatrixXd proj = grad * grad.transpose() / t2;
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  return {SymMatrix::symmetrized(id + profile.vartheta_a(t) * proj),
          SymMatrix::symmetrized(id + profile.vartheta_b(t) * proj)};
}

bool pointwise_cordes_check(const OperatorProfile& profile, int n, double t) {
  if (!cordes_window_ok(profile, n)) return false;
  const double delta = delta_max(profile, n);
  const double th = profile.theta(t);
  const double lhs = (n - 1 + delta) * (n - 1 + th * th);
  const double rhs = (n - 1 + th) * (n - 1 + th);
  return lhs <= rhs * (1.0 + 1e-12);
}

CordesConstants key_inequality_constants(const OperatorProfile& profile, int n) {
  const double delta = delta_max(profile, n);
  const CordesConstants base = cordes_constants(n, delta);
  const double ratio =
      std::min(1.0, 1.0 + profile.i_b()) / std::max(1.0, 1.0 + profile.s_b());
  return {base.c * ratio * ratio, base.C};
}

double young_constant(int n, double c) {
  if (n < 2 || n > 4) throw InvalidInput("young_constant: n must lie in [2,4]");
  if (!(c > 0.0)) throw InvalidInput("young_constant: c must be positive");
  return 2.0 * (n + 1) * (1.0 + 2.0 / c);
}

CordesConstants shifted_inequality_constants(const OperatorProfile& profile, int n) {
  const CordesConstants k = key_inequality_constants(profile, n);
  return {0.5 * k.c, std::max(k.C, young_constant(n, k.c))};
}

std::string serialize_profile(const OperatorProfile& profile, int n) {
  std::ostringstream os;
  os.precision(17);
  os << "p = " << profile.p() << "\n"
     << "eps = " << profile.eps() << "\n"
     << "beta = " << profile.beta() << "\n"
     << "n = " << n << "\n";
  return os.str();
}

ProfileWithDim parse_profile(const std::string& text) {
  const KeyValueConfig cfg = KeyValueConfig::parse(text);
  return {OperatorProfile(cfg.get_double("p"), cfg.get_double("eps"), cfg.get_double("beta", 0.0)),
          static_cast<int>(cfg.get_int("n", 2))};
}

}  // namespace plab
