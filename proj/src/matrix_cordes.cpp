#include "plab/matrix_cordes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "plab/errors.hpp"

namespace plab {

namespace {

constexpr double kSpdRelTol = 1e-12;

void require_same_dim(const SymMatrix& a, const SymMatrix& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw InvalidInput(std::string(what) + ": dimension mismatch");
  }
}

}  // namespace

SymMatrix::SymMatrix(int n) {
  if (n < 2) throw InvalidInput("SymMatrix: dimension must be >= 2");
  m_ = Eigen::MatrixXd::Zero(n, n);
}

SymMatrix::SymMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw InvalidInput("SymMatrix: matrix is not square");
  if (m_.rows() < 2) throw InvalidInput("SymMatrix: dimension must be >= 2");
  for (Eigen::Index i = 0; i < m_.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < m_.cols(); ++j) {
      if (m_(i, j) != m_(j, i)) throw InvalidInput("SymMatrix: matrix is not symmetric");
    }
  }
  if (!m_.allFinite()) throw InvalidInput("SymMatrix: non-finite entry");
}

SymMatrix SymMatrix::identity(int n) {
  if (n < 2) throw InvalidInput("SymMatrix: dimension must be >= 2");
  return SymMatrix(Eigen::MatrixXd::Identity(n, n));
}

SymMatrix SymMatrix::diagonal(const Eigen::VectorXd& d) {
  return SymMatrix(Eigen::MatrixXd(d.asDiagonal()));
}

SymMatrix SymMatrix::symmetrized(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw InvalidInput("SymMatrix: matrix is not square");
  Eigen::MatrixXd s = 0.5 * (m + m.transpose());
  // Exact symmetry: copy the upper triangle down.
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < s.cols(); ++j) s(j, i) = s(i, j);
  }
  return SymMatrix(std::move(s));
}

SymMatrix SymMatrix::operator+(const SymMatrix& o) const {
  require_same_dim(*this, o, "SymMatrix::operator+");
  return SymMatrix(Eigen::MatrixXd(m_ + o.m_));
}

SymMatrix SymMatrix::operator-(const SymMatrix& o) const {
  require_same_dim(*this, o, "SymMatrix::operator-");
  return SymMatrix(Eigen::MatrixXd(m_ - o.m_));
}

SymMatrix SymMatrix::operator*(double s) const { return SymMatrix(Eigen::MatrixXd(m_ * s)); }

double hs_inner(const Eigen::MatrixXd& m, const Eigen::MatrixXd& n) {
  return m.cwiseProduct(n).sum();
}

double transpose_inner(const Eigen::MatrixXd& n) { return n.cwiseProduct(n.transpose()).sum(); }

Spectrum spectrum(const SymMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.matrix());
  return {es.eigenvalues(), es.eigenvectors()};
}

void require_spd(const SymMatrix& b) {
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(
                                 b.matrix(), Eigen::EigenvaluesOnly)
                                 .eigenvalues();
  const double lmax = ev.maxCoeff();
  const double lmin = ev.minCoeff();
  if (!(lmax > 0.0) || !(lmin > kSpdRelTol * lmax)) {
    throw InvalidInput("matrix is not symmetric positive definite");
  }
}

std::optional<double> cordes_delta(const SymMatrix& a, const SymMatrix& b) {
  require_same_dim(a, b, "cordes_delta");
  require_spd(b);
  if (a.squared_norm() == 0.0) throw InvalidInput("cordes_delta: A must be nonzero");
  const int n = a.dim();
  const Eigen::MatrixXd binv_a = b.matrix().llt().solve(a.matrix());
  const double tr = binv_a.trace();
  const double value = tr * tr / transpose_inner(binv_a) - (n - 1);
  if (!(value > 0.0)) return std::nullopt;
  return std::min(value, 1.0);
}

ParallelSplit split_parallel_perp(const SymMatrix& a) {
  const int n = a.dim();
  SymMatrix par = SymMatrix::identity(n) * (a.trace() / n);
  SymMatrix perp = a - par;
  return {std::move(par), std::move(perp)};
}

CordesConstants cordes_constants(int n, double delta) {
  if (n < 2) throw InvalidInput("cordes_constants: n must be >= 2");
  if (!(delta > 0.0 && delta <= 1.0)) throw InvalidInput("cordes_constants: delta must lie in (0,1]");
  const double big_c = n / delta;
  return {1.0 / (2.0 - n + big_c), big_c};
}

CordesCertificate make_certificate(int n, double delta) {
  return make_certificate(delta, SymMatrix::identity(n));
}

CordesCertificate make_certificate(double delta, const SymMatrix& basis) {
  require_spd(basis);
  const auto k = cordes_constants(basis.dim(), delta);
  return {delta, k.c, k.C, basis};
}

Eigen::Matrix2d cordes_quadratic_form(const SymMatrix& a, double big_c) {
  const int n = a.dim();
  const auto [par, perp] = split_parallel_perp(a);
  const double a2 = a.squared_norm();
  if (a2 == 0.0) throw InvalidInput("cordes_quadratic_form: A must be nonzero");
  const double np = par.norm();
  const double nq = perp.norm();
  Eigen::Matrix2d q;
  q(0, 0) = 1.0 - n + big_c * np * np / a2;
  q(1, 1) = 1.0 + big_c * nq * nq / a2;
  q(0, 1) = q(1, 0) = big_c * np * nq / a2;
  return q;
}

double basic_cordes_gap(const SymMatrix& a, const SymMatrix& m, const CordesCertificate& cert) {
  require_same_dim(a, m, "basic_cordes_gap");
  const double a2 = a.squared_norm();
  if (a2 == 0.0) throw InvalidInput("basic_cordes_gap: |A| must be nonzero");
  const double m2 = m.squared_norm();
  const double tr = m.trace();
  const double am = hs_inner(a.matrix(), m.matrix());
  return m2 - tr * tr + cert.C / a2 * am * am - cert.c * m2;
}

Eigen::MatrixXd congruence_reduce(const SymMatrix& b) {
  require_spd(b);
  const auto s = spectrum(b);
  return s.vectors * s.values.cwiseSqrt().cwiseInverse().asDiagonal();
}

double general_cordes_gap(const SymMatrix& a, const SymMatrix& m, const CordesCertificate& cert) {
  const SymMatrix& b = cert.basis;
  require_same_dim(a, m, "general_cordes_gap");
  require_same_dim(a, b, "general_cordes_gap");
  if (a.squared_norm() == 0.0) throw InvalidInput("general_cordes_gap: A must be nonzero");
  const Eigen::MatrixXd bm = b.matrix() * m.matrix();
  const double t = transpose_inner(bm);
  const double tr = bm.trace();
  const Eigen::MatrixXd binv_a = b.matrix().llt().solve(a.matrix());
  const double am = hs_inner(a.matrix(), m.matrix());
  return t - tr * tr + cert.C / transpose_inner(binv_a) * am * am - cert.c * t;
}

ProductBound transpose_product_bound(const SymMatrix& b, const SymMatrix& m) {
  require_same_dim(b, m, "transpose_product_bound");
  require_spd(b);
  const auto s = spectrum(b);
  const double ratio = s.values.maxCoeff() / s.values.minCoeff();
  const Eigen::MatrixXd bm = b.matrix() * m.matrix();
  return {bm.squaredNorm(), ratio * ratio * transpose_inner(bm)};
}

SymMatrix random_symmetric(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd g(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) g(i, j) = normal(rng);
  }
  return SymMatrix::symmetrized(g);
}

SymMatrix random_admissible(int n, double delta, std::mt19937_64& rng) {
  if (!(delta > 0.0 && delta <= 1.0)) throw InvalidInput("random_admissible: delta must lie in (0,1]");
  std::normal_distribution<double> normal(0.0, 1.0);
  if (delta == 1.0) {
    double s = 0.0;
    while (s == 0.0) s = normal(rng);
    return SymMatrix::identity(n) * s;
  }
  const SymMatrix g = random_symmetric(n, rng);
  const auto [par, perp] = split_parallel_perp(g);
  // The Cordes condition reads |A_par| >= k |A_perp| with
  // k^2 = (n-1+delta)/(1-delta); only the parallel part moves under A + tI.
  const double k = std::sqrt((n - 1 + delta) / (1.0 - delta));
  // Half the samples sit essentially on the boundary of the admissible cone.
  const double slack = (std::uniform_real_distribution<double>(0.0, 1.0)(rng) < 0.5)
                           ? 1e-9
                           : std::abs(normal(rng));
  const double target = k * perp.norm() * (1.0 + slack) + 1e-12;
  const double sign = normal(rng) < 0.0 ? -1.0 : 1.0;
  const double trace_target = sign * target * std::sqrt(static_cast<double>(n));
  return perp + SymMatrix::identity(n) * (trace_target / n);
}

SymMatrix random_spd(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> logu(std::log(0.1), std::log(10.0));
  Eigen::MatrixXd g(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) g(i, j) = normal(rng);
  }
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
  Eigen::VectorXd lam(n);
  for (int i = 0; i < n; ++i) lam(i) = std::exp(logu(rng));
  return SymMatrix::symmetrized(q * lam.asDiagonal() * q.transpose());
}

SymMatrix random_admissible_wrt(const SymMatrix& b, double delta, std::mt19937_64& rng) {
  const Eigen::MatrixXd phi = congruence_reduce(b);
  const Eigen::MatrixXd phi_inv = phi.inverse();
  const SymMatrix a0 = random_admissible(b.dim(), delta, rng);
  return SymMatrix::symmetrized(phi_inv.transpose() * a0.matrix() * phi_inv);
}

}  // namespace plab
