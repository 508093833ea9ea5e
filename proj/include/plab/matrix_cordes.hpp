#pragma once

// Cordes-type matrix inequalities: checking the Cordes condition of a
// symmetric matrix relative to an SPD basis, synthesizing the constants
// (c, C), and evaluating the gaps of the resulting inequalities.

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <random>

namespace plab {

/// Dense symmetric n x n real matrix, n >= 2. Symmetry is exact.
class SymMatrix {
 public:
  /// Zero matrix of dimension n.
  explicit SymMatrix(int n);
  /// Throws InvalidInput unless m is square, n >= 2 and exactly symmetric.
  explicit SymMatrix(Eigen::MatrixXd m);

  static SymMatrix identity(int n);
  static SymMatrix diagonal(const Eigen::VectorXd& d);
  /// (m + m^T) / 2.
  static SymMatrix symmetrized(const Eigen::MatrixXd& m);

  int dim() const { return static_cast<int>(m_.rows()); }
  double operator()(int i, int j) const { return m_(i, j); }
  const Eigen::MatrixXd& matrix() const { return m_; }

  double trace() const { return m_.trace(); }
  double squared_norm() const { return m_.squaredNorm(); }
  /// Hilbert-Schmidt norm.
  double norm() const { return m_.norm(); }

  SymMatrix operator+(const SymMatrix& o) const;
  SymMatrix operator-(const SymMatrix& o) const;
  SymMatrix operator*(double s) const;

 private:
  Eigen::MatrixXd m_;
};

/// Hilbert-Schmidt inner product <M, N> = sum_ij M_ij N_ij.
double hs_inner(const Eigen::MatrixXd& m, const Eigen::MatrixXd& n);
/// <N, N^T> = tr(N^2).
double transpose_inner(const Eigen::MatrixXd& n);

struct Spectrum {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns
};
Spectrum spectrum(const SymMatrix& m);

/// Throws InvalidInput unless the smallest eigenvalue exceeds 1e-12 * largest.
void require_spd(const SymMatrix& b);

/// Witness that a matrix satisfies the Cordes condition with parameter delta
/// relative to `basis`, together with the inequality constants (c, C).
struct CordesCertificate {
  double delta;
  double c;
  double C;
  SymMatrix basis;
};

struct CordesConstants {
  double c;
  double C;
};

/// Largest delta with (n-1+delta)<B^-1 A,(B^-1 A)^T> <= (tr B^-1 A)^2;
/// nullopt when that value is not positive.
std::optional<double> cordes_delta(const SymMatrix& a, const SymMatrix& b);

struct ParallelSplit {
  SymMatrix parallel;  // (tr A / n) I
  SymMatrix perp;      // A - parallel
};
ParallelSplit split_parallel_perp(const SymMatrix& a);

/// C = n / delta makes det_Q >= 1; c = 1 / (2 - n + C) bounds the smallest
/// eigenvalue of Q through det/trace. Not sharp.
CordesConstants cordes_constants(int n, double delta);

CordesCertificate make_certificate(int n, double delta);
CordesCertificate make_certificate(double delta, const SymMatrix& basis);

/// Coefficients of the 2x2 quadratic form Q in (m_par, m_perp) whose
/// positivity drives the basic inequality. Requires A_par != 0 or A_perp != 0.
Eigen::Matrix2d cordes_quadratic_form(const SymMatrix& a, double big_c);

/// |M|^2 - (tr M)^2 + (C/|A|^2)<A,M>^2 - c|M|^2. Nonnegative (up to rounding)
/// whenever A satisfies the Cordes condition w.r.t. I with cert.delta.
double basic_cordes_gap(const SymMatrix& a, const SymMatrix& m, const CordesCertificate& cert);

/// Returns Phi with Phi^T B Phi = I, Phi = Q Lambda^{-1/2}.
Eigen::MatrixXd congruence_reduce(const SymMatrix& b);

/// <BM,(BM)^T> - (tr BM)^2 + C<A,M>^2 / <B^-1 A,(B^-1 A)^T> - c<BM,(BM)^T>,
/// with B = cert.basis.
double general_cordes_gap(const SymMatrix& a, const SymMatrix& m, const CordesCertificate& cert);

struct ProductBound {
  double lhs;  // |BM|^2
  double rhs;  // (lambda_max / lambda_min)^2 <BM,(BM)^T>
};
ProductBound transpose_product_bound(const SymMatrix& b, const SymMatrix& m);

// Sampling laws used by the randomized sweeps.

/// Entries i.i.d. standard normal, symmetrized.
SymMatrix random_symmetric(int n, std::mt19937_64& rng);

/// A random symmetric matrix shifted along the identity until it satisfies the
/// Cordes condition w.r.t. I with at least `delta`. For delta == 1 the only
/// admissible matrices are nonzero multiples of I, which is what is returned.
SymMatrix random_admissible(int n, double delta, std::mt19937_64& rng);

/// SPD matrix with random eigenbasis and eigenvalues log-uniform in [0.1, 10].
SymMatrix random_spd(int n, std::mt19937_64& rng);

/// Random A admissible w.r.t. the SPD matrix b with at least `delta`:
/// A = Phi^{-T} A0 Phi^{-1} for A0 admissible w.r.t. I.
SymMatrix random_admissible_wrt(const SymMatrix& b, double delta, std::mt19937_64& rng);

}  // namespace plab
