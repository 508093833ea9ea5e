#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "plab/errors.hpp"
#include "plab/matrix_cordes.hpp"

using namespace plab;

namespace {

// Cordes parameter of N = B^{-1} A computed without the library:
// delta = (tr N)^2 / tr(N^2) - (n - 1).
double delta_oracle(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const Eigen::MatrixXd n = b.inverse() * a;
  const double t = n.trace();
  return t * t / (n * n).trace() - (n.rows() - 1);
}

}  // namespace

TEST(SymMatrix, RejectsBadInput) {
  EXPECT_THROW(SymMatrix(1), InvalidInput);
  Eigen::MatrixXd m(2, 2);
  m << 1, 2, 3, 4;
  EXPECT_THROW(SymMatrix{m}, InvalidInput);
  EXPECT_THROW(SymMatrix{Eigen::MatrixXd(2, 3)}, InvalidInput);
  EXPECT_NO_THROW(SymMatrix::symmetrized(m));
  EXPECT_DOUBLE_EQ(SymMatrix::symmetrized(m)(0, 1), 2.5);
}

TEST(SymMatrix, NormsAndInnerProducts) {
  Eigen::MatrixXd m(2, 2);
  m << 1, 2, 2, -3;
  const SymMatrix s{m};
  EXPECT_DOUBLE_EQ(s.trace(), -2.0);
  EXPECT_DOUBLE_EQ(s.squared_norm(), 18.0);
  Eigen::MatrixXd n(2, 2);
  n << 0, 1, 0, 0;
  EXPECT_DOUBLE_EQ(hs_inner(n, n), 1.0);
  EXPECT_DOUBLE_EQ(transpose_inner(n), 0.0);  // tr(N^2) of a nilpotent matrix
}

TEST(CordesConstants, ClosedForm) {
  const CordesConstants k = cordes_constants(2, 0.5);
  EXPECT_DOUBLE_EQ(k.C, 4.0);
  EXPECT_DOUBLE_EQ(k.c, 0.25);
  const CordesConstants one = cordes_constants(5, 1.0);
  EXPECT_DOUBLE_EQ(one.C, 5.0);
  EXPECT_DOUBLE_EQ(one.c, 0.5);
  EXPECT_THROW(cordes_constants(3, 0.0), InvalidInput);
  EXPECT_THROW(cordes_constants(3, 1.5), InvalidInput);
  EXPECT_THROW(cordes_constants(1, 0.5), InvalidInput);
}

TEST(CordesDelta, MatchesDirectFormula) {
  std::mt19937_64 rng(11);
  for (int n = 2; n <= 5; ++n) {
    for (int t = 0; t < 50; ++t) {
      const SymMatrix b = random_spd(n, rng);
      const SymMatrix a = random_admissible_wrt(b, 0.3, rng);
      const auto d = cordes_delta(a, b);
      ASSERT_TRUE(d.has_value());
      EXPECT_NEAR(*d, delta_oracle(a.matrix(), b.matrix()), 1e-8);
      EXPECT_GE(*d, 0.3 - 1e-9);
    }
  }
  EXPECT_NEAR(*cordes_delta(SymMatrix::identity(3), SymMatrix::identity(3)), 1.0, 1e-14);
}

TEST(CordesDelta, NoPositiveDeltaForIndefiniteMatrix) {
  Eigen::VectorXd d(3);
  d << 1.0, -1.0, 0.0;
  EXPECT_FALSE(cordes_delta(SymMatrix::diagonal(d), SymMatrix::identity(3)).has_value());
}

TEST(ParallelSplit, Reassembles) {
  std::mt19937_64 rng(3);
  const SymMatrix a = random_symmetric(4, rng);
  const ParallelSplit s = split_parallel_perp(a);
  EXPECT_NEAR((s.parallel + s.perp - a).norm(), 0.0, 1e-14);
  EXPECT_NEAR(s.perp.trace(), 0.0, 1e-13);
  EXPECT_NEAR(hs_inner(s.parallel.matrix(), s.perp.matrix()), 0.0, 1e-12);
}

TEST(BasicGap, IdentityCoefficientHasClosedForm) {
  // A = aI, delta = 1: C <A,M>^2 / |A|^2 = (tr M)^2, so the gap is (1 - c)|M|^2.
  std::mt19937_64 rng(5);
  for (int n = 2; n <= 6; ++n) {
    const CordesCertificate cert = make_certificate(n, 1.0);
    for (int t = 0; t < 100; ++t) {
      const SymMatrix m = random_symmetric(n, rng);
      const double gap = basic_cordes_gap(SymMatrix::identity(n) * 2.5, m, cert);
      EXPECT_NEAR(gap, 0.5 * m.squared_norm(), 1e-12 * (1 + m.squared_norm()));
    }
  }
}

TEST(BasicGap, NonnegativeOnRandomAdmissiblePairs) {
  for (int n = 2; n <= 6; ++n) {
    for (double delta : {0.25, 0.5, 1.0}) {
      std::mt19937_64 rng(100 + n);
      const CordesCertificate cert = make_certificate(n, delta);
      for (int t = 0; t < 2000; ++t) {
        const SymMatrix a = random_admissible(n, delta, rng);
        const SymMatrix m = random_symmetric(n, rng);
        ASSERT_GE(basic_cordes_gap(a, m, cert), -1e-9 * (1 + m.squared_norm())) << "n=" << n << " delta=" << delta;
      }
    }
  }
}

TEST(BasicGap, NegativeOutsideTheCondition) {
  // A = diag(1, 0) has delta = 0, so the condition fails for every delta > 0.
  Eigen::VectorXd d(2);
  d << 1.0, 0.0;
  const SymMatrix a = SymMatrix::diagonal(d);
  Eigen::VectorXd md(2);
  md << 0.0, 1.0;
  // M orthogonal to A with |M|^2 = (tr M)^2: gap = -c|M|^2 < 0.
  EXPECT_LT(basic_cordes_gap(a, SymMatrix::diagonal(md), make_certificate(2, 0.5)), 0.0);
}

TEST(RandomAdmissible, DeltaOneGivesMultiplesOfIdentity) {
  std::mt19937_64 rng(9);
  const SymMatrix a = random_admissible(4, 1.0, rng);
  const double s = a.trace() / 4.0;
  EXPECT_NEAR((a - SymMatrix::identity(4) * s).norm(), 0.0, 1e-12 * std::abs(s));
}

TEST(Congruence, ReducesBasisToIdentity) {
  std::mt19937_64 rng(21);
  for (int n = 2; n <= 5; ++n) {
    const SymMatrix b = random_spd(n, rng);
    const Eigen::MatrixXd phi = congruence_reduce(b);
    EXPECT_NEAR((phi.transpose() * b.matrix() * phi - Eigen::MatrixXd::Identity(n, n)).norm(), 0.0, 1e-11);
  }
  Eigen::VectorXd d(2);
  d << 1.0, -1.0;
  EXPECT_THROW(congruence_reduce(SymMatrix::diagonal(d)), InvalidInput);
}

TEST(GeneralGap, ReducesToBasicGapForIdentityBasis) {
  std::mt19937_64 rng(17);
  for (int n = 2; n <= 4; ++n) {
    const CordesCertificate cert = make_certificate(0.5, SymMatrix::identity(n));
    const CordesCertificate plain = make_certificate(n, 0.5);
    for (int t = 0; t < 50; ++t) {
      const SymMatrix a = random_admissible(n, 0.5, rng);
      const SymMatrix m = random_symmetric(n, rng);
      EXPECT_NEAR(general_cordes_gap(a, m, cert), basic_cordes_gap(a, m, plain), 1e-10 * (1 + m.squared_norm()));
    }
  }
}

TEST(GeneralGap, NonnegativeOnRandomTriples) {
  std::mt19937_64 rng(23);
  for (int n = 2; n <= 4; ++n) {
    for (int t = 0; t < 3000; ++t) {
      const SymMatrix b = random_spd(n, rng);
      const SymMatrix a = random_admissible_wrt(b, 0.5, rng);
      const SymMatrix m = random_symmetric(n, rng);
      const double scale = 1 + (b.matrix() * m.matrix()).squaredNorm();
      ASSERT_GE(general_cordes_gap(a, m, make_certificate(0.5, b)), -1e-9 * scale);
    }
  }
}

TEST(TransposeProduct, EqualityForIdentityBasisAndBound) {
  std::mt19937_64 rng(29);
  const SymMatrix m = random_symmetric(3, rng);
  const ProductBound eq = transpose_product_bound(SymMatrix::identity(3), m);
  EXPECT_NEAR(eq.lhs, eq.rhs, 1e-12 * eq.lhs);
  for (int t = 0; t < 2000; ++t) {
    const SymMatrix b = random_spd(3, rng);
    const SymMatrix mm = random_symmetric(3, rng);
    const ProductBound pb = transpose_product_bound(b, mm);
    ASSERT_LE(pb.lhs, pb.rhs * (1 + 1e-12) + 1e-12);
  }
}

TEST(Sampling, DeterministicForFixedSeed) {
  std::mt19937_64 r1(77), r2(77);
  EXPECT_EQ(random_admissible(3, 0.5, r1).matrix(), random_admissible(3, 0.5, r2).matrix());
}
