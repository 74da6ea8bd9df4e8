#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "conga/graphs.hpp"
#include "conga/linalg.hpp"
#include "support.hpp"

namespace conga {
namespace {

using test::gaussian;

TEST(SoftThreshold, ShrinksTowardZero) {
  Vector x(3);
  x << 1.2, -0.3, 0.0;
  const Vector y = soft_threshold(x, 0.5);
  EXPECT_NEAR(y(0), 0.7, 1e-15);
  EXPECT_EQ(y(1), 0.0);
  EXPECT_EQ(y(2), 0.0);
}

TEST(SoftThreshold, ZeroThresholdIsIdentity) {
  const Vector x = gaussian(10, 1, 3);
  EXPECT_EQ(soft_threshold(x, 0.0), x);
}

TEST(SoftThreshold, MatchesScalarMinimizer) {
  // Brute force the scalar problem argmin_z 1/2 (z - x)^2 + t |z| on a grid.
  const Vector x = gaussian(10, 1, 11);
  const double t = 0.25;
  const Vector y = soft_threshold(x, t);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    double best = 0.0;
    double best_val = 0.5 * x(i) * x(i);
    for (int s = -40000; s <= 40000; ++s) {
      const double z = s * 1e-4;
      const double val = 0.5 * (z - x(i)) * (z - x(i)) + t * std::abs(z);
      if (val < best_val) {
        best_val = val;
        best = z;
      }
    }
    EXPECT_NEAR(y(i), best, 1e-4) << "coordinate " << i;
  }
}

TEST(SoftThreshold, RejectsNonFinite) {
  Vector x(2);
  x << 1.0, std::nan("");
  EXPECT_THROW(soft_threshold(x, 0.1), std::domain_error);
  EXPECT_THROW(soft_threshold(Vector::Ones(2), -1.0), std::domain_error);
}

TEST(SoftThreshold, NeverGrowsOrFlipsSign) {
  for (int trial = 0; trial < 50; ++trial) {
    const Vector x = gaussian(20, 1, 100 + trial);
    const double t = 0.05 * trial;
    const Vector y = soft_threshold(x, t);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      EXPECT_LE(std::abs(y(i)), std::abs(x(i)));
      EXPECT_GE(y(i) * x(i), 0.0);
    }
  }
}

TEST(SNorm, IdentityGivesEuclidean) {
  const Vector u = gaussian(7, 1, 5);
  EXPECT_NEAR(s_norm(u, SmoothingOperator::identity(7)), u.norm(), 1e-14);
}

TEST(SNorm, ZeroVector) {
  const SmoothingOperator s(normalized_laplacian(test::path_graph(4)), 2.0);
  EXPECT_EQ(s_norm(Vector::Zero(4), s), 0.0);
}

TEST(SNorm, SingleEdgeConstantVector) {
  // L = [[1,-1],[-1,1]], S = I + L = [[2,-1],[-1,2]], u'Su = 2 for u = (1,1).
  const SmoothingOperator s(normalized_laplacian(test::single_edge()), 1.0);
  Vector u(2);
  u << 1.0, 1.0;
  EXPECT_NEAR(s_norm(u, s), std::sqrt(2.0), 1e-15);
}

TEST(SNorm, RejectsDimensionMismatch) {
  EXPECT_THROW(s_norm(Vector::Ones(3), SmoothingOperator::identity(4)), std::invalid_argument);
}

TEST(ProjectSBall, InsideIsUnchanged) {
  Vector u(2);
  u << 0.3, 0.4;
  EXPECT_EQ(project_s_ball(u, SmoothingOperator::identity(2)), u);
}

TEST(ProjectSBall, EuclideanRescale) {
  Vector u(2);
  u << 0.0, 4.0;
  const Vector p = project_s_ball(u, SmoothingOperator::identity(2));
  EXPECT_NEAR(p(1), 1.0, 1e-15);
  EXPECT_EQ(p(0), 0.0);
}

TEST(ProjectSBall, RandomVectorsLandOnOrInside) {
  const SmoothingOperator s(normalized_laplacian(test::path_graph(12)), 0.7);
  for (int trial = 0; trial < 40; ++trial) {
    const Vector u = gaussian(12, 1, 200 + trial) * (0.1 * trial);
    const double before = s_norm(u, s);
    const Vector p = project_s_ball(u, s);
    const double after = std::sqrt(p.dot(s.matrix() * p));
    if (before <= 1.0) {
      EXPECT_EQ(p, u);
    } else {
      EXPECT_NEAR(after, 1.0, 1e-12);
    }
    EXPECT_EQ(project_s_ball(p, s), p) << "projection must be idempotent";
  }
}

TEST(SBall, RoughnessBound) {
  // u'Su <= 1 implies u'Lu <= (1 - ||u||^2) / alpha.
  const double alpha = 1.5;
  const SmoothingOperator s(normalized_laplacian(test::complete_graph(6)), alpha);
  for (int trial = 0; trial < 30; ++trial) {
    const Vector p = project_s_ball(gaussian(6, 1, 300 + trial) * 3.0, s);
    const double rough = p.dot(s.laplacian() * p);
    EXPECT_LE(rough, (1.0 - p.squaredNorm()) / alpha + 1e-12);
  }
}

TEST(LeadingSingularPair, Diagonal) {
  Matrix c = Matrix::Zero(2, 2);
  c(0, 0) = 3.0;
  c(1, 1) = 1.0;
  const SingularTriple t = leading_singular_pair(c);
  EXPECT_NEAR(t.value, 3.0, 1e-10);
  EXPECT_NEAR(t.left(0), 1.0, 1e-8);
  EXPECT_NEAR(t.right(0), 1.0, 1e-8);
}

TEST(LeadingSingularPair, RankOne) {
  Vector a(3), b(4);
  a << 1.0, -2.0, 2.0;
  b << 0.0, 3.0, 4.0, 0.0;
  const SingularTriple t = leading_singular_pair(a * b.transpose());
  EXPECT_NEAR(t.value, 15.0, 1e-12);
  // Largest-|entry| of the left vector is positive: a has ties at -2 and 2,
  // the lower index wins, so left = -a / ||a||.
  EXPECT_NEAR((t.left + a / 3.0).norm(), 0.0, 1e-10);
  EXPECT_NEAR((t.right + b / 5.0).norm(), 0.0, 1e-10);
}

TEST(LeadingSingularPair, MatchesEigenOfGram) {
  const Matrix c = gaussian(5, 6, 17);
  const SingularTriple t = leading_singular_pair(c);
  Eigen::SelfAdjointEigenSolver<Matrix> es(c.transpose() * c);
  const double sigma = std::sqrt(es.eigenvalues()(5));
  Vector v = es.eigenvectors().col(5);
  Vector u = c * v / sigma;
  apply_sign_convention(u, v);
  EXPECT_NEAR(t.value, sigma, 1e-8 * sigma);
  EXPECT_NEAR((t.left - u).norm(), 0.0, 1e-7);
  EXPECT_NEAR((t.right - v).norm(), 0.0, 1e-7);
  EXPECT_LE((c * t.right - t.value * t.left).norm(), 1e-10 * t.value);
}

TEST(LeadingSingularPair, UpperBoundsRandomPairs) {
  std::mt19937_64 gen(7);
  std::normal_distribution<double> nd;
  for (int m = 0; m < 5; ++m) {
    const Matrix c = gaussian(5, 5, 40 + m);
    const double sigma = leading_singular_pair(c).value;
    Eigen::JacobiSVD<Matrix> svd(c);
    EXPECT_NEAR(sigma, svd.singularValues()(0), 1e-8 * sigma);
    double best = 0.0;
    for (int i = 0; i < 10000; ++i) {
      Vector u(5), v(5);
      for (int j = 0; j < 5; ++j) {
        u(j) = nd(gen);
        v(j) = nd(gen);
      }
      best = std::max(best, u.normalized().dot(c * v.normalized()));
    }
    EXPECT_LE(best, sigma * (1.0 + 1e-12));
    EXPECT_GT(best, 0.5 * sigma);
  }
}

TEST(LeadingSingularPair, RejectsZero) {
  EXPECT_THROW(leading_singular_pair(Matrix::Zero(3, 3)), std::invalid_argument);
}

TEST(LeadingSingularPair, IterationCapCarriesIterate) {
  // Two equal leading singular values: the residual test still passes for
  // any vector in the span, so force the cap with a tiny budget instead.
  const Matrix c = gaussian(30, 30, 5);
  PowerOptions opts;
  opts.max_iter = 2;
  try {
    leading_singular_pair(c, opts);
    FAIL() << "expected SingularPairConvergenceError";
  } catch (const SingularPairConvergenceError& e) {
    EXPECT_EQ(e.iterations(), 2);
    EXPECT_GT(e.residual(), 0.0);
    EXPECT_EQ(e.last().left.size(), 30);
  }
}

TEST(LeadingSingularTriples, MatchDenseSvd) {
  const Matrix c = gaussian(20, 15, 23);
  const auto triples = leading_singular_triples(c, 4);
  Eigen::JacobiSVD<Matrix> svd(c);
  ASSERT_EQ(triples.size(), 4u);
  for (int k = 0; k < 4; ++k) {
    EXPECT_NEAR(triples[k].value, svd.singularValues()(k), 1e-8 * svd.singularValues()(0));
  }
}

TEST(LambdaMax, IdentityOperator) {
  EXPECT_NEAR(lambda_max(SmoothingOperator::identity(5)), 1.0, 1e-12);
}

TEST(LambdaMax, SingleEdge) {
  const SmoothingOperator s(normalized_laplacian(test::single_edge()), 0.5);
  EXPECT_NEAR(lambda_max(s), 2.0, 1e-9);
  EXPECT_NEAR(s.ell(), 2.0, 1e-12);
}

TEST(LambdaMax, CompleteGraphMatchesDenseEigen) {
  const Eigen::MatrixXd l = normalized_laplacian(test::complete_graph(4));
  const double oracle = 1.0 + Eigen::SelfAdjointEigenSolver<Matrix>(l).eigenvalues().maxCoeff();
  const SmoothingOperator s(l, 1.0);
  EXPECT_NEAR(lambda_max(s), oracle, 1e-9);
  EXPECT_NEAR(oracle, 1.0 + 4.0 / 3.0, 1e-12);
  EXPECT_GE(lambda_max(s), 1.0);
  EXPECT_LE(lambda_max(s), 3.0);
}

TEST(ProjectConvStiefel, FeasibleUnchanged) {
  const SmoothingOperator s(normalized_laplacian(test::path_graph(6)), 0.3);
  const Matrix x = gaussian(6, 2, 1) * 0.05;
  EXPECT_EQ(project_conv_stiefel(x, s), x);
}

TEST(ProjectConvStiefel, ClipsSpectrum) {
  Matrix x = Matrix::Zero(4, 2);
  x(0, 0) = 2.0;
  x(1, 1) = 0.5;
  const Matrix p = project_conv_stiefel(x, SmoothingOperator::identity(4));
  Eigen::JacobiSVD<Matrix> svd(p);
  EXPECT_NEAR(svd.singularValues()(0), 1.0, 1e-12);
  EXPECT_NEAR(svd.singularValues()(1), 0.5, 1e-12);
}

TEST(ProjectConvStiefel, RandomLandsOnBoundary) {
  const SmoothingOperator s(normalized_laplacian(test::path_graph(6)), 0.3);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix x = gaussian(6, 2, 60 + trial) * 3.0;
    const Matrix p = project_conv_stiefel(x, s);
    const Matrix g = p.transpose() * s.matrix() * p;
    EXPECT_NEAR(Eigen::SelfAdjointEigenSolver<Matrix>(g).eigenvalues().maxCoeff(), 1.0, 1e-8);

    const Matrix root = test::dense_sqrt(s.matrix());
    Eigen::JacobiSVD<Matrix> before(root * x);
    Eigen::JacobiSVD<Matrix> after(root * p);
    for (int k = 0; k < 2; ++k) {
      EXPECT_LE(after.singularValues()(k), before.singularValues()(k) + 1e-12);
    }
    EXPECT_LE((project_conv_stiefel(p, s) - p).norm(), 1e-12);
  }
}

TEST(GeneralizedProcrustes, ClassicalCase) {
  const Matrix b = gaussian(5, 3, 8);
  Eigen::JacobiSVD<Matrix> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Matrix oracle = svd.matrixU() * svd.matrixV().transpose();
  const ProcrustesResult r = generalized_procrustes(b, SmoothingOperator::identity(5));
  EXPECT_LE((r.u - oracle).norm(), 1e-10);
  EXPECT_FALSE(r.rank_deficient);
}

TEST(GeneralizedProcrustes, FixedPoint) {
  const SmoothingOperator s(normalized_laplacian(test::path_graph(7)), 0.8);
  const Matrix q = Eigen::HouseholderQR<Matrix>(gaussian(7, 3, 9)).householderQ() *
                   Matrix::Identity(7, 3);
  const Matrix root = test::dense_sqrt(s.matrix());
  const Matrix w = root.inverse() * q;
  const ProcrustesResult r = generalized_procrustes(s.matrix() * w, s);
  EXPECT_LE((r.u - w).norm(), 1e-10);
}

TEST(GeneralizedProcrustes, BeatsRandomFeasiblePoints) {
  const SmoothingOperator s(normalized_laplacian(test::path_graph(8)), 0.4);
  const Matrix b = gaussian(8, 3, 12);
  const ProcrustesResult r = generalized_procrustes(b, s);
  EXPECT_LE((r.u.transpose() * s.matrix() * r.u - Matrix::Identity(3, 3)).norm(), 1e-10);
  const double best = (r.u.transpose() * b).trace();
  const Matrix inv_root = test::dense_sqrt(s.matrix()).inverse();
  for (int i = 0; i < 1000; ++i) {
    const Matrix q = Eigen::HouseholderQR<Matrix>(gaussian(8, 3, 1000 + i)).householderQ() *
                     Matrix::Identity(8, 3);
    const Matrix w = inv_root * q;
    EXPECT_GE(best, (w.transpose() * b).trace() - 1e-12);
  }
}

TEST(GeneralizedProcrustes, FlagsRankDeficiency) {
  Matrix b = Matrix::Zero(5, 3);
  b.col(0) = gaussian(5, 1, 2);
  b.col(1) = 2.0 * b.col(0);
  const ProcrustesResult r = generalized_procrustes(b, SmoothingOperator::identity(5));
  EXPECT_TRUE(r.rank_deficient);
  EXPECT_EQ(r.rank, 1);
  EXPECT_LE((r.u.transpose() * r.u - Matrix::Identity(3, 3)).norm(), 1e-10);
}

}  // namespace
}  // namespace conga
