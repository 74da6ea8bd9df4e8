#include <gtest/gtest.h>

#include <cmath>

#include "conga/graphs.hpp"
#include "conga/linalg.hpp"
#include "support.hpp"

namespace conga {
namespace {

std::pair<double, double> block_counts(const SbmGraph& g, bool intra) {
  const auto& lab = g.membership.labels;
  double edges = 0.0;
  double pairs = 0.0;
  const Eigen::Index n = g.graph.node_count();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if ((lab[i] == lab[j]) != intra) continue;
      pairs += 1.0;
      edges += g.graph.adjacency()(i, j);
    }
  }
  return {edges, pairs};
}

TEST(Graph, RejectsMalformedAdjacency) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
  a(0, 1) = 1.0;
  EXPECT_THROW(Graph{a}, std::invalid_argument);
  a(1, 0) = 1.0;
  a(2, 2) = 1.0;
  EXPECT_THROW(Graph{a}, std::invalid_argument);
  EXPECT_THROW(Graph::from_edges(3, {{0, 0}}), std::invalid_argument);
  EXPECT_THROW(Graph::from_edges(3, {{0, 5}}), std::invalid_argument);
}

TEST(Graph, EdgesAreSortedAndUnique) {
  const Graph g = Graph::from_edges(4, {{2, 1}, {0, 3}, {1, 2}});
  const auto e = g.edges();
  ASSERT_EQ(e.size(), 2u);
  EXPECT_EQ(e[0], std::make_pair(Eigen::Index{0}, Eigen::Index{3}));
  EXPECT_EQ(e[1], std::make_pair(Eigen::Index{1}, Eigen::Index{2}));
}

TEST(Sbm, PaperGraphOneShape) {
  const SbmGraph g = sbm_generate({25, 25, 25, 25}, 0.95, 0.2, 1);
  EXPECT_EQ(g.graph.node_count(), 100);
  EXPECT_EQ(g.membership.k, 4);
  EXPECT_EQ(g.membership.sizes(), (std::vector<std::size_t>{25, 25, 25, 25}));
}

TEST(Sbm, DisjointCliques) {
  const std::vector<std::size_t> sizes{3, 5, 4};
  const SbmGraph g = sbm_generate(sizes, 1.0, 0.0, 9);
  std::size_t expected = 0;
  for (std::size_t s : sizes) expected += s * (s - 1) / 2;
  EXPECT_EQ(g.graph.edge_count(), expected);
  EXPECT_EQ(block_counts(g, false).first, 0.0);
}

TEST(Sbm, EdgeDensitiesMatchBinomial) {
  double intra_e = 0, intra_p = 0, inter_e = 0, inter_p = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const SbmGraph g = sbm_generate({40, 30, 25, 55}, 0.95, 0.2, seed);
    const auto [ie, ip] = block_counts(g, true);
    const auto [oe, op] = block_counts(g, false);
    intra_e += ie;
    intra_p += ip;
    inter_e += oe;
    inter_p += op;
  }
  const double se_in = std::sqrt(0.95 * 0.05 / intra_p);
  const double se_out = std::sqrt(0.2 * 0.8 / inter_p);
  EXPECT_NEAR(intra_e / intra_p, 0.95, 3.0 * se_in);
  EXPECT_NEAR(inter_e / inter_p, 0.2, 3.0 * se_out);
}

TEST(Sbm, SymmetricZeroDiagonalAndDeterministic) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SbmGraph a = sbm_generate({6, 7, 8}, 0.7, 0.3, seed);
    const SbmGraph b = sbm_generate({6, 7, 8}, 0.7, 0.3, seed);
    EXPECT_EQ(a.graph.adjacency(), a.graph.adjacency().transpose());
    EXPECT_TRUE(a.graph.adjacency().diagonal().isZero(0.0));
    EXPECT_EQ(a.graph.adjacency(), b.graph.adjacency());
  }
  EXPECT_NE(sbm_generate({6, 7, 8}, 0.7, 0.3, 1).graph.adjacency(),
            sbm_generate({6, 7, 8}, 0.7, 0.3, 2).graph.adjacency());
}

TEST(Sbm, RejectsBadArguments) {
  EXPECT_THROW(sbm_generate({}, 0.5, 0.1, 1), std::invalid_argument);
  EXPECT_THROW(sbm_generate({3, 0}, 0.5, 0.1, 1), std::invalid_argument);
  EXPECT_THROW(sbm_generate({3, 3}, 0.1, 0.5, 1), std::invalid_argument);
}

TEST(NormalizedLaplacian, SingleEdge) {
  Eigen::Matrix2d expected;
  expected << 1, -1, -1, 1;
  EXPECT_LE((normalized_laplacian(test::single_edge()) - expected).norm(), 1e-15);
}

TEST(NormalizedLaplacian, EdgelessIsIdentity) {
  const Graph g(Eigen::MatrixXd::Zero(4, 4));
  EXPECT_EQ(normalized_laplacian(g), Eigen::MatrixXd::Identity(4, 4));
}

TEST(NormalizedLaplacian, SpectrumOfRandomSbm) {
  const SbmGraph g = sbm_generate({10, 10, 10}, 0.8, 0.1, 4);
  const Eigen::MatrixXd l = normalized_laplacian(g.graph);
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(l).eigenvalues();
  EXPECT_NEAR(ev.minCoeff(), 0.0, 1e-10);
  EXPECT_LE(ev.maxCoeff(), 2.0 + 1e-10);
  EXPECT_GE(ev.minCoeff(), -1e-10);
}

TEST(NormalizedLaplacian, AnnihilatesSqrtDegree) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SbmGraph g = sbm_generate({8, 9}, 0.9, 0.3, seed);
    const Eigen::VectorXd d = g.graph.degrees();
    ASSERT_GT(d.minCoeff(), 0.0);
    EXPECT_LE((normalized_laplacian(g.graph) * d.cwiseSqrt()).norm(), 1e-10);
  }
}

TEST(SmoothingOperator, ZeroAlphaIsIdentity) {
  const SmoothingOperator s = smoothing_operator(normalized_laplacian(test::path_graph(5)), 0.0);
  EXPECT_EQ(s.matrix(), Eigen::MatrixXd::Identity(5, 5));
  EXPECT_EQ(s.ell(), 1.0);
}

TEST(SmoothingOperator, SingleEdge) {
  const SmoothingOperator s = smoothing_operator(normalized_laplacian(test::single_edge()), 1.0);
  Eigen::Matrix2d expected;
  expected << 2, -1, -1, 2;
  EXPECT_LE((s.matrix() - expected).norm(), 1e-15);
  EXPECT_NEAR(s.ell(), 3.0, 1e-12);
}

TEST(SmoothingOperator, CompleteGraphEll) {
  const Eigen::MatrixXd l = normalized_laplacian(test::complete_graph(5));
  const SmoothingOperator s = smoothing_operator(l, 0.5);
  const double oracle =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Eigen::MatrixXd::Identity(5, 5) + 0.5 * l)
          .eigenvalues()
          .maxCoeff();
  EXPECT_NEAR(s.ell(), oracle, 1e-8);
  EXPECT_NEAR(s.ell(), 1.0 + 0.5 * 5.0 / 4.0, 1e-12);
}

TEST(SmoothingOperator, DominatesIdentity) {
  const SbmGraph g = sbm_generate({10, 12}, 0.6, 0.2, 3);
  const SmoothingOperator s = smoothing_operator(normalized_laplacian(g.graph), 2.5);
  EXPECT_GE(s.ell(), 1.0);
  EXPECT_LE(s.ell(), 1.0 + 2.0 * 2.5 + 1e-12);
  for (int i = 0; i < 1000; ++i) {
    const Eigen::VectorXd x = test::gaussian(22, 1, 5000 + i);
    EXPECT_GE(x.dot(s.matrix() * x), x.squaredNorm() - 1e-12);
  }
  Eigen::VectorXd x = test::gaussian(22, 1, 1);
  EXPECT_LE((s.apply(x) - s.matrix() * x).norm(), 1e-12);
  const Eigen::MatrixXd r = s.sqrt();
  EXPECT_LE((r * r - s.matrix()).norm(), 1e-10);
  EXPECT_LE((s.inv_sqrt() * r - Eigen::MatrixXd::Identity(22, 22)).norm(), 1e-10);
}

TEST(SmoothingOperator, RejectsNegativeAlpha) {
  EXPECT_THROW(smoothing_operator(normalized_laplacian(test::single_edge()), -0.1),
               std::invalid_argument);
}

TEST(SmoothingOperator, RejectsIndefiniteLaplacian) {
  Eigen::Matrix2d bad;
  bad << -1, 0, 0, 1;
  EXPECT_THROW(SmoothingOperator(bad, 1.0), std::invalid_argument);
}

}  // namespace
}  // namespace conga
