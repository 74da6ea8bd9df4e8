#pragma once

#include <random>

#include <Eigen/Dense>

#include "conga/graphs.hpp"
#include "conga/smoothing.hpp"

namespace conga::test {

inline Eigen::MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = nd(gen);
  }
  return m;
}

inline Graph complete_graph(Eigen::Index n) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Ones(n, n);
  a.diagonal().setZero();
  return Graph(a);
}

inline Graph single_edge() { return Graph::from_edges(2, {{0, 1}}); }

inline Graph path_graph(Eigen::Index n) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> e;
  for (Eigen::Index i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph::from_edges(n, e);
}

/// Dense oracle for S^{1/2}.
inline Eigen::MatrixXd dense_sqrt(const Eigen::MatrixXd& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() *
         es.eigenvectors().transpose();
}

}  // namespace conga::test

namespace conga::test {

/// Largest principal angle between span(a) and span(b), via the sine
/// formulation which stays accurate for tiny angles.
inline double max_principal_angle(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const Eigen::MatrixXd qa = Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ() *
                             Eigen::MatrixXd::Identity(a.rows(), a.cols());
  const Eigen::MatrixXd qb = Eigen::HouseholderQR<Eigen::MatrixXd>(b).householderQ() *
                             Eigen::MatrixXd::Identity(b.rows(), b.cols());
  const Eigen::MatrixXd resid = qa - qb * (qb.transpose() * qa);
  const double s = Eigen::JacobiSVD<Eigen::MatrixXd>(resid).singularValues()(0);
  return std::asin(std::min(1.0, s));
}

/// A small connected random graph for smoothing tests.
inline Graph random_graph(Eigen::Index n, double p, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::bernoulli_distribution coin(p);
  std::vector<std::pair<Eigen::Index, Eigen::Index>> e;
  for (Eigen::Index i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 2; j < n; ++j) {
      if (coin(gen)) e.emplace_back(i, j);
    }
  }
  return Graph::from_edges(n, e);
}

}  // namespace conga::test
