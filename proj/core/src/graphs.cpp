#include "conga/graphs.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace conga {

Graph::Graph(Eigen::MatrixXd adjacency) : adjacency_(std::move(adjacency)) {
  const Eigen::Index n = adjacency_.rows();
  if (adjacency_.cols() != n) throw std::invalid_argument("adjacency must be square");
  for (Eigen::Index j = 0; j < n; ++j) {
    if (adjacency_(j, j) != 0.0) throw std::invalid_argument("adjacency has a nonzero diagonal");
    for (Eigen::Index i = 0; i < n; ++i) {
      const double a = adjacency_(i, j);
      if (a != 0.0 && a != 1.0) throw std::invalid_argument("adjacency entries must be 0 or 1");
      if (a != adjacency_(j, i)) throw std::invalid_argument("adjacency is not symmetric");
    }
  }
}

Graph Graph::from_edges(Eigen::Index n,
                        const std::vector<std::pair<Eigen::Index, Eigen::Index>>& edges) {
  if (n < 0) throw std::invalid_argument("node count must be nonnegative");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) {
      throw std::invalid_argument("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                                  ") is out of range for " + std::to_string(n) + " nodes");
    }
    if (u == v) throw std::invalid_argument("self-loop at node " + std::to_string(u));
    a(u, v) = 1.0;
    a(v, u) = 1.0;
  }
  return Graph(std::move(a));
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> Graph::edges() const {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
  const Eigen::Index n = node_count();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (adjacency_(i, j) != 0.0) out.emplace_back(i, j);
    }
  }
  return out;
}

std::size_t Graph::edge_count() const {
  return static_cast<std::size_t>(adjacency_.sum() / 2.0);
}

std::vector<std::size_t> Membership::sizes() const {
  std::vector<std::size_t> out(static_cast<std::size_t>(std::max(k, 0)), 0);
  for (int label : labels) {
    if (label >= 0 && label < k) ++out[static_cast<std::size_t>(label)];
  }
  return out;
}

Membership Membership::from_sizes(const std::vector<std::size_t>& sizes) {
  Membership m;
  m.k = static_cast<int>(sizes.size());
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    m.labels.insert(m.labels.end(), sizes[c], static_cast<int>(c));
  }
  return m;
}

SbmGraph sbm_generate(const std::vector<std::size_t>& sizes, double p_intra, double q_inter,
                      Rng& rng) {
  if (sizes.empty()) throw std::invalid_argument("sbm_generate: empty community size list");
  for (std::size_t s : sizes) {
    if (s == 0) throw std::invalid_argument("sbm_generate: community sizes must be >= 1");
  }
  if (!(q_inter >= 0.0 && q_inter <= p_intra && p_intra <= 1.0)) {
    throw std::invalid_argument("sbm_generate: need 0 <= q_inter <= p_intra <= 1");
  }

  Membership membership = Membership::from_sizes(sizes);
  const auto n = static_cast<Eigen::Index>(membership.labels.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double p = membership.labels[i] == membership.labels[j] ? p_intra : q_inter;
      if (draw_bernoulli(rng, p)) {
        a(i, j) = 1.0;
        a(j, i) = 1.0;
      }
    }
  }
  return SbmGraph{Graph(std::move(a)), std::move(membership)};
}

SbmGraph sbm_generate(const std::vector<std::size_t>& sizes, double p_intra, double q_inter,
                      std::uint64_t seed) {
  Rng rng = make_stream(seed, 0);
  return sbm_generate(sizes, p_intra, q_inter, rng);
}

Eigen::MatrixXd normalized_laplacian(const Graph& g) {
  const Eigen::Index n = g.node_count();
  const Eigen::VectorXd d = g.degrees();
  Eigen::VectorXd d_inv_sqrt(n);
  for (Eigen::Index i = 0; i < n; ++i) d_inv_sqrt(i) = d(i) > 0.0 ? 1.0 / std::sqrt(d(i)) : 0.0;
  Eigen::MatrixXd l = -(d_inv_sqrt.asDiagonal() * g.adjacency() * d_inv_sqrt.asDiagonal());
  l.diagonal().array() += 1.0;
  return l;
}

SmoothingOperator smoothing_operator(const Eigen::MatrixXd& laplacian, double alpha) {
  return SmoothingOperator(laplacian, alpha);
}

}  // namespace conga
