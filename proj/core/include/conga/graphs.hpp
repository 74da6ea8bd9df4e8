#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "conga/random.hpp"
#include "conga/smoothing.hpp"

namespace conga {

/// Undirected simple graph on nodes 0..n-1, stored as a dense 0/1
/// adjacency matrix.
class Graph {
 public:
  /// Throws std::invalid_argument unless `adjacency` is square, symmetric,
  /// 0/1 valued and zero on the diagonal.
  explicit Graph(Eigen::MatrixXd adjacency);

  /// Builds a graph from an undirected edge list. Each edge may appear in
  /// either orientation; self-loops and out-of-range endpoints are rejected.
  static Graph from_edges(Eigen::Index n,
                          const std::vector<std::pair<Eigen::Index, Eigen::Index>>& edges);

  Eigen::Index node_count() const { return adjacency_.rows(); }
  const Eigen::MatrixXd& adjacency() const { return adjacency_; }
  Eigen::VectorXd degrees() const { return adjacency_.rowwise().sum(); }

  /// Edges (u, v) with u < v in lexicographic order.
  std::vector<std::pair<Eigen::Index, Eigen::Index>> edges() const;
  std::size_t edge_count() const;

 private:
  Eigen::MatrixXd adjacency_;
};

/// Per-node community labels 0..K-1, or kUnassigned.
struct Membership {
  static constexpr int kUnassigned = -1;

  std::vector<int> labels;
  int k = 0;

  Eigen::Index node_count() const { return static_cast<Eigen::Index>(labels.size()); }

  /// Node count per community; unassigned nodes are not counted.
  std::vector<std::size_t> sizes() const;

  /// Contiguous blocks: the first sizes[0] nodes form community 0, and so on.
  static Membership from_sizes(const std::vector<std::size_t>& sizes);
};

struct SbmGraph {
  Graph graph;
  Membership membership;
};

/// Stochastic block model with contiguous communities of the given sizes.
/// Each pair {i, j}, i < j, visited in row-major order, is an edge with
/// probability p_intra inside a community and q_inter across communities.
SbmGraph sbm_generate(const std::vector<std::size_t>& sizes, double p_intra, double q_inter,
                      Rng& rng);

/// Same as above on the stream make_stream(seed, 0).
SbmGraph sbm_generate(const std::vector<std::size_t>& sizes, double p_intra, double q_inter,
                      std::uint64_t seed);

/// L = I - D^{-1/2} A D^{-1/2}; rows and columns of isolated nodes use 0 for
/// the undefined D^{-1/2} entry, which leaves L_ii = 1.
Eigen::MatrixXd normalized_laplacian(const Graph& g);

/// S = I + alpha L with its cached leading eigenvalue.
SmoothingOperator smoothing_operator(const Eigen::MatrixXd& laplacian, double alpha);

}  // namespace conga
