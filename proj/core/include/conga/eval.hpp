#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "conga/graphs.hpp"
#include "conga/signals.hpp"
#include "conga/solver.hpp"

namespace conga {

/// Community assignment read off a factor matrix.
struct AssignmentResult {
  Membership membership;
  double support_threshold = 0.0;
  std::string source;
};

/// Node i goes to argmax_k |F_ik| (lowest k on ties) when that maximum
/// exceeds tau, and is unassigned otherwise. Without tau the threshold is
/// 1e-6 * max |F|.
AssignmentResult extract_membership(const Matrix& f, std::optional<double> tau = std::nullopt,
                                    std::string source = {});

struct MatchScores {
  /// permutation[e] is the truth community matched to estimated column e.
  std::vector<int> permutation;
  double accuracy1 = 0.0;
  double accuracy2 = 0.0;
  /// Fraction of cross-graph node pairs (i, j) with both nodes correct.
  double alignment = 0.0;
  std::size_t assigned1 = 0;
  std::size_t assigned2 = 0;
  /// Set when an estimate assigns no node at all.
  bool empty1 = false;
  bool empty2 = false;

  double mean_accuracy() const { return 0.5 * (accuracy1 + accuracy2); }
};

inline constexpr int kMaxMatchK = 8;

/// Exhaustive search over the K! relabelings applied jointly to both
/// estimates (column k of U is paired with column k of V). Accuracy is the
/// number of correctly labelled nodes over the number of nodes with a true
/// community; unassigned nodes count as errors. Throws std::invalid_argument
/// if K > 8 and DataError if the community counts or node counts disagree.
MatchScores match_and_score(const AssignmentResult& est1, const AssignmentResult& est2,
                            const Membership& truth1, const Membership& truth2);

enum class Algorithm { kGreedy, kMultirank };
std::string to_string(Algorithm a);
Algorithm parse_algorithm(const std::string& s);

/// Runs the selected solver on C with S1 = I + alpha1 L1, S2 = I + alpha2 L2.
FactorPair fit(Algorithm algorithm, const Matrix& c, const SmoothingOperator& s1,
               const SmoothingOperator& s2, const SolverConfig& cfg);

/// Number of rows of F with at least one nonzero entry.
std::size_t support_size(const Matrix& f);

/// Everything needed to evaluate solver configurations on one instance.
struct Problem {
  Matrix c;
  Eigen::MatrixXd laplacian1;
  Eigen::MatrixXd laplacian2;
  Membership truth1;
  Membership truth2;
};

Problem make_problem(const SimulatedProblem& sim);

struct GridPointResult {
  SolverConfig config;
  std::optional<MatchScores> scores;
  std::optional<std::string> error;
  double objective = 0.0;
  InnerStats inner;
};

struct TuneResult {
  std::size_t best_index = 0;
  SolverConfig config;
  FactorPair fit;
  MatchScores scores;
  double objective = 0.0;
  std::vector<GridPointResult> points;
};

struct RunOptions {
  Algorithm algorithm = Algorithm::kGreedy;
  /// Grid points evaluated concurrently; results do not depend on it.
  unsigned jobs = 1;
};

/// Fits every grid point and keeps the one with the highest mean per-graph
/// accuracy (first in grid order on ties). Failing points are recorded, not
/// rethrown; if every point fails the first error is rethrown.
TuneResult oracle_tune(const Problem& problem, const std::vector<SolverConfig>& grid,
                       const RunOptions& options = {});

/// One row of the four-way comparison.
struct VariantRow {
  std::string variant;
  MatchScores scores;
  std::size_t support1 = 0;
  std::size_t support2 = 0;
  double objective = 0.0;
  double runtime_seconds = 0.0;
  SolverConfig config;
  double lambda_fraction = 0.0;
  FactorPair fit;
  /// Inner-loop statistics over every grid point, not just the winner.
  InnerStats inner_all;
  std::size_t failed_points = 0;
};

struct ComparisonReport {
  std::vector<VariantRow> rows;
};

/// Tuning grid shared by the variants: lambda = fraction * ||C||_max on
/// both sides, alpha on both sides.
struct GridSpec {
  std::vector<double> lambda_fractions;
  std::vector<double> alphas;
};

inline const std::vector<std::string> kVariants = {"PLS", "SPLS", "GPLS", "SGPLS"};

/// Grid for one variant: PLS pins lambda = alpha = 0, SPLS pins alpha = 0,
/// GPLS pins lambda = 0, SGPLS takes the full product.
std::vector<SolverConfig> variant_grid(const std::string& variant, const GridSpec& spec,
                                       const SolverConfig& base, const Matrix& c);

/// Oracle-tunes and scores each requested variant (in the given order).
ComparisonReport run_variant_comparison(const Problem& problem,
                                        const std::map<std::string, std::vector<SolverConfig>>& grids,
                                        const std::vector<std::string>& variants,
                                        const RunOptions& options = {});

}  // namespace conga
