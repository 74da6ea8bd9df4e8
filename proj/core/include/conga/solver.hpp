#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "conga/error.hpp"
#include "conga/linalg.hpp"
#include "conga/smoothing.hpp"

namespace conga {

enum class PenaltyKind {
  kNone,
  kL1,        ///< weight * sum |x_i|
  kScaledL1,  ///< weight * sum w_i |x_i| with fixed per-node w_i >= 0
};

std::string to_string(PenaltyKind k);

/// A sparsity penalty lambda * P(.). Every kind is convex and positively
/// homogeneous of order one, and applies column by column to matrices.
struct PenaltySpec {
  PenaltyKind kind = PenaltyKind::kNone;
  double weight = 0.0;
  /// Per-node scales for kScaledL1; ignored otherwise.
  Vector node_scale;

  static PenaltySpec none() { return {}; }
  static PenaltySpec l1(double lambda) { return {PenaltyKind::kL1, lambda, {}}; }
  static PenaltySpec scaled_l1(double lambda, Vector scale) {
    return {PenaltyKind::kScaledL1, lambda, std::move(scale)};
  }

  /// True when the penalty is identically zero.
  bool inactive() const { return kind == PenaltyKind::kNone || weight == 0.0; }

  /// lambda * P(x), summed over columns.
  double value(const Matrix& x) const;

  /// prox of (step * lambda * P) at x.
  Matrix prox(const Matrix& x, double step) const;

  /// Throws std::invalid_argument on a negative weight or a node_scale that
  /// does not match `n` rows.
  void validate(Eigen::Index n) const;
};

struct SolverConfig {
  Eigen::Index k = 4;
  PenaltySpec penalty1;
  PenaltySpec penalty2;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double inner_tol = 1e-9;
  double outer_tol = 1e-7;
  long max_inner = 5000;
  long max_outer = 500;
  double madmm_rho = 1.0;
  PowerOptions power;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Proximal-gradient bookkeeping for one run of the rank-one subproblem.
struct Rank1Result {
  /// Normalized solution: raw / ||raw||_S, or zero.
  Vector u_hat;
  /// Fixed point of the prox-gradient recursion (unnormalized).
  Vector u_raw;
  /// F(u) = 1/2 u'Su - u'b + lambda P(u) at the start and after every step.
  std::vector<double> trace;
  long iterations = 0;
};

/// Monotonicity bookkeeping for the inner prox-gradient loops of a solve.
struct InnerStats {
  long loops = 0;
  long steps = 0;
  /// Steps where F increased by more than kMonotoneSlack * max(1, |F|).
  long nonmonotone_steps = 0;
  /// Largest observed (F_{t+1} - F_t) / max(1, |F_t|); <= 0 when monotone.
  double worst_relative_increase = -std::numeric_limits<double>::infinity();

  static constexpr double kMonotoneSlack = 1e-10;

  void record(const std::vector<double>& trace);
  void merge(const InnerStats& other);
};

/// Estimated PLS factors with their diagnostics.
struct FactorPair {
  Matrix u_hat;
  Matrix v_hat;
  Vector s_norms_u;
  Vector s_norms_v;
  /// Objective values per outer iteration, one list per component for the
  /// greedy solver and a single list for the multi-rank solver.
  std::vector<std::vector<double>> objective_trace;
  std::vector<bool> converged;
  /// u_k' C_k v_k for each extracted greedy component.
  std::vector<double> component_values;
  /// Number of nonzero components actually extracted.
  Eigen::Index components = 0;
  /// Set when the fit stopped early or produced zero columns.
  std::optional<std::string> warning;
  InnerStats inner;
  long outer_iterations = 0;

  /// Sparse split variables of the multi-rank solver (empty otherwise).
  Matrix u_split;
  Matrix v_split;

  bool all_converged() const;
};

/// Residual cross-product matrix and the pairs already deflated out of it.
struct DeflationState {
  Matrix c_current;
  std::vector<std::pair<Vector, Vector>> history;
};

class DegeneratePivotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tr(U' C V) - lambda1 P1(U) - lambda2 P2(V).
double objective(const Matrix& u, const Matrix& v, const Matrix& c, const SolverConfig& cfg);

/// Rank-one subproblem on the linear term b = C v: proximal gradient
///
///   u <- prox_{(lambda/ell) P}(u + (b - S u) / ell)
///
/// from `warm_start` (zero when empty) until ||du|| <= tol * ||b||. The raw
/// fixed point minimizes 1/2 u'Su - u'b + lambda P(u); its S-normalization
/// maximizes u'b - lambda P(u) over the S-unit ball. Throws ConvergenceError
/// after max_iter steps.
Rank1Result rank1_prox(const Vector& b, const SmoothingOperator& s, const PenaltySpec& penalty,
                       double tol, long max_iter, const Vector& warm_start = Vector());

/// rank1_prox with b = C v_fixed.
Rank1Result rank1_subproblem(const Matrix& c, const Vector& v_fixed, const SmoothingOperator& s,
                             const PenaltySpec& penalty, double tol, long max_iter,
                             const Vector& warm_start = Vector());

/// C - (C v)(u' C) / (u' C v). Throws DegeneratePivotError when
/// |u' C v| < 1e-12 ||C||_F.
Matrix deflate(const Matrix& c, const Vector& u, const Vector& v);

/// Largest absolute entry of C.
double penalty_upper_bound(const Matrix& c);

/// Greedy rank-one extraction with deflation. When `residuals` is given it
/// receives C_1, ..., C_{k+1} for the components extracted.
FactorPair sgpls_greedy(const Matrix& c, const SmoothingOperator& s1, const SmoothingOperator& s2,
                        const SolverConfig& cfg, std::vector<Matrix>* residuals = nullptr);

/// Raised by sgpls_multirank after max_outer alternations; carries the
/// objective trace.
class MultirankConvergenceError : public ConvergenceError {
 public:
  MultirankConvergenceError(const std::string& what, double residual, long iterations,
                            std::vector<double> trace)
      : ConvergenceError(what, residual, iterations), trace_(std::move(trace)) {}
  const std::vector<double>& trace() const noexcept { return trace_; }

 private:
  std::vector<double> trace_;
};

/// Multi-rank alternating solver; each block subproblem is solved by
/// manifold ADMM on the generalized Stiefel manifold {U : U'SU = I}.
FactorPair sgpls_multirank(const Matrix& c, const SmoothingOperator& s1,
                           const SmoothingOperator& s2, const SolverConfig& cfg);

}  // namespace conga
