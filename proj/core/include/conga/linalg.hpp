#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "conga/error.hpp"
#include "conga/smoothing.hpp"

namespace conga {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// A singular triple (left, right, value) of a dense matrix.
///
/// Both vectors have unit Euclidean norm and value >= 0. The entry of `left`
/// with the largest magnitude is positive (lowest index wins ties), which
/// makes triples from different runs directly comparable.
struct SingularTriple {
  Vector left;
  Vector right;
  double value = 0.0;
};

/// Raised when the power iteration in leading_singular_pair exhausts its
/// iteration budget. Carries the last iterate.
class SingularPairConvergenceError : public ConvergenceError {
 public:
  SingularPairConvergenceError(const std::string& what, double residual,
                               long iterations, SingularTriple last)
      : ConvergenceError(what, residual, iterations), last_(std::move(last)) {}

  const SingularTriple& last() const noexcept { return last_; }

 private:
  SingularTriple last_;
};

struct PowerOptions {
  double tol = 1e-10;
  long max_iter = 10000;
};

/// Elementwise sign(x) * max(|x| - t, 0). This is the proximal operator of
/// t * ||.||_1. Throws std::domain_error on non-finite input or negative t.
template <class Derived>
typename Derived::PlainObject soft_threshold(const Eigen::MatrixBase<Derived>& x,
                                             double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw std::domain_error("soft_threshold: threshold must be finite and >= 0");
  }
  if (!x.allFinite()) {
    throw std::domain_error("soft_threshold: input contains non-finite entries");
  }
  typename Derived::PlainObject y(x.rows(), x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const double v = x(i, j);
      const double m = std::abs(v) - t;
      y(i, j) = m > 0.0 ? std::copysign(m, v) : 0.0;
    }
  }
  return y;
}

/// sqrt(u' S u).
double s_norm(const Vector& u, const SmoothingOperator& s);

/// u if s_norm(u) <= 1 (up to a few ulps), otherwise u / s_norm(u).
Vector project_s_ball(const Vector& u, const SmoothingOperator& s);

/// Flips (left, right) jointly so the largest-magnitude entry of left is
/// positive.
void apply_sign_convention(Vector& left, Vector& right);

/// Leading singular triple by alternating power iteration.
///
/// Starts from a deterministic, slightly dithered all-ones right vector and
/// stops once ||C v - sigma u|| <= tol * sigma. If the iterate collapses onto
/// the null space of C, the iteration restarts once from a fixed
/// pseudorandom vector. Throws std::invalid_argument for an all-zero C and
/// SingularPairConvergenceError when max_iter is exhausted.
SingularTriple leading_singular_pair(const Matrix& c, const PowerOptions& opts = {});

/// The K leading singular triples of C, extracted one at a time with
/// Hotelling deflation C <- C - sigma u v'. Stops early (returning fewer
/// triples) once the deflated matrix is numerically zero.
std::vector<SingularTriple> leading_singular_triples(const Matrix& c, Eigen::Index k,
                                                     const PowerOptions& opts = {});

/// Largest eigenvalue of a symmetric positive semidefinite matrix by power
/// iteration with Rayleigh quotients; converged when ||A x - mu x|| <= tol * mu.
double lambda_max(const Matrix& sym, const PowerOptions& opts = {});

/// lambda_max(I + alpha L), computed by power iteration (not from the cache).
double lambda_max(const SmoothingOperator& s, const PowerOptions& opts = {});

/// Nearest point, in the S-weighted Frobenius metric, of the convex hull
/// {X : lambda_max(X' S X) <= 1}. Feasible inputs are returned unchanged;
/// otherwise the singular values of S^{1/2} X are clipped at 1.
Matrix project_conv_stiefel(const Matrix& x, const SmoothingOperator& s);

struct ProcrustesResult {
  Matrix u;
  /// Numerical rank of S^{-1/2} B. Below B.cols() the maximizer is not
  /// unique and the SVD's choice of null-space basis is returned.
  Eigen::Index rank = 0;
  bool rank_deficient = false;
};

/// argmax over {U : U' S U = I} of Tr(U' B), as S^{-1/2} polar(S^{-1/2} B).
ProcrustesResult generalized_procrustes(const Matrix& b, const SmoothingOperator& s);

}  // namespace conga
