#pragma once

#include <Eigen/Dense>

namespace conga {

/// The smoothing metric S = I + alpha * L of one graph.
///
/// Holds the (normalized) Laplacian, the weight alpha and a dense symmetric
/// eigen-decomposition of L, from which S, S^{1/2}, S^{-1/2} and the leading
/// eigenvalue `ell` are formed. S is positive definite with every eigenvalue
/// >= 1, so the decomposition never fails for a valid Laplacian.
///
/// Instances are immutable after construction.
class SmoothingOperator {
 public:
  /// Throws std::invalid_argument if alpha < 0 or is not finite, or if the
  /// Laplacian is not square, symmetric and positive semidefinite.
  SmoothingOperator(Eigen::MatrixXd laplacian, double alpha);

  /// S = I on n nodes (alpha = 0, zero Laplacian).
  static SmoothingOperator identity(Eigen::Index n);

  Eigen::Index size() const { return laplacian_.rows(); }
  double alpha() const { return alpha_; }
  const Eigen::MatrixXd& laplacian() const { return laplacian_; }
  const Eigen::MatrixXd& matrix() const { return s_; }

  /// lambda_max(S); lies in [1, 1 + alpha * lambda_max(L)].
  double ell() const { return ell_; }

  /// Eigenvalues of S in ascending order.
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }

  const Eigen::MatrixXd& sqrt() const { return sqrt_; }
  const Eigen::MatrixXd& inv_sqrt() const { return inv_sqrt_; }

  /// S * x without forming a copy of S.
  template <class Derived>
  Eigen::MatrixXd apply(const Eigen::MatrixBase<Derived>& x) const {
    if (alpha_ == 0.0) return x;
    return x + alpha_ * (laplacian_ * x);
  }

 private:
  double alpha_;
  Eigen::MatrixXd laplacian_;
  Eigen::MatrixXd s_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd sqrt_;
  Eigen::MatrixXd inv_sqrt_;
  double ell_;
};

}  // namespace conga
