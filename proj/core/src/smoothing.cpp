#include "conga/smoothing.hpp"

#include <cmath>
#include <stdexcept>

namespace conga {

namespace {

constexpr double kSymmetryTol = 1e-10;
constexpr double kPsdTol = 1e-10;

}  // namespace

SmoothingOperator::SmoothingOperator(Eigen::MatrixXd laplacian, double alpha)
    : alpha_(alpha), laplacian_(std::move(laplacian)) {
  if (!std::isfinite(alpha_) || alpha_ < 0.0) {
    throw std::invalid_argument("smoothing weight alpha must be finite and >= 0");
  }
  const Eigen::Index n = laplacian_.rows();
  if (n < 1 || laplacian_.cols() != n) {
    throw std::invalid_argument("Laplacian must be a nonempty square matrix");
  }
  if (!laplacian_.allFinite()) {
    throw std::invalid_argument("Laplacian contains non-finite entries");
  }
  const double scale = std::max(1.0, laplacian_.cwiseAbs().maxCoeff());
  if ((laplacian_ - laplacian_.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol * scale) {
    throw std::invalid_argument("Laplacian is not symmetric");
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(laplacian_);
  if (eig.info() != Eigen::Success) {
    throw std::runtime_error("eigen-decomposition of the Laplacian failed");
  }
  const Eigen::VectorXd& mu = eig.eigenvalues();
  if (mu.minCoeff() < -kPsdTol * scale) {
    throw std::invalid_argument("Laplacian is not positive semidefinite");
  }
  // Round-off can leave tiny negative eigenvalues; S stays >= I regardless.
  eigenvalues_ = (1.0 + alpha_ * mu.cwiseMax(0.0).array()).matrix();
  ell_ = eigenvalues_.maxCoeff();

  s_ = Eigen::MatrixXd::Identity(n, n) + alpha_ * laplacian_;
  if (alpha_ == 0.0) {
    sqrt_ = Eigen::MatrixXd::Identity(n, n);
    inv_sqrt_ = sqrt_;
    return;
  }
  const Eigen::MatrixXd& q = eig.eigenvectors();
  sqrt_ = q * eigenvalues_.cwiseSqrt().asDiagonal() * q.transpose();
  inv_sqrt_ = q * eigenvalues_.cwiseSqrt().cwiseInverse().asDiagonal() * q.transpose();
}

SmoothingOperator SmoothingOperator::identity(Eigen::Index n) {
  return SmoothingOperator(Eigen::MatrixXd::Zero(n, n), 0.0);
}

}  // namespace conga
