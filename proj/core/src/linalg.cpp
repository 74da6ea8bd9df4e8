#include "conga/linalg.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "conga/random.hpp"

namespace conga {

namespace {

constexpr std::uint64_t kRestartSeed = 0x9e3779b97f4a7c15ULL;
constexpr double kDither = 0.1;
constexpr double kCollapseTol = 1e-14;

void check_dims(const Vector& u, const SmoothingOperator& s) {
  if (u.size() != s.size()) {
    throw std::invalid_argument("dimension mismatch: vector has " + std::to_string(u.size()) +
                                " entries, smoothing operator has " +
                                std::to_string(s.size()));
  }
}

/// All-ones with a small fixed dither, so the start is never exactly
/// orthogonal to the leading direction of a structured matrix.
Vector dithered_ones(Eigen::Index n) {
  Rng rng = make_stream(kRestartSeed, static_cast<std::uint64_t>(n));
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = 1.0 + kDither * draw_uniform(rng, -1.0, 1.0);
  return v.normalized();
}

Vector pseudorandom_unit(Eigen::Index n) {
  Rng rng = make_stream(kRestartSeed, static_cast<std::uint64_t>(n) + 1);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = draw_normal(rng);
  return v.normalized();
}

}  // namespace

double s_norm(const Vector& u, const SmoothingOperator& s) {
  check_dims(u, s);
  const double q = u.dot(s.apply(u).col(0));
  return std::sqrt(std::max(q, 0.0));
}

Vector project_s_ball(const Vector& u, const SmoothingOperator& s) {
  // Rescaled vectors can land a few ulps above 1; accepting them keeps the
  // projection exactly idempotent.
  const double norm = s_norm(u, s);
  if (norm <= 1.0 + 8.0 * std::numeric_limits<double>::epsilon()) return u;
  return u / norm;
}

void apply_sign_convention(Vector& left, Vector& right) {
  Eigen::Index idx = 0;
  left.cwiseAbs().maxCoeff(&idx);
  if (left(idx) < 0.0) {
    left = -left;
    right = -right;
  }
}

SingularTriple leading_singular_pair(const Matrix& c, const PowerOptions& opts) {
  if (c.rows() == 0 || c.cols() == 0 || c.isZero(0.0)) {
    throw std::invalid_argument("leading_singular_pair: matrix is empty or zero");
  }
  const double fro = c.norm();

  Vector v = dithered_ones(c.cols());
  Vector u(c.rows());
  double sigma = 0.0;
  double residual = std::numeric_limits<double>::infinity();
  bool restarted = false;

  for (long it = 1; it <= opts.max_iter; ++it) {
    Vector cv = c * v;
    double norm_cv = cv.norm();
    if (norm_cv <= kCollapseTol * fro) {
      if (restarted) break;
      restarted = true;
      v = pseudorandom_unit(c.cols());
      cv = c * v;
      norm_cv = cv.norm();
      if (norm_cv <= kCollapseTol * fro) break;
    }
    u = cv / norm_cv;
    Vector ctu = c.transpose() * u;
    sigma = ctu.norm();
    v = ctu / sigma;
    residual = (c * v - sigma * u).norm() / sigma;
    if (residual <= opts.tol) {
      SingularTriple t{u, v, sigma};
      apply_sign_convention(t.left, t.right);
      return t;
    }
  }
  SingularTriple last{u, v, sigma};
  throw SingularPairConvergenceError(
      "leading_singular_pair: no convergence within " + std::to_string(opts.max_iter) +
          " iterations (relative residual " + std::to_string(residual) + ")",
      residual, opts.max_iter, std::move(last));
}

std::vector<SingularTriple> leading_singular_triples(const Matrix& c, Eigen::Index k,
                                                     const PowerOptions& opts) {
  std::vector<SingularTriple> out;
  Matrix residual = c;
  const double scale = c.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < k; ++i) {
    if (residual.cwiseAbs().maxCoeff() <= 1e-13 * scale) break;
    SingularTriple t = leading_singular_pair(residual, opts);
    residual.noalias() -= t.value * t.left * t.right.transpose();
    out.push_back(std::move(t));
  }
  return out;
}

double lambda_max(const Matrix& sym, const PowerOptions& opts) {
  if (sym.rows() != sym.cols() || sym.rows() == 0) {
    throw std::invalid_argument("lambda_max: matrix must be square and nonempty");
  }
  Vector x = dithered_ones(sym.rows());
  double mu = 0.0;
  double residual = std::numeric_limits<double>::infinity();
  bool restarted = false;
  for (long it = 1; it <= opts.max_iter; ++it) {
    Vector ax = sym * x;
    mu = x.dot(ax);
    if (ax.norm() == 0.0) {
      if (restarted) return 0.0;
      restarted = true;
      x = pseudorandom_unit(sym.rows());
      continue;
    }
    residual = (ax - mu * x).norm();
    if (residual <= opts.tol * std::abs(mu)) return mu;
    x = ax.normalized();
  }
  throw ConvergenceError("lambda_max: no convergence within " + std::to_string(opts.max_iter) +
                             " iterations",
                         residual, opts.max_iter);
}

double lambda_max(const SmoothingOperator& s, const PowerOptions& opts) {
  return lambda_max(s.matrix(), opts);
}

Matrix project_conv_stiefel(const Matrix& x, const SmoothingOperator& s) {
  if (x.rows() != s.size()) {
    throw std::invalid_argument("project_conv_stiefel: row count does not match operator");
  }
  if (x.cols() > x.rows()) {
    throw std::invalid_argument("project_conv_stiefel: more columns than rows");
  }
  const Matrix gram = x.transpose() * s.apply(x);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().maxCoeff() <= 1.0) return x;

  const Matrix y = s.sqrt() * x;
  Eigen::JacobiSVD<Matrix> svd(y, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector clipped = svd.singularValues().cwiseMin(1.0);
  return s.inv_sqrt() * (svd.matrixU() * clipped.asDiagonal() * svd.matrixV().transpose());
}

ProcrustesResult generalized_procrustes(const Matrix& b, const SmoothingOperator& s) {
  if (b.rows() != s.size()) {
    throw std::invalid_argument("generalized_procrustes: row count does not match operator");
  }
  if (b.cols() > b.rows()) {
    throw std::invalid_argument("generalized_procrustes: more columns than rows");
  }
  const Matrix y = s.inv_sqrt() * b;
  Eigen::JacobiSVD<Matrix> svd(y, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cutoff = std::max(y.rows(), y.cols()) * std::numeric_limits<double>::epsilon() *
                        (sv.size() > 0 ? sv(0) : 0.0);
  ProcrustesResult out;
  out.rank = (sv.array() > cutoff).count();
  out.rank_deficient = out.rank < b.cols();
  out.u = s.inv_sqrt() * (svd.matrixU() * svd.matrixV().transpose());
  return out;
}

}  // namespace conga
