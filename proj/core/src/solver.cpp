#include "conga/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace conga {

namespace {

constexpr double kPivotTol = 1e-12;
constexpr double kVanishTol = 1e-13;

// The singular pair only seeds the alternating updates, so a power iteration
// that stalls on nearly tied singular values still hands over its last
// iterate instead of aborting the fit.
SingularTriple starting_pair(const Matrix& c, const PowerOptions& opts) {
  try {
    return leading_singular_pair(c, opts);
  } catch (const SingularPairConvergenceError& e) {
    SingularTriple t = e.last();
    apply_sign_convention(t.left, t.right);
    return t;
  }
}

std::vector<SingularTriple> starting_triples(const Matrix& c, Eigen::Index k, const PowerOptions& opts) {
  std::vector<SingularTriple> out;
  Matrix residual = c;
  const double scale = c.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < k; ++i) {
    if (residual.cwiseAbs().maxCoeff() <= kVanishTol * scale) break;
    SingularTriple t = starting_pair(residual, opts);
    residual.noalias() -= t.value * t.left * t.right.transpose();
    out.push_back(std::move(t));
  }
  return out;
}

void check_shapes(const Matrix& c, const SmoothingOperator& s1, const SmoothingOperator& s2,
                  Eigen::Index k) {
  if (c.rows() != s1.size() || c.cols() != s2.size()) {
    throw std::invalid_argument("cross-product is " + std::to_string(c.rows()) + "x" +
                                std::to_string(c.cols()) + " but smoothing operators are " +
                                std::to_string(s1.size()) + " and " + std::to_string(s2.size()));
  }
  if (k > std::min(c.rows(), c.cols())) {
    throw std::invalid_argument("K = " + std::to_string(k) + " exceeds min(n1, n2)");
  }
  if (!c.allFinite()) throw std::invalid_argument("cross-product contains non-finite values");
}

Vector column_s_norms(const Matrix& f, const SmoothingOperator& s) {
  Vector out(f.cols());
  for (Eigen::Index j = 0; j < f.cols(); ++j) out(j) = s_norm(f.col(j), s);
  return out;
}

}  // namespace

std::string to_string(PenaltyKind k) {
  switch (k) {
    case PenaltyKind::kNone: return "none";
    case PenaltyKind::kL1: return "l1";
    case PenaltyKind::kScaledL1: return "scaled_l1";
  }
  return "unknown";
}

void PenaltySpec::validate(Eigen::Index n) const {
  if (!(weight >= 0.0) || !std::isfinite(weight)) {
    throw std::invalid_argument("penalty weight must be finite and >= 0");
  }
  if (kind == PenaltyKind::kScaledL1) {
    if (node_scale.size() != n) {
      throw std::invalid_argument("scaled_l1 penalty needs " + std::to_string(n) +
                                  " node scales, got " + std::to_string(node_scale.size()));
    }
    if (!node_scale.allFinite() || node_scale.minCoeff() < 0.0) {
      throw std::invalid_argument("scaled_l1 node scales must be finite and >= 0");
    }
  }
}

double PenaltySpec::value(const Matrix& x) const {
  if (inactive()) return 0.0;
  if (kind == PenaltyKind::kL1) return weight * x.cwiseAbs().sum();
  return weight * (node_scale.asDiagonal() * x.cwiseAbs()).sum();
}

Matrix PenaltySpec::prox(const Matrix& x, double step) const {
  if (inactive()) return x;
  const double t = step * weight;
  if (kind == PenaltyKind::kL1) return soft_threshold(x, t);
  Matrix y(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    y.row(i) = soft_threshold(x.row(i), t * node_scale(i));
  }
  return y;
}

void SolverConfig::validate() const {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (!(alpha1 >= 0.0) || !(alpha2 >= 0.0)) throw std::invalid_argument("alpha must be >= 0");
  if (!(inner_tol > 0.0) || !(outer_tol > 0.0)) {
    throw std::invalid_argument("tolerances must be > 0");
  }
  if (max_inner < 1 || max_outer < 1) throw std::invalid_argument("iteration caps must be >= 1");
  if (!(madmm_rho > 0.0)) throw std::invalid_argument("madmm_rho must be > 0");
  if (!(penalty1.weight >= 0.0) || !(penalty2.weight >= 0.0)) {
    throw std::invalid_argument("penalty weights must be >= 0");
  }
}

void InnerStats::record(const std::vector<double>& trace) {
  ++loops;
  for (std::size_t t = 1; t < trace.size(); ++t) {
    ++steps;
    const double rel = (trace[t] - trace[t - 1]) / std::max(1.0, std::abs(trace[t - 1]));
    worst_relative_increase = std::max(worst_relative_increase, rel);
    if (rel > kMonotoneSlack) ++nonmonotone_steps;
  }
}

void InnerStats::merge(const InnerStats& other) {
  loops += other.loops;
  steps += other.steps;
  nonmonotone_steps += other.nonmonotone_steps;
  worst_relative_increase = std::max(worst_relative_increase, other.worst_relative_increase);
}

bool FactorPair::all_converged() const {
  return std::all_of(converged.begin(), converged.end(), [](bool b) { return b; });
}

double objective(const Matrix& u, const Matrix& v, const Matrix& c, const SolverConfig& cfg) {
  if (u.rows() != c.rows() || v.rows() != c.cols() || u.cols() != v.cols()) {
    throw std::invalid_argument("objective: incompatible shapes");
  }
  return (u.transpose() * c * v).trace() - cfg.penalty1.value(u) - cfg.penalty2.value(v);
}

Rank1Result rank1_prox(const Vector& b, const SmoothingOperator& s, const PenaltySpec& penalty,
                       double tol, long max_iter, const Vector& warm_start) {
  const Eigen::Index n = b.size();
  if (s.size() != n) throw std::invalid_argument("rank1_prox: dimension mismatch");
  if (warm_start.size() != 0 && warm_start.size() != n) {
    throw std::invalid_argument("rank1_prox: warm start has the wrong length");
  }
  if (!b.allFinite()) throw std::invalid_argument("rank1_prox: linear term is not finite");
  penalty.validate(n);

  Rank1Result r;
  const double b_norm = b.norm();
  if (b_norm == 0.0) {
    r.u_hat = r.u_raw = Vector::Zero(n);
    return r;
  }

  const double inv_ell = 1.0 / s.ell();
  Vector u = warm_start.size() == n ? warm_start : Vector::Zero(n);
  Vector su = s.apply(u);
  auto value = [&](const Vector& x, const Vector& sx) {
    return 0.5 * x.dot(sx) - x.dot(b) + penalty.value(x);
  };
  r.trace.push_back(value(u, su));

  bool converged = false;
  double step = 0.0;
  for (long it = 1; it <= max_iter; ++it) {
    Vector next = penalty.prox(u + inv_ell * (b - su), inv_ell);
    step = (next - u).norm();
    u = std::move(next);
    su = s.apply(u);
    r.trace.push_back(value(u, su));
    r.iterations = it;
    if (step <= tol * b_norm) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw ConvergenceError("rank-one subproblem did not converge within " +
                               std::to_string(max_iter) + " iterations",
                           step / b_norm, max_iter);
  }

  r.u_raw = u;
  const double norm = std::sqrt(std::max(u.dot(su), 0.0));
  r.u_hat = norm > 0.0 ? Vector(u / norm) : Vector::Zero(n);
  return r;
}

Rank1Result rank1_subproblem(const Matrix& c, const Vector& v_fixed, const SmoothingOperator& s,
                             const PenaltySpec& penalty, double tol, long max_iter,
                             const Vector& warm_start) {
  if (c.cols() != v_fixed.size()) throw std::invalid_argument("rank1_subproblem: C v mismatch");
  return rank1_prox(c * v_fixed, s, penalty, tol, max_iter, warm_start);
}

Matrix deflate(const Matrix& c, const Vector& u, const Vector& v) {
  if (u.size() != c.rows() || v.size() != c.cols()) {
    throw std::invalid_argument("deflate: vector lengths do not match the matrix");
  }
  const Vector cv = c * v;
  const Eigen::RowVectorXd utc = u.transpose() * c;
  const double pivot = u.dot(cv);
  if (pivot == 0.0 || std::abs(pivot) < kPivotTol * c.norm()) {
    throw DegeneratePivotError("deflate: degenerate pivot u'Cv = " + std::to_string(pivot));
  }
  return c - (cv / pivot) * utc;
}

double penalty_upper_bound(const Matrix& c) {
  return c.size() == 0 ? 0.0 : c.cwiseAbs().maxCoeff();
}

FactorPair sgpls_greedy(const Matrix& c, const SmoothingOperator& s1, const SmoothingOperator& s2,
                        const SolverConfig& cfg, std::vector<Matrix>* residuals) {
  cfg.validate();
  check_shapes(c, s1, s2, cfg.k);
  cfg.penalty1.validate(c.rows());
  cfg.penalty2.validate(c.cols());

  const Eigen::Index kk = cfg.k;
  FactorPair fp;
  fp.u_hat = Matrix::Zero(c.rows(), kk);
  fp.v_hat = Matrix::Zero(c.cols(), kk);
  fp.converged.assign(static_cast<std::size_t>(kk), false);

  const double c_scale = penalty_upper_bound(c);
  Matrix ck = c;
  if (residuals != nullptr) {
    residuals->clear();
    residuals->push_back(ck);
  }

  for (Eigen::Index k = 0; k < kk; ++k) {
    if (c_scale == 0.0 || ck.cwiseAbs().maxCoeff() <= kVanishTol * c_scale) {
      fp.warning = "residual matrix vanished before component " + std::to_string(k + 1);
      break;
    }
    const SingularTriple init = starting_pair(ck, cfg.power);
    Vector u = init.left;
    Vector v = init.right;
    Vector u_raw = u;
    Vector v_raw = v;
    std::vector<double> trace;
    bool converged = false;
    bool trivial = false;

    for (long t = 1; t <= cfg.max_outer; ++t) {
      ++fp.outer_iterations;
      Rank1Result ru =
          rank1_prox(ck * v, s1, cfg.penalty1, cfg.inner_tol, cfg.max_inner, u_raw);
      fp.inner.record(ru.trace);
      u_raw = ru.u_raw;
      if (ru.u_hat.isZero(0.0)) {
        trivial = true;
        break;
      }
      Rank1Result rv = rank1_prox(ck.transpose() * ru.u_hat, s2, cfg.penalty2, cfg.inner_tol,
                                  cfg.max_inner, v_raw);
      fp.inner.record(rv.trace);
      v_raw = rv.u_raw;
      if (rv.u_hat.isZero(0.0)) {
        trivial = true;
        break;
      }
      const double change = std::max((ru.u_hat - u).norm() / ru.u_hat.norm(),
                                     (rv.u_hat - v).norm() / rv.u_hat.norm());
      u = std::move(ru.u_hat);
      v = std::move(rv.u_hat);
      trace.push_back(u.dot(ck * v) - cfg.penalty1.value(u) - cfg.penalty2.value(v));
      if (change < cfg.outer_tol) {
        converged = true;
        break;
      }
    }

    if (trivial) {
      fp.converged[static_cast<std::size_t>(k)] = true;
      fp.objective_trace.push_back(std::move(trace));
      fp.warning = "component " + std::to_string(k + 1) +
                   " is zero: the penalty is at or above its trivial-solution threshold";
      break;
    }

    apply_sign_convention(u, v);
    const double pivot = u.dot(ck * v);
    Matrix next;
    try {
      next = deflate(ck, u, v);
    } catch (const DegeneratePivotError&) {
      fp.warning = "component " + std::to_string(k + 1) +
                   " has a degenerate pivot u'Cv = " + std::to_string(pivot) + "; stopped early";
      break;
    }
    fp.u_hat.col(k) = u;
    fp.v_hat.col(k) = v;
    fp.component_values.push_back(pivot);
    fp.converged[static_cast<std::size_t>(k)] = converged;
    fp.objective_trace.push_back(std::move(trace));
    fp.components = k + 1;
    ck = std::move(next);
    if (residuals != nullptr) residuals->push_back(ck);
  }

  fp.s_norms_u = column_s_norms(fp.u_hat, s1);
  fp.s_norms_v = column_s_norms(fp.v_hat, s2);
  return fp;
}

namespace {

struct MadmmState {
  Matrix z;
  Matrix d;
  double rho = 1.0;
};

struct MadmmOutcome {
  Matrix u;
  bool converged = false;
  bool rank_deficient = false;
};

/// min_U -Tr(U'B) + P(U) over U'SU = I with the split U = Z.
///
/// The augmented term is measured in the S-metric, (rho/2) ||U - Z + D||_S^2.
/// On the manifold Tr(U'SU) = K, so the U-step is exactly the Procrustes
/// problem on B + rho S (Z - D). The Z-step is linearized: one proximal
/// gradient step of length 1/ell on the S-weighted quadratic.
MadmmOutcome madmm_block(const Matrix& b, const SmoothingOperator& s, const PenaltySpec& penalty,
                         MadmmState& st, double tol, long max_iter) {
  MadmmOutcome out;
  const double inv_ell = 1.0 / s.ell();
  for (long it = 1; it <= max_iter; ++it) {
    ProcrustesResult pr = generalized_procrustes(b + st.rho * s.apply(st.z - st.d), s);
    out.rank_deficient = pr.rank_deficient;
    out.u = std::move(pr.u);
    Matrix z_old = st.z;
    st.z = penalty.prox(st.z - inv_ell * s.apply(st.z - out.u - st.d), inv_ell / st.rho);
    st.d += out.u - st.z;

    const double primal = (out.u - st.z).norm();
    const double dual = st.rho * s.apply(st.z - z_old).norm();
    const double scale = std::max(out.u.norm(), st.z.norm());
    if (primal <= tol * scale && dual <= tol * scale) {
      out.converged = true;
      break;
    }
    if (it % 10 == 0) {
      if (primal > 10.0 * dual) {
        st.rho *= 2.0;
        st.d /= 2.0;
      } else if (dual > 10.0 * primal) {
        st.rho /= 2.0;
        st.d *= 2.0;
      }
    }
  }
  return out;
}

PenaltySpec rescaled(PenaltySpec p, double factor) {
  p.weight *= factor;
  return p;
}

}  // namespace

FactorPair sgpls_multirank(const Matrix& c, const SmoothingOperator& s1,
                           const SmoothingOperator& s2, const SolverConfig& cfg) {
  cfg.validate();
  check_shapes(c, s1, s2, cfg.k);
  cfg.penalty1.validate(c.rows());
  cfg.penalty2.validate(c.cols());

  const Eigen::Index kk = cfg.k;
  const std::vector<SingularTriple> init = starting_triples(c, kk, cfg.power);
  if (static_cast<Eigen::Index>(init.size()) < kk) {
    throw std::invalid_argument("sgpls_multirank: cross-product has rank below K");
  }

  // The problem is invariant under (C, lambda) -> (C / c, lambda / c); solving
  // at unit spectral norm keeps rho = O(1) meaningful.
  const double scale = init.front().value;
  const Matrix ct = c / scale;
  const PenaltySpec p1 = rescaled(cfg.penalty1, 1.0 / scale);
  const PenaltySpec p2 = rescaled(cfg.penalty2, 1.0 / scale);

  Matrix u(c.rows(), kk);
  Matrix v(c.cols(), kk);
  for (Eigen::Index k = 0; k < kk; ++k) {
    u.col(k) = init[static_cast<std::size_t>(k)].left;
    v.col(k) = init[static_cast<std::size_t>(k)].right;
  }
  MadmmState su{u, Matrix::Zero(u.rows(), kk), cfg.madmm_rho};
  MadmmState sv{v, Matrix::Zero(v.rows(), kk), cfg.madmm_rho};

  FactorPair fp;
  std::vector<double> trace;
  double previous = objective(u, v, c, cfg);
  bool converged = false;
  bool inner_ok = true;
  bool rank_deficient = false;
  double change = std::numeric_limits<double>::infinity();

  for (long t = 1; t <= cfg.max_outer; ++t) {
    ++fp.outer_iterations;
    MadmmOutcome ou = madmm_block(ct * v, s1, p1, su, cfg.inner_tol, cfg.max_inner);
    u = std::move(ou.u);
    MadmmOutcome ov = madmm_block(ct.transpose() * u, s2, p2, sv, cfg.inner_tol, cfg.max_inner);
    v = std::move(ov.u);
    inner_ok = ou.converged && ov.converged;
    rank_deficient = rank_deficient || ou.rank_deficient || ov.rank_deficient;

    const double current = objective(u, v, c, cfg);
    trace.push_back(current);
    change = std::abs(current - previous) / std::max(1.0, std::abs(current));
    previous = current;
    if (change <= cfg.outer_tol && inner_ok) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw MultirankConvergenceError("sgpls_multirank: no convergence within " +
                                        std::to_string(cfg.max_outer) + " outer iterations",
                                    change, cfg.max_outer, std::move(trace));
  }

  // A split column that is identically zero is the trivial solution for that
  // component; the zero column lies in the convex hull of the manifold.
  Eigen::Index zero_cols = 0;
  for (Eigen::Index k = 0; k < kk; ++k) {
    if (su.z.col(k).isZero(0.0) || sv.z.col(k).isZero(0.0)) {
      u.col(k).setZero();
      v.col(k).setZero();
      ++zero_cols;
    }
  }

  fp.u_hat = std::move(u);
  fp.v_hat = std::move(v);
  fp.u_split = std::move(su.z);
  fp.v_split = std::move(sv.z);
  fp.components = kk - zero_cols;
  fp.converged.assign(static_cast<std::size_t>(kk), true);
  fp.objective_trace.push_back(std::move(trace));
  if (zero_cols > 0) {
    fp.warning = std::to_string(zero_cols) +
                 " component(s) are zero: the penalty is at or above its trivial-solution "
                 "threshold";
  } else if (rank_deficient) {
    fp.warning = "a Procrustes step met a rank-deficient linear term";
  }
  fp.s_norms_u = column_s_norms(fp.u_hat, s1);
  fp.s_norms_v = column_s_norms(fp.v_hat, s2);
  return fp;
}

}  // namespace conga
