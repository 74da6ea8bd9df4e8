#include "conga/eval.hpp"

#include <algorithm>
#include <chrono>
#include <future>
#include <numeric>
#include <set>

#include "conga/error.hpp"

namespace conga {

AssignmentResult extract_membership(const Matrix& f, std::optional<double> tau,
                                    std::string source) {
  AssignmentResult r;
  r.source = std::move(source);
  const double max_abs = f.size() == 0 ? 0.0 : f.cwiseAbs().maxCoeff();
  r.support_threshold = tau.value_or(1e-6 * max_abs);
  if (r.support_threshold < 0.0) throw std::invalid_argument("extract_membership: tau < 0");

  r.membership.k = static_cast<int>(f.cols());
  r.membership.labels.assign(static_cast<std::size_t>(f.rows()), Membership::kUnassigned);
  for (Eigen::Index i = 0; i < f.rows(); ++i) {
    int best = Membership::kUnassigned;
    double best_abs = r.support_threshold;
    for (Eigen::Index k = 0; k < f.cols(); ++k) {
      const double a = std::abs(f(i, k));
      if (a > best_abs) {
        best_abs = a;
        best = static_cast<int>(k);
      }
    }
    r.membership.labels[static_cast<std::size_t>(i)] = best;
  }
  return r;
}

namespace {

std::size_t count_truth(const Membership& truth) {
  return static_cast<std::size_t>(std::count_if(truth.labels.begin(), truth.labels.end(),
                                                 [](int l) { return l >= 0; }));
}

std::size_t count_assigned(const Membership& m) { return count_truth(m); }

/// correct[e][t]: nodes with estimated label e and true label t.
std::vector<std::vector<std::size_t>> confusion(const Membership& est, const Membership& truth,
                                                int k) {
  std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(k),
                                            std::vector<std::size_t>(static_cast<std::size_t>(k)));
  for (std::size_t i = 0; i < est.labels.size(); ++i) {
    const int e = est.labels[i];
    const int t = truth.labels[i];
    if (e >= 0 && t >= 0) ++out[static_cast<std::size_t>(e)][static_cast<std::size_t>(t)];
  }
  return out;
}

}  // namespace

MatchScores match_and_score(const AssignmentResult& est1, const AssignmentResult& est2,
                            const Membership& truth1, const Membership& truth2) {
  const int k = truth1.k;
  if (k > kMaxMatchK || est1.membership.k > kMaxMatchK) {
    throw std::invalid_argument("match_and_score: K > 8 is not supported by exhaustive matching");
  }
  if (truth2.k != k || est1.membership.k != k || est2.membership.k != k) {
    throw DataError("match_and_score: community counts differ (estimates " +
                    std::to_string(est1.membership.k) + "/" + std::to_string(est2.membership.k) +
                    ", truth " + std::to_string(truth1.k) + "/" + std::to_string(truth2.k) + ")");
  }
  if (est1.membership.labels.size() != truth1.labels.size() ||
      est2.membership.labels.size() != truth2.labels.size()) {
    throw DataError("match_and_score: node counts of estimate and truth differ");
  }

  const auto c1 = confusion(est1.membership, truth1, k);
  const auto c2 = confusion(est2.membership, truth2, k);
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);

  MatchScores best;
  std::size_t best_total = 0;
  std::size_t best1 = 0;
  std::size_t best2 = 0;
  bool first = true;
  do {
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    for (int e = 0; e < k; ++e) {
      const auto ue = static_cast<std::size_t>(e);
      const auto t = static_cast<std::size_t>(perm[ue]);
      n1 += c1[ue][t];
      n2 += c2[ue][t];
    }
    if (first || n1 + n2 > best_total) {
      first = false;
      best_total = n1 + n2;
      best1 = n1;
      best2 = n2;
      best.permutation = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  const std::size_t total1 = count_truth(truth1);
  const std::size_t total2 = count_truth(truth2);
  best.accuracy1 = total1 ? static_cast<double>(best1) / static_cast<double>(total1) : 0.0;
  best.accuracy2 = total2 ? static_cast<double>(best2) / static_cast<double>(total2) : 0.0;
  best.alignment = best.accuracy1 * best.accuracy2;
  best.assigned1 = count_assigned(est1.membership);
  best.assigned2 = count_assigned(est2.membership);
  best.empty1 = best.assigned1 == 0;
  best.empty2 = best.assigned2 == 0;
  if (best.empty1) best.accuracy1 = 0.0;
  if (best.empty2) best.accuracy2 = 0.0;
  return best;
}

std::string to_string(Algorithm a) {
  return a == Algorithm::kMultirank ? "multirank" : "greedy";
}

Algorithm parse_algorithm(const std::string& s) {
  if (s == "greedy") return Algorithm::kGreedy;
  if (s == "multirank") return Algorithm::kMultirank;
  throw ConfigError("algorithm: expected \"greedy\" or \"multirank\", got \"" + s + "\"");
}

FactorPair fit(Algorithm algorithm, const Matrix& c, const SmoothingOperator& s1,
               const SmoothingOperator& s2, const SolverConfig& cfg) {
  return algorithm == Algorithm::kMultirank ? sgpls_multirank(c, s1, s2, cfg)
                                            : sgpls_greedy(c, s1, s2, cfg);
}

std::size_t support_size(const Matrix& f) {
  std::size_t n = 0;
  for (Eigen::Index i = 0; i < f.rows(); ++i) {
    if (!f.row(i).isZero(0.0)) ++n;
  }
  return n;
}

Problem make_problem(const SimulatedProblem& sim) {
  return Problem{cross_product(sim.data), normalized_laplacian(sim.g1.graph),
                 normalized_laplacian(sim.g2.graph), sim.g1.membership, sim.g2.membership};
}

namespace {

struct PointOutcome {
  GridPointResult result;
  std::optional<FactorPair> fit;
};

PointOutcome evaluate_point(const Problem& p, const SolverConfig& cfg,
                            const std::map<double, SmoothingOperator>& ops1,
                            const std::map<double, SmoothingOperator>& ops2, Algorithm algorithm) {
  PointOutcome out;
  out.result.config = cfg;
  try {
    FactorPair fp = fit(algorithm, p.c, ops1.at(cfg.alpha1), ops2.at(cfg.alpha2), cfg);
    const auto e1 = extract_membership(fp.u_hat, std::nullopt, "U");
    const auto e2 = extract_membership(fp.v_hat, std::nullopt, "V");
    out.result.scores = match_and_score(e1, e2, p.truth1, p.truth2);
    out.result.objective = objective(fp.u_hat, fp.v_hat, p.c, cfg);
    out.result.inner = fp.inner;
    out.fit = std::move(fp);
  } catch (const std::exception& ex) {
    out.result.error = ex.what();
  }
  return out;
}

}  // namespace

TuneResult oracle_tune(const Problem& problem, const std::vector<SolverConfig>& grid,
                       const RunOptions& options) {
  if (grid.empty()) throw std::invalid_argument("oracle_tune: empty grid");

  std::map<double, SmoothingOperator> ops1;
  std::map<double, SmoothingOperator> ops2;
  for (const SolverConfig& cfg : grid) {
    if (!ops1.count(cfg.alpha1)) ops1.emplace(cfg.alpha1, SmoothingOperator(problem.laplacian1, cfg.alpha1));
    if (!ops2.count(cfg.alpha2)) ops2.emplace(cfg.alpha2, SmoothingOperator(problem.laplacian2, cfg.alpha2));
  }

  std::vector<PointOutcome> outcomes(grid.size());
  const std::size_t jobs = std::max(1u, options.jobs);
  for (std::size_t start = 0; start < grid.size(); start += jobs) {
    const std::size_t stop = std::min(grid.size(), start + jobs);
    if (jobs == 1) {
      outcomes[start] = evaluate_point(problem, grid[start], ops1, ops2, options.algorithm);
      continue;
    }
    std::vector<std::future<PointOutcome>> pending;
    for (std::size_t i = start; i < stop; ++i) {
      pending.push_back(std::async(std::launch::async, [&, i] {
        return evaluate_point(problem, grid[i], ops1, ops2, options.algorithm);
      }));
    }
    for (std::size_t i = start; i < stop; ++i) outcomes[i] = pending[i - start].get();
  }

  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& s = outcomes[i].result.scores;
    if (!s) continue;
    if (!best || s->mean_accuracy() > outcomes[*best].result.scores->mean_accuracy()) best = i;
  }
  if (!best) {
    throw std::runtime_error("oracle_tune: every grid point failed; first error: " +
                             outcomes.front().result.error.value_or("unknown"));
  }

  TuneResult r;
  r.best_index = *best;
  r.config = grid[*best];
  r.scores = *outcomes[*best].result.scores;
  r.objective = outcomes[*best].result.objective;
  r.fit = std::move(*outcomes[*best].fit);
  for (auto& o : outcomes) r.points.push_back(std::move(o.result));
  return r;
}

std::vector<SolverConfig> variant_grid(const std::string& variant, const GridSpec& spec,
                                       const SolverConfig& base, const Matrix& c) {
  const double scale = penalty_upper_bound(c);
  std::vector<double> fractions = spec.lambda_fractions;
  std::vector<double> alphas = spec.alphas;
  if (variant == "PLS") {
    fractions = {0.0};
    alphas = {0.0};
  } else if (variant == "SPLS") {
    alphas = {0.0};
  } else if (variant == "GPLS") {
    fractions = {0.0};
  } else if (variant != "SGPLS") {
    throw ConfigError("unknown variant \"" + variant + "\"");
  }
  if (fractions.empty() || alphas.empty()) {
    throw ConfigError("variant " + variant + " has an empty tuning grid");
  }

  std::vector<SolverConfig> grid;
  for (double f : fractions) {
    for (double a : alphas) {
      SolverConfig cfg = base;
      cfg.penalty1 = f > 0.0 ? PenaltySpec::l1(f * scale) : PenaltySpec::none();
      cfg.penalty2 = f > 0.0 ? PenaltySpec::l1(f * scale) : PenaltySpec::none();
      cfg.alpha1 = a;
      cfg.alpha2 = a;
      grid.push_back(cfg);
    }
  }
  return grid;
}

ComparisonReport run_variant_comparison(
    const Problem& problem, const std::map<std::string, std::vector<SolverConfig>>& grids,
    const std::vector<std::string>& variants, const RunOptions& options) {
  ComparisonReport report;
  const double scale = penalty_upper_bound(problem.c);
  for (const std::string& name : variants) {
    const auto it = grids.find(name);
    if (it == grids.end()) throw ConfigError("no tuning grid for variant " + name);
    const auto t0 = std::chrono::steady_clock::now();
    TuneResult tuned = oracle_tune(problem, it->second, options);
    const auto t1 = std::chrono::steady_clock::now();

    VariantRow row;
    row.variant = name;
    row.scores = tuned.scores;
    row.support1 = support_size(tuned.fit.u_hat);
    row.support2 = support_size(tuned.fit.v_hat);
    row.objective = tuned.objective;
    row.runtime_seconds = std::chrono::duration<double>(t1 - t0).count();
    row.config = tuned.config;
    row.lambda_fraction = scale > 0.0 ? tuned.config.penalty1.weight / scale : 0.0;
    row.fit = std::move(tuned.fit);
    for (const GridPointResult& pt : tuned.points) {
      row.inner_all.merge(pt.inner);
      if (pt.error) ++row.failed_points;
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace conga
