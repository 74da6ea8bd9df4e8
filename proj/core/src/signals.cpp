#include "conga/signals.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "conga/error.hpp"

namespace conga {

std::string to_string(EnergyConvention c) {
  return c == EnergyConvention::kNorm ? "norm" : "squared_norm";
}

EnergyConvention parse_energy_convention(const std::string& s) {
  if (s == "squared_norm") return EnergyConvention::kSquaredNorm;
  if (s == "norm") return EnergyConvention::kNorm;
  throw ConfigError("energy_convention: expected \"squared_norm\" or \"norm\", got \"" + s +
                    "\"");
}

void SimulationConfig::validate() const {
  if (sizes1.empty()) throw ConfigError("sizes1: at least one community is required");
  if (sizes1.size() != sizes2.size()) {
    throw ConfigError("sizes2: must list as many communities as sizes1 (" +
                      std::to_string(sizes1.size()) + ")");
  }
  for (std::size_t v : sizes1) {
    if (v == 0) throw ConfigError("sizes1: community sizes must be >= 1");
  }
  for (std::size_t v : sizes2) {
    if (v == 0) throw ConfigError("sizes2: community sizes must be >= 1");
  }
  if (!(p_intra >= 0.0 && p_intra <= 1.0)) throw ConfigError("p_intra: must lie in [0, 1]");
  if (!(q_inter >= 0.0 && q_inter <= p_intra)) {
    throw ConfigError("q_inter: must lie in [0, p_intra]");
  }
  if (m < 1) throw ConfigError("m: at least one sample is required");
  if (!(s >= 0.0 && s <= 1.0)) throw ConfigError("s: must lie in [0, 1]");
  if (!(energy > 0.0) || !std::isfinite(energy)) throw ConfigError("energy: must be > 0");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ConfigError("sigma: must be >= 0");
}

void SignalDataset::validate() const {
  if (x1.rows() < 1 || x1.rows() != x2.rows()) {
    throw DataError("signal matrices must share a sample count >= 1 (got " +
                    std::to_string(x1.rows()) + " and " + std::to_string(x2.rows()) + ")");
  }
  if (!x1.allFinite() || !x2.allFinite()) throw DataError("signal matrices contain non-finite values");
}

SnrReport signal_to_noise(const SimulationConfig& cfg, Eigen::Index n) {
  const double clean_norm =
      cfg.energy_convention == EnergyConvention::kNorm ? cfg.energy : std::sqrt(cfg.energy);
  SnrReport r;
  if (cfg.sigma == 0.0 || n == 0) {
    r.energy = r.amplitude = std::numeric_limits<double>::infinity();
    return r;
  }
  const double nd = static_cast<double>(n);
  r.energy = clean_norm * clean_norm / (cfg.sigma * cfg.sigma * nd);
  r.amplitude = clean_norm / (cfg.sigma * std::sqrt(nd));
  return r;
}

namespace {

std::vector<std::vector<Eigen::Index>> members_by_community(const Membership& m) {
  std::vector<std::vector<Eigen::Index>> out(static_cast<std::size_t>(m.k));
  for (std::size_t i = 0; i < m.labels.size(); ++i) {
    const int c = m.labels[i];
    if (c >= 0 && c < m.k) out[static_cast<std::size_t>(c)].push_back(static_cast<Eigen::Index>(i));
  }
  return out;
}

void place_signal(Eigen::MatrixXd& x, Eigen::Index row, const std::vector<Eigen::Index>& nodes,
                  const SimulationConfig& cfg, Rng& rng) {
  std::vector<Eigen::Index> kept;
  kept.reserve(nodes.size());
  for (Eigen::Index node : nodes) {
    if (draw_bernoulli(rng, cfg.s)) kept.push_back(node);
  }
  if (kept.empty()) return;
  const double count = static_cast<double>(kept.size());
  const double amplitude = cfg.energy_convention == EnergyConvention::kNorm
                               ? cfg.energy / std::sqrt(count)
                               : std::sqrt(cfg.energy / count);
  for (Eigen::Index node : kept) x(row, node) = amplitude;
}

}  // namespace

SignalDataset generate_paired_signals(const Membership& mem1, const Membership& mem2,
                                      const SimulationConfig& cfg, Rng& rng) {
  if (mem1.k != mem2.k || mem1.k < 1) {
    throw std::invalid_argument("generate_paired_signals: community counts differ (" +
                                std::to_string(mem1.k) + " vs " + std::to_string(mem2.k) + ")");
  }
  cfg.validate();
  const auto by1 = members_by_community(mem1);
  const auto by2 = members_by_community(mem2);
  const auto m = static_cast<Eigen::Index>(cfg.m);
  const Eigen::Index n1 = mem1.node_count();
  const Eigen::Index n2 = mem2.node_count();

  SignalDataset d;
  d.x1 = Eigen::MatrixXd::Zero(m, n1);
  d.x2 = Eigen::MatrixXd::Zero(m, n2);
  for (Eigen::Index t = 0; t < m; ++t) {
    const std::size_t k = draw_index(rng, static_cast<std::size_t>(mem1.k));
    place_signal(d.x1, t, by1[k], cfg, rng);
    place_signal(d.x2, t, by2[k], cfg, rng);
    if (cfg.sigma > 0.0) {
      for (Eigen::Index i = 0; i < n1; ++i) d.x1(t, i) += draw_normal(rng, 0.0, cfg.sigma);
      for (Eigen::Index i = 0; i < n2; ++i) d.x2(t, i) += draw_normal(rng, 0.0, cfg.sigma);
    }
  }
  d.provenance = cfg;
  return d;
}

SignalDataset generate_paired_signals(const Membership& mem1, const Membership& mem2,
                                      const SimulationConfig& cfg) {
  Rng rng = make_stream(cfg.seed, 3);
  return generate_paired_signals(mem1, mem2, cfg, rng);
}

Eigen::MatrixXd cross_product(const SignalDataset& d) {
  if (d.x1.rows() != d.x2.rows()) {
    throw DataError("cross_product: signal matrices have different sample counts");
  }
  return d.x1.transpose() * d.x2;
}

SimulatedProblem simulate(const SimulationConfig& cfg) {
  cfg.validate();
  Rng r1 = make_stream(cfg.seed, 1);
  Rng r2 = make_stream(cfg.seed, 2);
  SbmGraph g1 = sbm_generate(cfg.sizes1, cfg.p_intra, cfg.q_inter, r1);
  SbmGraph g2 = sbm_generate(cfg.sizes2, cfg.p_intra, cfg.q_inter, r2);
  SignalDataset data = generate_paired_signals(g1.membership, g2.membership, cfg);
  return SimulatedProblem{std::move(g1), std::move(g2), std::move(data)};
}

}  // namespace conga
