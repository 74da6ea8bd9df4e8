#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "conga/graphs.hpp"
#include "conga/random.hpp"

namespace conga {

/// How `SimulationConfig::energy` is measured on a clean signal.
enum class EnergyConvention {
  kSquaredNorm,  ///< ||x||_2^2 == energy
  kNorm,         ///< ||x||_2 == energy
};

std::string to_string(EnergyConvention c);
/// Accepts "squared_norm" and "norm"; throws ConfigError otherwise.
EnergyConvention parse_energy_convention(const std::string& s);

/// Generative description of a two-graph benchmark instance.
struct SimulationConfig {
  std::vector<std::size_t> sizes1;
  std::vector<std::size_t> sizes2;
  double p_intra = 0.95;
  double q_inter = 0.2;
  std::size_t m = 1000;
  double s = 0.8;
  double energy = 2.0;
  EnergyConvention energy_convention = EnergyConvention::kSquaredNorm;
  double sigma = 1.0;
  std::uint64_t seed = 0;

  std::size_t k() const { return sizes1.size(); }

  /// Throws ConfigError naming the first offending field.
  void validate() const;
};

/// Paired signals observed on two graphs: row t of x1 and row t of x2 are
/// the t-th sample.
struct SignalDataset {
  Eigen::MatrixXd x1;
  Eigen::MatrixXd x2;
  std::optional<SimulationConfig> provenance;

  Eigen::Index samples() const { return x1.rows(); }

  /// Throws DataError unless both matrices share a row count >= 1 and are
  /// finite.
  void validate() const;
};

/// Per-sample signal-to-noise ratios of one graph under a configuration.
/// `energy` compares mean clean energy with expected noise energy
/// (sigma^2 n); `amplitude` compares the clean norm with sigma sqrt(n).
struct SnrReport {
  double energy = 0.0;
  double amplitude = 0.0;
};

SnrReport signal_to_noise(const SimulationConfig& cfg, Eigen::Index n);

/// For each sample: one community k is drawn uniformly; in each graph every
/// node of community k is kept with probability s and the clean energy is
/// split evenly over the kept nodes; IID N(0, sigma^2) noise is then added
/// to every node of both graphs. A community with no kept node yields a
/// pure-noise row for that graph.
SignalDataset generate_paired_signals(const Membership& mem1, const Membership& mem2,
                                      const SimulationConfig& cfg, Rng& rng);

/// Same as above on the stream make_stream(cfg.seed, 3).
SignalDataset generate_paired_signals(const Membership& mem1, const Membership& mem2,
                                      const SimulationConfig& cfg);

/// C = X1' X2, of shape n1 x n2.
Eigen::MatrixXd cross_product(const SignalDataset& d);

/// A complete simulated instance: both graphs, their memberships and the
/// paired signals.
struct SimulatedProblem {
  SbmGraph g1;
  SbmGraph g2;
  SignalDataset data;
};

/// Graph 1, graph 2 and the signals use streams 1, 2 and 3 of cfg.seed.
SimulatedProblem simulate(const SimulationConfig& cfg);

}  // namespace conga
