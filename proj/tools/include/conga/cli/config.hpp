#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "conga/eval.hpp"
#include "conga/signals.hpp"
#include "conga/solver.hpp"

namespace conga::cli {

struct BenchSettings {
  std::size_t seeds = 10;
  std::vector<std::string> variants = kVariants;
  GridSpec grid{{0.025, 0.05, 0.1, 0.2, 0.4}, {0.1, 0.3, 1.0, 3.0, 10.0}};
  unsigned jobs = 1;
};

/// Everything a TOML run configuration describes.
struct RunConfig {
  SimulationConfig simulation;
  SolverConfig solver;
  Algorithm algorithm = Algorithm::kGreedy;
  BenchSettings bench;
  std::filesystem::path source;
  /// Set when CONGA_SEED replaced the file's seed.
  bool seed_overridden = false;
};

/// Parses and validates a run configuration. Errors are ConfigError
/// messages of the form "<file>:<line>: <field>: <problem>". The CONGA_SEED
/// environment variable, when set, overrides `seed`.
RunConfig load_config(const std::filesystem::path& path);

/// Same, from TOML text; `name` labels diagnostics.
RunConfig parse_config(const std::string& text, const std::string& name);

}  // namespace conga::cli
