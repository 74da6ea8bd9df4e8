#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "conga/cli/config.hpp"
#include "conga/eval.hpp"

namespace conga::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitData = 3,
  kExitConvergence = 4,
};

/// Graphs, signals and (optionally) true memberships read from a data
/// directory laid out by `simulate`.
struct DataDir {
  Graph g1;
  Graph g2;
  SignalDataset data;
  std::optional<Membership> truth1;
  std::optional<Membership> truth2;
  std::vector<std::filesystem::path> files;
};

/// Reads graph1.tsv, graph2.tsv and x1/x2 (.bin preferred, else .csv), plus
/// membership1.csv and membership2.csv when `with_truth`. Throws DataError on
/// missing files or inconsistent shapes.
DataDir load_data_dir(const std::filesystem::path& dir, bool with_truth);

struct SimulateOptions {
  std::filesystem::path config;
  std::filesystem::path out;
  bool csv = false;
};

void cmd_simulate(const SimulateOptions& opt);

struct FitOptions {
  std::filesystem::path data;
  std::filesystem::path out;
  Algorithm algorithm = Algorithm::kGreedy;
  long k = 4;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
};

/// Writes U.csv, V.csv, fit.json and the manifest. Returns kExitConvergence
/// when some greedy component hit its iteration cap (outputs are still
/// written), kExitOk otherwise.
int cmd_fit(const FitOptions& opt);

struct EvaluateOptions {
  std::filesystem::path fit;
  std::filesystem::path truth;
  /// Defaults to the fit directory.
  std::optional<std::filesystem::path> out;
};

MatchScores cmd_evaluate(const EvaluateOptions& opt);

struct BenchOptions {
  std::filesystem::path config;
  std::filesystem::path out;
  /// Use this data directory (with memberships) instead of simulating.
  std::optional<std::filesystem::path> data;
  std::optional<std::size_t> seeds;
  std::optional<std::vector<std::string>> variants;
  std::optional<unsigned> jobs;
};

struct BenchSeed {
  std::uint64_t seed = 0;
  ComparisonReport report;
};

struct VariantSummary {
  double median_accuracy1 = 0.0;
  double median_accuracy2 = 0.0;
  double median_alignment = 0.0;
};

struct BenchResult {
  RunConfig config;
  std::vector<BenchSeed> seeds;
  std::map<std::string, VariantSummary> summary;
};

/// Oracle-tuned four-way comparison over the configured seeds (seed, seed+1,
/// ...). Writes report.json, report.csv, one PGM heatmap and one factor CSV
/// per (variant, graph) from the first seed, and the manifest.
BenchResult cmd_bench(const BenchOptions& opt);

double median(std::vector<double> v);

/// Parses argv, dispatches, and maps errors onto exit codes.
int run(int argc, char** argv);

}  // namespace conga::cli
