#include <iostream>

#include <CLI11.hpp>

#include "conga/cli/commands.hpp"
#include "conga/error.hpp"
#include "conga/version.hpp"

namespace conga::cli {

int run(int argc, char** argv) {
  CLI::App app{"Coarse graph alignment by sparse graph-smooth partial least squares", "conga"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  SimulateOptions sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Draw two SBM graphs and paired signals");
  simulate_cmd->add_option("config", sim.config, "TOML run configuration")->required();
  simulate_cmd->add_option("-o,--out", sim.out, "Output directory")->required();
  simulate_cmd->add_flag("--csv", sim.csv, "Also write the signal matrices as CSV");

  FitOptions fit;
  std::string algorithm = "greedy";
  auto* fit_cmd = app.add_subcommand("fit", "Estimate the factor matrices U and V");
  fit_cmd->add_option("data", fit.data, "Data directory written by simulate")->required();
  fit_cmd->add_option("-o,--out", fit.out, "Output directory")->required();
  fit_cmd->add_option("--algorithm", algorithm, "greedy or multirank")
      ->check(CLI::IsMember({"greedy", "multirank"}));
  fit_cmd->add_option("--k", fit.k, "Number of components");
  fit_cmd->add_option("--lambda1", fit.lambda1, "l1 weight on U");
  fit_cmd->add_option("--lambda2", fit.lambda2, "l1 weight on V");
  fit_cmd->add_option("--alpha1", fit.alpha1, "Smoothing strength on graph 1");
  fit_cmd->add_option("--alpha2", fit.alpha2, "Smoothing strength on graph 2");

  EvaluateOptions eval;
  std::string eval_out;
  auto* eval_cmd = app.add_subcommand("evaluate", "Score fitted factors against true memberships");
  eval_cmd->add_option("fit", eval.fit, "Directory holding U.csv and V.csv")->required();
  eval_cmd->add_option("truth", eval.truth, "Directory holding membership1/2.csv")->required();
  eval_cmd->add_option("-o,--out", eval_out, "Output directory (default: the fit directory)");

  BenchOptions bench;
  std::size_t seeds = 0;
  std::vector<std::string> variants;
  unsigned jobs = 0;
  std::string data;
  auto* bench_cmd = app.add_subcommand("bench", "Oracle-tuned PLS/SPLS/GPLS/SGPLS comparison");
  bench_cmd->add_option("config", bench.config, "TOML run configuration")->required();
  bench_cmd->add_option("-o,--out", bench.out, "Output directory")->required();
  bench_cmd->add_option("--seeds", seeds, "Override the number of seeds");
  bench_cmd->add_option("--variants", variants, "Subset of PLS SPLS GPLS SGPLS");
  bench_cmd->add_option("--data", data, "Benchmark one data directory instead of simulating");
  bench_cmd->add_option("--jobs", jobs, "Grid points evaluated concurrently");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*simulate_cmd) {
      cmd_simulate(sim);
    } else if (*fit_cmd) {
      fit.algorithm = parse_algorithm(algorithm);
      return cmd_fit(fit);
    } else if (*eval_cmd) {
      if (!eval_out.empty()) eval.out = eval_out;
      const MatchScores s = cmd_evaluate(eval);
      std::cout << "accuracy1 " << s.accuracy1 << " accuracy2 " << s.accuracy2 << "\n";
    } else if (*bench_cmd) {
      if (seeds > 0) bench.seeds = seeds;
      if (!variants.empty()) bench.variants = variants;
      if (jobs > 0) bench.jobs = jobs;
      if (!data.empty()) bench.data = data;
      const BenchResult r = cmd_bench(bench);
      for (const auto& [name, s] : r.summary) {
        std::cout << name << " median accuracy " << s.median_accuracy1 << " / "
                  << s.median_accuracy2 << "\n";
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "conga: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DataError& e) {
    std::cerr << "conga: data error: " << e.what() << "\n";
    return kExitData;
  } catch (const ConvergenceError& e) {
    std::cerr << "conga: solver did not converge: " << e.what() << "\n";
    return kExitConvergence;
  } catch (const std::exception& e) {
    std::cerr << "conga: error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace conga::cli
