#include "conga/cli/commands.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <fstream>
#include <iostream>

#include <nlohmann/json.hpp>

#include "conga/cli/manifest.hpp"
#include "conga/error.hpp"
#include "conga/io.hpp"

namespace conga::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError(dir.string() + ": cannot create output directory: " + ec.message());
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw DataError(path.string() + ": cannot write");
  out << j.dump(2) << "\n";
}

fs::path require(const fs::path& p) {
  if (!fs::exists(p)) throw DataError(p.string() + ": missing file");
  return p;
}

Eigen::MatrixXd read_signals(const fs::path& dir, const std::string& stem, fs::path& used) {
  const fs::path bin = dir / (stem + ".bin");
  const fs::path csv = dir / (stem + ".csv");
  if (fs::exists(bin)) {
    used = bin;
    return io::read_matrix_binary(bin);
  }
  if (fs::exists(csv)) {
    used = csv;
    return io::read_matrix_csv(csv);
  }
  throw DataError(bin.string() + ": missing file (no " + stem + ".csv either)");
}

json simulation_json(const SimulationConfig& s) {
  return {{"sizes1", s.sizes1},
          {"sizes2", s.sizes2},
          {"p_intra", s.p_intra},
          {"q_inter", s.q_inter},
          {"m", s.m},
          {"s", s.s},
          {"energy", s.energy},
          {"energy_convention", to_string(s.energy_convention)},
          {"sigma", s.sigma},
          {"seed", s.seed}};
}

json solver_json(const SolverConfig& c) {
  return {{"k", c.k},
          {"lambda1", c.penalty1.inactive() ? 0.0 : c.penalty1.weight},
          {"lambda2", c.penalty2.inactive() ? 0.0 : c.penalty2.weight},
          {"alpha1", c.alpha1},
          {"alpha2", c.alpha2},
          {"inner_tol", c.inner_tol},
          {"outer_tol", c.outer_tol},
          {"max_inner", c.max_inner},
          {"max_outer", c.max_outer},
          {"madmm_rho", c.madmm_rho}};
}

json config_json(const RunConfig& cfg) {
  return {{"source", cfg.source.string()},
          {"rng", kRngAlgorithm},
          {"seed_from_env", cfg.seed_overridden},
          {"simulation", simulation_json(cfg.simulation)},
          {"solver", solver_json(cfg.solver)},
          {"algorithm", to_string(cfg.algorithm)},
          {"bench",
           {{"seeds", cfg.bench.seeds},
            {"variants", cfg.bench.variants},
            {"lambda_fractions", cfg.bench.grid.lambda_fractions},
            {"alphas", cfg.bench.grid.alphas},
            {"jobs", cfg.bench.jobs}}}};
}

json vec_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json inner_json(const InnerStats& s) {
  return {{"loops", s.loops},
          {"steps", s.steps},
          {"nonmonotone_steps", s.nonmonotone_steps},
          {"worst_relative_increase", s.steps > 0 ? json(s.worst_relative_increase) : json(nullptr)}};
}

json scores_json(const MatchScores& s) {
  return {{"accuracy1", s.accuracy1},
          {"accuracy2", s.accuracy2},
          {"alignment", s.alignment},
          {"permutation", s.permutation},
          {"assigned1", s.assigned1},
          {"assigned2", s.assigned2},
          {"empty1", s.empty1},
          {"empty2", s.empty2}};
}

json fit_json(const FactorPair& fp, const SolverConfig& cfg, Algorithm algorithm, double obj) {
  std::vector<bool> conv(fp.converged.begin(), fp.converged.end());
  return {{"algorithm", to_string(algorithm)},
          {"solver", solver_json(cfg)},
          {"objective", obj},
          {"components", fp.components},
          {"component_values", fp.component_values},
          {"s_norms_u", vec_json(fp.s_norms_u)},
          {"s_norms_v", vec_json(fp.s_norms_v)},
          {"converged", conv},
          {"objective_trace", fp.objective_trace},
          {"outer_iterations", fp.outer_iterations},
          {"inner", inner_json(fp.inner)},
          {"warning", fp.warning ? json(*fp.warning) : json(nullptr)}};
}

}  // namespace

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

DataDir load_data_dir(const fs::path& dir, bool with_truth) {
  if (!fs::is_directory(dir)) throw DataError(dir.string() + ": not a directory");
  DataDir d{io::read_edge_list(require(dir / "graph1.tsv")),
            io::read_edge_list(require(dir / "graph2.tsv")),
            {},
            {},
            {},
            {dir / "graph1.tsv", dir / "graph2.tsv"}};
  fs::path f1;
  fs::path f2;
  d.data.x1 = read_signals(dir, "x1", f1);
  d.data.x2 = read_signals(dir, "x2", f2);
  d.files.push_back(f1);
  d.files.push_back(f2);

  if (d.data.x1.cols() != d.g1.node_count()) {
    throw DataError(f1.string() + ": has " + std::to_string(d.data.x1.cols()) +
                    " columns but graph1.tsv has " + std::to_string(d.g1.node_count()) + " nodes");
  }
  if (d.data.x2.cols() != d.g2.node_count()) {
    throw DataError(f2.string() + ": has " + std::to_string(d.data.x2.cols()) +
                    " columns but graph2.tsv has " + std::to_string(d.g2.node_count()) + " nodes");
  }
  if (d.data.x1.rows() != d.data.x2.rows()) {
    throw DataError(f2.string() + ": has " + std::to_string(d.data.x2.rows()) + " samples but " +
                    f1.filename().string() + " has " + std::to_string(d.data.x1.rows()));
  }
  d.data.validate();

  if (with_truth) {
    const fs::path m1 = require(dir / "membership1.csv");
    const fs::path m2 = require(dir / "membership2.csv");
    d.truth1 = io::read_membership(m1);
    d.truth2 = io::read_membership(m2);
    if (d.truth1->node_count() != d.g1.node_count()) {
      throw DataError(m1.string() + ": node count does not match graph1.tsv");
    }
    if (d.truth2->node_count() != d.g2.node_count()) {
      throw DataError(m2.string() + ": node count does not match graph2.tsv");
    }
    d.files.push_back(m1);
    d.files.push_back(m2);
  }
  return d;
}

void cmd_simulate(const SimulateOptions& opt) {
  const RunConfig cfg = load_config(opt.config);
  const SimulatedProblem sim = simulate(cfg.simulation);

  ensure_dir(opt.out);
  RunManifest manifest("simulate", opt.out);
  manifest.set_config(config_json(cfg));
  manifest.set_seed(cfg.simulation.seed);
  manifest.add_input(opt.config);

  std::vector<std::pair<std::string, std::function<void(const fs::path&)>>> files = {
      {"graph1.tsv", [&](const fs::path& p) { io::write_edge_list(p, sim.g1.graph); }},
      {"graph2.tsv", [&](const fs::path& p) { io::write_edge_list(p, sim.g2.graph); }},
      {"membership1.csv", [&](const fs::path& p) { io::write_membership(p, sim.g1.membership); }},
      {"membership2.csv", [&](const fs::path& p) { io::write_membership(p, sim.g2.membership); }},
      {"x1.bin", [&](const fs::path& p) { io::write_matrix_binary(p, sim.data.x1); }},
      {"x2.bin", [&](const fs::path& p) { io::write_matrix_binary(p, sim.data.x2); }},
  };
  if (opt.csv) {
    files.emplace_back("x1.csv", [&](const fs::path& p) { io::write_matrix_csv(p, sim.data.x1); });
    files.emplace_back("x2.csv", [&](const fs::path& p) { io::write_matrix_csv(p, sim.data.x2); });
  }
  for (const auto& [name, writer] : files) {
    writer(opt.out / name);
    manifest.add_output(name);
  }
  manifest.write();
}

int cmd_fit(const FitOptions& opt) {
  const DataDir d = load_data_dir(opt.data, false);

  SolverConfig cfg;
  cfg.k = opt.k;
  cfg.penalty1 = PenaltySpec::l1(opt.lambda1);
  cfg.penalty2 = PenaltySpec::l1(opt.lambda2);
  cfg.alpha1 = opt.alpha1;
  cfg.alpha2 = opt.alpha2;
  try {
    cfg.validate();
    cfg.penalty1.validate(d.g1.node_count());
    cfg.penalty2.validate(d.g2.node_count());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const Eigen::Index limit = std::min(d.g1.node_count(), d.g2.node_count());
  if (cfg.k > limit) {
    throw ConfigError("k: " + std::to_string(cfg.k) + " exceeds the smaller graph (" +
                      std::to_string(limit) + " nodes)");
  }

  const Matrix c = cross_product(d.data);
  const SmoothingOperator s1(normalized_laplacian(d.g1), cfg.alpha1);
  const SmoothingOperator s2(normalized_laplacian(d.g2), cfg.alpha2);
  const FactorPair fp = fit(opt.algorithm, c, s1, s2, cfg);

  ensure_dir(opt.out);
  RunManifest manifest("fit", opt.out);
  manifest.set_config(solver_json(cfg));
  for (const fs::path& f : d.files) manifest.add_input(f);
  io::write_matrix_csv(opt.out / "U.csv", fp.u_hat);
  io::write_matrix_csv(opt.out / "V.csv", fp.v_hat);
  write_json(opt.out / "fit.json", fit_json(fp, cfg, opt.algorithm, objective(fp.u_hat, fp.v_hat, c, cfg)));
  for (const char* name : {"U.csv", "V.csv", "fit.json"}) manifest.add_output(name);
  manifest.write();

  if (!fp.all_converged()) {
    std::cerr << "conga: warning: some components did not converge\n";
    return kExitConvergence;
  }
  return kExitOk;
}

MatchScores cmd_evaluate(const EvaluateOptions& opt) {
  const fs::path u_path = require(opt.fit / "U.csv");
  const fs::path v_path = require(opt.fit / "V.csv");
  const fs::path m1_path = require(opt.truth / "membership1.csv");
  const fs::path m2_path = require(opt.truth / "membership2.csv");
  const Eigen::MatrixXd u = io::read_matrix_csv(u_path);
  const Eigen::MatrixXd v = io::read_matrix_csv(v_path);
  const Membership t1 = io::read_membership(m1_path);
  const Membership t2 = io::read_membership(m2_path);

  if (u.cols() != v.cols()) {
    throw DataError(v_path.string() + ": has " + std::to_string(v.cols()) +
                    " columns but U.csv has " + std::to_string(u.cols()));
  }
  if (u.cols() != t1.k || u.cols() != t2.k) {
    throw DataError(u_path.string() + ": K = " + std::to_string(u.cols()) +
                    " but the truth memberships have K = " + std::to_string(t1.k) + " and " +
                    std::to_string(t2.k));
  }
  if (u.rows() != t1.node_count()) throw DataError(u_path.string() + ": row count does not match membership1.csv");
  if (v.rows() != t2.node_count()) throw DataError(v_path.string() + ": row count does not match membership2.csv");

  const MatchScores scores = match_and_score(extract_membership(u, std::nullopt, "U"),
                                             extract_membership(v, std::nullopt, "V"), t1, t2);
  const fs::path out = opt.out.value_or(opt.fit);
  ensure_dir(out);
  RunManifest manifest("evaluate", out);
  for (const fs::path& f : {u_path, v_path, m1_path, m2_path}) manifest.add_input(f);
  write_json(out / "scores.json", scores_json(scores));
  manifest.add_output("scores.json");
  manifest.write();
  return scores;
}

BenchResult cmd_bench(const BenchOptions& opt) {
  BenchResult result;
  result.config = load_config(opt.config);
  RunConfig& cfg = result.config;
  if (opt.seeds) cfg.bench.seeds = *opt.seeds;
  if (opt.variants) cfg.bench.variants = *opt.variants;
  if (opt.jobs) cfg.bench.jobs = *opt.jobs;
  if (cfg.bench.seeds < 1) throw ConfigError("seeds: must be >= 1");
  for (const auto& v : cfg.bench.variants) {
    if (std::find(kVariants.begin(), kVariants.end(), v) == kVariants.end()) {
      throw ConfigError("variants: unknown variant \"" + v + "\"");
    }
  }

  std::optional<DataDir> data;
  if (opt.data) data = load_data_dir(*opt.data, true);
  const std::size_t n_seeds = data ? 1 : cfg.bench.seeds;
  const RunOptions run_opts{cfg.algorithm, std::max(1u, cfg.bench.jobs)};

  for (std::size_t i = 0; i < n_seeds; ++i) {
    BenchSeed bs;
    bs.seed = cfg.simulation.seed + i;
    Problem problem;
    if (data) {
      problem = Problem{cross_product(data->data), normalized_laplacian(data->g1),
                        normalized_laplacian(data->g2), *data->truth1, *data->truth2};
    } else {
      SimulationConfig sc = cfg.simulation;
      sc.seed = bs.seed;
      problem = make_problem(simulate(sc));
    }
    SolverConfig base = cfg.solver;
    base.k = problem.truth1.k;
    std::map<std::string, std::vector<SolverConfig>> grids;
    for (const auto& v : cfg.bench.variants) grids[v] = variant_grid(v, cfg.bench.grid, base, problem.c);
    bs.report = run_variant_comparison(problem, grids, cfg.bench.variants, run_opts);
    result.seeds.push_back(std::move(bs));
  }

  for (const auto& v : cfg.bench.variants) {
    std::vector<double> a1, a2, al;
    for (const BenchSeed& bs : result.seeds) {
      for (const VariantRow& row : bs.report.rows) {
        if (row.variant != v) continue;
        a1.push_back(row.scores.accuracy1);
        a2.push_back(row.scores.accuracy2);
        al.push_back(row.scores.alignment);
      }
    }
    result.summary[v] = VariantSummary{median(a1), median(a2), median(al)};
  }

  ensure_dir(opt.out);
  RunManifest manifest("bench", opt.out);
  manifest.set_config(config_json(cfg));
  manifest.set_seed(cfg.simulation.seed);
  manifest.add_input(opt.config);
  if (data) {
    for (const fs::path& f : data->files) manifest.add_input(f);
  }

  std::ofstream csv(opt.out / "report.csv");
  if (!csv) throw DataError((opt.out / "report.csv").string() + ": cannot write");
  csv << "variant,seed,lambda_fraction,lambda1,lambda2,alpha1,alpha2,accuracy1,accuracy2,"
         "alignment,support1,support2,objective\n";
  json rows = json::array();
  for (const BenchSeed& bs : result.seeds) {
    for (const VariantRow& row : bs.report.rows) {
      const double l1 = row.config.penalty1.inactive() ? 0.0 : row.config.penalty1.weight;
      const double l2 = row.config.penalty2.inactive() ? 0.0 : row.config.penalty2.weight;
      csv << row.variant << ',' << bs.seed << ',' << io::format_double(row.lambda_fraction) << ','
          << io::format_double(l1) << ',' << io::format_double(l2) << ','
          << io::format_double(row.config.alpha1) << ',' << io::format_double(row.config.alpha2)
          << ',' << io::format_double(row.scores.accuracy1) << ','
          << io::format_double(row.scores.accuracy2) << ','
          << io::format_double(row.scores.alignment) << ',' << row.support1 << ','
          << row.support2 << ',' << io::format_double(row.objective) << '\n';
      rows.push_back({{"variant", row.variant},
                      {"seed", bs.seed},
                      {"lambda_fraction", row.lambda_fraction},
                      {"solver", solver_json(row.config)},
                      {"scores", scores_json(row.scores)},
                      {"support1", row.support1},
                      {"support2", row.support2},
                      {"objective", row.objective},
                      {"components", row.fit.components},
                      {"converged", row.fit.all_converged()},
                      {"failed_grid_points", row.failed_points},
                      {"inner_all_grid_points", inner_json(row.inner_all)},
                      {"runtime_seconds", row.runtime_seconds}});
    }
  }
  json summary = json::object();
  for (const auto& v : cfg.bench.variants) {
    const VariantSummary& s = result.summary.at(v);
    csv << v << ",median,,,,,," << io::format_double(s.median_accuracy1) << ','
        << io::format_double(s.median_accuracy2) << ',' << io::format_double(s.median_alignment)
        << ",,,\n";
    summary[v] = {{"median_accuracy1", s.median_accuracy1},
                  {"median_accuracy2", s.median_accuracy2},
                  {"median_alignment", s.median_alignment}};
  }
  csv.close();
  manifest.add_output("report.csv");

  const SimulationConfig& sc = cfg.simulation;
  const SnrReport snr1 = signal_to_noise(sc, static_cast<Eigen::Index>(std::accumulate(sc.sizes1.begin(), sc.sizes1.end(), std::size_t{0})));
  const SnrReport snr2 = signal_to_noise(sc, static_cast<Eigen::Index>(std::accumulate(sc.sizes2.begin(), sc.sizes2.end(), std::size_t{0})));
  write_json(opt.out / "report.json",
             {{"config", config_json(cfg)},
              {"source", data ? json(opt.data->string()) : json("simulated")},
              {"snr",
               {{"graph1", {{"energy", snr1.energy}, {"amplitude", snr1.amplitude}}},
                {"graph2", {{"energy", snr2.energy}, {"amplitude", snr2.amplitude}}}}},
              {"rows", rows},
              {"summary", summary}});
  manifest.add_output("report.json");

  // Heatmaps and factor matrices come from the first seed.
  for (const VariantRow& row : result.seeds.front().report.rows) {
    const std::pair<const char*, const Matrix*> sides[] = {{"U", &row.fit.u_hat}, {"V", &row.fit.v_hat}};
    for (const auto& [side, m] : sides) {
      const std::string stem = row.variant + "_" + side;
      io::write_pgm(opt.out / (stem + ".pgm"), *m);
      io::write_matrix_csv(opt.out / (stem + ".csv"), *m);
      manifest.add_output(stem + ".pgm");
      manifest.add_output(stem + ".csv");
    }
  }
  manifest.write();
  return result;
}

}  // namespace conga::cli
