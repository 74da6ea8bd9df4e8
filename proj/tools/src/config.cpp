#include "conga/cli/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "conga/error.hpp"
#include "conga/random.hpp"

namespace conga::cli {

namespace {

class Reader {
 public:
  Reader(const toml::table& root, std::string name) : root_(root), name_(std::move(name)) {}

  [[noreturn]] void fail(const toml::node* node, const std::string& field,
                         const std::string& msg) const {
    std::string where = name_;
    if (node != nullptr) where += ":" + std::to_string(node->source().begin.line);
    throw ConfigError(where + ": " + field + ": " + msg);
  }

  const toml::node* find(const std::string& dotted) const {
    return root_.at_path(dotted).node();
  }

  template <class T>
  T get(const std::string& field, T fallback) const {
    const toml::node* node = find(field);
    if (node == nullptr) return fallback;
    if constexpr (std::is_same_v<T, double>) {
      if (auto v = node->value<double>()) return *v;
      fail(node, field, "expected a number");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (auto v = node->value<std::string>()) return *v;
      fail(node, field, "expected a string");
    } else {
      auto v = node->value<std::int64_t>();
      if (!v) fail(node, field, "expected an integer");
      if (*v < 0) fail(node, field, "must be >= 0");
      return static_cast<T>(*v);
    }
  }

  std::vector<std::size_t> sizes(const std::string& field) const {
    const toml::node* node = find(field);
    if (node == nullptr) fail(nullptr, field, "missing required field");
    const toml::array* arr = node->as_array();
    if (arr == nullptr) fail(node, field, "expected an array of integers");
    std::vector<std::size_t> out;
    for (const toml::node& e : *arr) {
      auto v = e.value<std::int64_t>();
      if (!v || *v < 1) fail(node, field, "community sizes must be integers >= 1");
      out.push_back(static_cast<std::size_t>(*v));
    }
    if (out.empty()) fail(node, field, "at least one community is required");
    return out;
  }

  std::vector<double> numbers(const std::string& field, std::vector<double> fallback) const {
    const toml::node* node = find(field);
    if (node == nullptr) return fallback;
    const toml::array* arr = node->as_array();
    if (arr == nullptr) fail(node, field, "expected an array of numbers");
    std::vector<double> out;
    for (const toml::node& e : *arr) {
      auto v = e.value<double>();
      if (!v || *v < 0.0) fail(node, field, "entries must be numbers >= 0");
      out.push_back(*v);
    }
    if (out.empty()) fail(node, field, "must not be empty");
    return out;
  }

  std::vector<std::string> strings(const std::string& field,
                                   std::vector<std::string> fallback) const {
    const toml::node* node = find(field);
    if (node == nullptr) return fallback;
    const toml::array* arr = node->as_array();
    if (arr == nullptr) fail(node, field, "expected an array of strings");
    std::vector<std::string> out;
    for (const toml::node& e : *arr) {
      auto v = e.value<std::string>();
      if (!v) fail(node, field, "entries must be strings");
      out.push_back(*v);
    }
    return out;
  }

  /// Reruns a validator and rewrites its "<field>: ..." message with the
  /// location of that field.
  template <class F>
  void checked(F&& validate, const std::vector<std::pair<std::string, std::string>>& fields) const {
    try {
      validate();
    } catch (const ConfigError& e) {
      const std::string msg = e.what();
      for (const auto& [short_name, dotted] : fields) {
        if (msg.rfind(short_name + ":", 0) == 0) {
          fail(find(dotted), dotted, msg.substr(short_name.size() + 2));
        }
      }
      fail(nullptr, "config", msg);
    } catch (const std::invalid_argument& e) {
      fail(nullptr, "solver", e.what());
    }
  }

 private:
  const toml::table& root_;
  std::string name_;
};

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& name) {
  toml::table root;
  try {
    root = toml::parse(text, name);
  } catch (const toml::parse_error& e) {
    throw ConfigError(name + ":" + std::to_string(e.source().begin.line) + ": " +
                      std::string(e.description()));
  }
  const Reader r(root, name);
  RunConfig cfg;

  const std::string rng = r.get<std::string>("rng", std::string(kRngAlgorithm));
  if (rng != kRngAlgorithm) {
    r.fail(r.find("rng"), "rng", "only \"" + std::string(kRngAlgorithm) + "\" is supported");
  }

  SimulationConfig& sim = cfg.simulation;
  sim.seed = r.get<std::uint64_t>("seed", 0);
  sim.sizes1 = r.sizes("graph.sizes1");
  sim.sizes2 = r.sizes("graph.sizes2");
  sim.p_intra = r.get<double>("graph.p_intra", sim.p_intra);
  sim.q_inter = r.get<double>("graph.q_inter", sim.q_inter);
  sim.m = r.get<std::size_t>("signals.m", sim.m);
  sim.s = r.get<double>("signals.s", sim.s);
  sim.energy = r.get<double>("signals.energy", sim.energy);
  sim.sigma = r.get<double>("signals.sigma", sim.sigma);
  const std::string convention = r.get<std::string>("signals.energy_convention", "squared_norm");
  try {
    sim.energy_convention = parse_energy_convention(convention);
  } catch (const ConfigError&) {
    r.fail(r.find("signals.energy_convention"), "signals.energy_convention",
           "expected \"squared_norm\" or \"norm\"");
  }

  if (const char* env = std::getenv("CONGA_SEED"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == nullptr || *end != '\0') throw ConfigError("CONGA_SEED: expected an unsigned integer");
    sim.seed = v;
    cfg.seed_overridden = true;
  }

  r.checked([&] { sim.validate(); },
            {{"sizes1", "graph.sizes1"},
             {"sizes2", "graph.sizes2"},
             {"p_intra", "graph.p_intra"},
             {"q_inter", "graph.q_inter"},
             {"m", "signals.m"},
             {"s", "signals.s"},
             {"energy", "signals.energy"},
             {"sigma", "signals.sigma"}});

  SolverConfig& sol = cfg.solver;
  try {
    cfg.algorithm = parse_algorithm(r.get<std::string>("solver.algorithm", "greedy"));
  } catch (const ConfigError&) {
    r.fail(r.find("solver.algorithm"), "solver.algorithm", "expected \"greedy\" or \"multirank\"");
  }
  sol.k = static_cast<Eigen::Index>(r.get<std::size_t>("solver.k", sim.k()));
  sol.inner_tol = r.get<double>("solver.inner_tol", sol.inner_tol);
  sol.outer_tol = r.get<double>("solver.outer_tol", sol.outer_tol);
  sol.max_inner = r.get<long>("solver.max_inner", sol.max_inner);
  sol.max_outer = r.get<long>("solver.max_outer", sol.max_outer);
  sol.madmm_rho = r.get<double>("solver.madmm_rho", sol.madmm_rho);
  r.checked([&] { sol.validate(); }, {});

  BenchSettings& b = cfg.bench;
  b.seeds = r.get<std::size_t>("bench.seeds", b.seeds);
  if (b.seeds < 1) r.fail(r.find("bench.seeds"), "bench.seeds", "must be >= 1");
  b.variants = r.strings("bench.variants", b.variants);
  for (const auto& v : b.variants) {
    if (std::find(kVariants.begin(), kVariants.end(), v) == kVariants.end()) {
      r.fail(r.find("bench.variants"), "bench.variants", "unknown variant \"" + v + "\"");
    }
  }
  if (b.variants.empty()) r.fail(r.find("bench.variants"), "bench.variants", "must not be empty");
  b.grid.lambda_fractions = r.numbers("bench.lambda_fractions", b.grid.lambda_fractions);
  b.grid.alphas = r.numbers("bench.alphas", b.grid.alphas);
  b.jobs = r.get<unsigned>("bench.jobs", b.jobs);
  if (b.jobs < 1) r.fail(r.find("bench.jobs"), "bench.jobs", "must be >= 1");
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  RunConfig cfg = parse_config(ss.str(), path.string());
  cfg.source = path;
  return cfg;
}

}  // namespace conga::cli
