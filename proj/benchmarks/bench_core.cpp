#include <benchmark/benchmark.h>

#include <random>

#include "conga/eval.hpp"

namespace {

using namespace conga;

SimulatedProblem paper_instance() {
  SimulationConfig sc;
  sc.sizes1 = {25, 25, 25, 25};
  sc.sizes2 = {40, 30, 25, 55};
  sc.energy_convention = EnergyConvention::kNorm;
  sc.seed = 20210601;
  return simulate(sc);
}

const Problem& paper_problem() {
  static const Problem p = make_problem(paper_instance());
  return p;
}

Matrix random_matrix(Eigen::Index rows, Eigen::Index cols) {
  std::mt19937_64 gen(1);
  std::normal_distribution<double> d;
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = d(gen);
  }
  return m;
}

void BM_LeadingSingularPair(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const Matrix c = random_matrix(n, n + n / 2);
  for (auto _ : state) benchmark::DoNotOptimize(leading_singular_pair(c));
}
BENCHMARK(BM_LeadingSingularPair)->Arg(100)->Arg(400);

void BM_Rank1Prox(benchmark::State& state) {
  const Problem& p = paper_problem();
  const SmoothingOperator s(p.laplacian1, 1.0);
  const SingularTriple t = leading_singular_pair(p.c);
  const Vector b = p.c * t.right;
  const PenaltySpec pen = PenaltySpec::l1(0.1 * penalty_upper_bound(p.c));
  for (auto _ : state) benchmark::DoNotOptimize(rank1_prox(b, s, pen, 1e-8, 10000, t.left));
}
BENCHMARK(BM_Rank1Prox);

void BM_Greedy(benchmark::State& state) {
  const Problem& p = paper_problem();
  const SmoothingOperator s1(p.laplacian1, 1.0), s2(p.laplacian2, 1.0);
  SolverConfig cfg;
  cfg.k = 4;
  const double lam = 0.1 * penalty_upper_bound(p.c);
  cfg.penalty1 = PenaltySpec::l1(lam);
  cfg.penalty2 = PenaltySpec::l1(lam);
  for (auto _ : state) benchmark::DoNotOptimize(sgpls_greedy(p.c, s1, s2, cfg));
}
BENCHMARK(BM_Greedy)->Unit(benchmark::kMillisecond);

void BM_Multirank(benchmark::State& state) {
  const Problem& p = paper_problem();
  const SmoothingOperator s1(p.laplacian1, 1.0), s2(p.laplacian2, 1.0);
  SolverConfig cfg;
  cfg.k = 4;
  const double lam = 0.1 * penalty_upper_bound(p.c);
  cfg.penalty1 = PenaltySpec::l1(lam);
  cfg.penalty2 = PenaltySpec::l1(lam);
  for (auto _ : state) benchmark::DoNotOptimize(sgpls_multirank(p.c, s1, s2, cfg));
}
BENCHMARK(BM_Multirank)->Unit(benchmark::kMillisecond);

void BM_SbmGenerate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sbm_generate({n, n, n, n}, 0.95, 0.2, ++seed));
}
BENCHMARK(BM_SbmGenerate)->Arg(25)->Arg(250);

void BM_Simulate(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(paper_instance());
}
BENCHMARK(BM_Simulate)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
