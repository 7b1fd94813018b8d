#include <benchmark/benchmark.h>

#include <random>

#include "physarum/instances.hpp"
#include "physarum/linalg.hpp"
#include "physarum/lp_model.hpp"
#include "physarum/min_energy.hpp"
#include "physarum/oracle.hpp"

using namespace physarum;

namespace {

LpInstance random_lp(std::size_t rows, std::size_t cols) {
  GeneratorSpec s;
  s.kind = GeneratorKind::RandomPositiveLp;
  s.seed = 42;
  s.rows = rows;
  s.cols = cols;
  return generate(s);
}

VecD capacities(std::size_t m) {
  std::mt19937_64 rng(7);
  VecD x(m);
  for (auto& v : x) v = uniform_real(rng, 0.1, 2.0);
  return x;
}

}  // namespace

static void BM_DeterminantInfo(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const LpInstance inst = random_lp(n, 2 * n + 1);
  for (auto _ : state) benchmark::DoNotOptimize(determinant_info(inst.A));
}
BENCHMARK(BM_DeterminantInfo)->DenseRange(2, 4);

static void BM_EnumerateBfs(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const LpInstance inst = random_lp(n, 2 * n + 1);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_bfs(inst));
}
BENCHMARK(BM_EnumerateBfs)->DenseRange(2, 4);

static void BM_MinEnergyFloat(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const LpInstance inst = random_lp(n, 2 * n + 1);
  const MinEnergySolver solver(inst);
  const VecD x = capacities(inst.m());
  for (auto _ : state) benchmark::DoNotOptimize(solver.solve(x));
}
BENCHMARK(BM_MinEnergyFloat)->DenseRange(2, 6, 2);

static void BM_MinEnergyExact(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const LpInstance inst = random_lp(n, 2 * n + 1);
  const VecQ x = to_rational(capacities(inst.m()));
  for (auto _ : state) benchmark::DoNotOptimize(solve_general_exact(inst, x));
}
BENCHMARK(BM_MinEnergyExact)->DenseRange(2, 4);
