#include <benchmark/benchmark.h>

#include "physarum/dynamics.hpp"
#include "physarum/instances.hpp"
#include "physarum/min_energy.hpp"

using namespace physarum;

static void BM_DirectedStep(benchmark::State& state) {
  const LpInstance inst = validate(triangle_instance(Mode::Directed));
  const MinEnergySolver solver(inst);
  CapacityState s{{1, 1, 1}, 0, 0};
  for (auto _ : state) {
    s = step_directed(solver, s, 1e-3);
    benchmark::DoNotOptimize(s.x.data());
  }
}
BENCHMARK(BM_DirectedStep);

static void BM_ShortestPathRun(benchmark::State& state) {
  GeneratorSpec spec;
  spec.seed = 3;
  spec.nodes = static_cast<std::size_t>(state.range(0));
  spec.arcs = 2 * spec.nodes;
  const LpInstance inst = generate(spec);
  RunOptions opt;
  opt.max_iters = 1000;
  opt.trace_stride = 0;
  const VecD x0(inst.m(), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(run(inst, x0, StepPlan::fixed(1e-2), opt));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_ShortestPathRun)->Arg(4)->Arg(6)->Arg(8);

static void BM_ContinuousTriangle(benchmark::State& state) {
  const LpInstance inst = validate(triangle_instance(Mode::Undirected));
  ContinuousOptions opt;
  opt.T = 1;
  opt.dt = 1e-3;
  opt.check_envelope = false;
  opt.sample_every = 1000;
  for (auto _ : state) benchmark::DoNotOptimize(integrate_continuous(inst, {1, 1, 1}, opt));
}
BENCHMARK(BM_ContinuousTriangle);
