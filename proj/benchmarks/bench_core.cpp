#include <benchmark/benchmark.h>

#include "mstat/harness.hpp"
#include "mstat/lq_problem.hpp"
#include "mstat/merit.hpp"
#include "mstat/residual.hpp"
#include "mstat/solver.hpp"

namespace {

using namespace mstat;

void BM_NmsEval(benchmark::State& state) {
  Quad w{0.3, -0.7, 1.1, -0.2};
  for (auto _ : state) {
    auto e = nms_eval(w);
    benchmark::DoNotOptimize(e);
  }
}
BENCHMARK(BM_NmsEval);

void BM_AssembleResidual(benchmark::State& state) {
  const auto problem = make_obstacle(state.range(0));
  const PrimalDual z = random_start(*problem, 42);
  for (auto _ : state) {
    auto eval = assemble_residual(*problem, z);
    benchmark::DoNotOptimize(eval);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AssembleResidual)->Arg(16)->Arg(64)->Complexity();

void BM_NewtonDirection(benchmark::State& state) {
  const auto problem = make_obstacle(state.range(0));
  const PrimalDual z = random_start(*problem, 42);
  for (auto _ : state) {
    auto step = newton_direction(*problem, z);
    benchmark::DoNotOptimize(step);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_NewtonDirection)->Arg(16)->Arg(64)->Complexity();

void BM_MeritGradient(benchmark::State& state) {
  const auto problem = make_obstacle(state.range(0));
  const PrimalDual z = random_start(*problem, 42);
  for (auto _ : state) {
    auto merit = merit_eval(*problem, z);
    benchmark::DoNotOptimize(merit);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MeritGradient)->Arg(16)->Arg(64)->Complexity();

void BM_SolveToy(benchmark::State& state) {
  const auto problem = make_toy(0.1);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const PrimalDual z0 = random_start(*problem, seed++);
    auto report = solve_global(*problem, z0);
    benchmark::DoNotOptimize(report);
  }
}
BENCHMARK(BM_SolveToy);

}  // namespace

BENCHMARK_MAIN();
