#include <benchmark/benchmark.h>

#include "regkit/discrepancy.hpp"
#include "regkit/problems.hpp"
#include "regkit/random.hpp"
#include "regkit/spectral.hpp"
#include "regkit/tikhonov.hpp"

namespace {

using namespace regkit;

void BM_JacobiSvd(benchmark::State& state) {
  const Index n = state.range(0);
  const Matrix a = Rng(1).normal_matrix(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(jacobi_svd(a));
  state.SetComplexityN(n);
}
BENCHMARK(BM_JacobiSvd)->RangeMultiplier(2)->Range(32, 256)->Unit(benchmark::kMillisecond);

template <SolverPath Path>
void BM_Solve(benchmark::State& state) {
  const Index n = state.range(0);
  const auto problem = make_problem("deriv2", n);
  const Vector f = add_noise(problem, 1e-3, 1).f_delta;
  for (auto _ : state) {
    switch (Path) {
      case SolverPath::primal: benchmark::DoNotOptimize(solve_primal(problem.op, f, 1e-4)); break;
      case SolverPath::dual: benchmark::DoNotOptimize(solve_dual(problem.op, f, 1e-4)); break;
      case SolverPath::spectral: benchmark::DoNotOptimize(solve_spectral(*problem.decomp, problem.op, f, 1e-4)); break;
    }
  }
}
BENCHMARK(BM_Solve<SolverPath::primal>)->Arg(64)->Arg(256)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Solve<SolverPath::dual>)->Arg(64)->Arg(256)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Solve<SolverPath::spectral>)->Arg(64)->Arg(256)->Unit(benchmark::kMicrosecond);

void BM_SolveAlphaSpectral(benchmark::State& state) {
  const auto problem = make_problem("phillips", state.range(0));
  const Vector f = add_noise(problem, 1e-3, 1).f_delta;
  for (auto _ : state) benchmark::DoNotOptimize(solve_alpha(*problem.decomp, f, 1e-3));
}
BENCHMARK(BM_SolveAlphaSpectral)->Arg(64)->Arg(256)->Unit(benchmark::kMicrosecond);

void BM_SolveAlphaOperator(benchmark::State& state) {
  const auto problem = make_problem("phillips", state.range(0));
  const Vector f = add_noise(problem, 1e-3, 1).f_delta;
  for (auto _ : state) benchmark::DoNotOptimize(solve_alpha(problem.op, f, 1e-3));
}
BENCHMARK(BM_SolveAlphaOperator)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_NormEstimate(benchmark::State& state) {
  const auto problem = make_problem("gradient_family", state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(operator_norm_estimate(problem.op, 1e-8));
}
BENCHMARK(BM_NormEstimate)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
