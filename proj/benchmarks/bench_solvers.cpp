#include <benchmark/benchmark.h>

#include "lagerstrom/integral_eq.hpp"
#include "lagerstrom/ode_shoot.hpp"
#include "lagerstrom/specfun.hpp"

namespace {

using lagerstrom::ModelParams;

void BM_ExpIntegral(benchmark::State& state) {
  const double q = static_cast<double>(state.range(0)) / 2.0;
  double rho = 1e-3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lagerstrom::specfun::exp_integral(q, rho));
    rho = rho < 20.0 ? rho * 1.7 : 1e-3;
  }
}
BENCHMARK(BM_ExpIntegral)->Arg(2)->Arg(4)->Arg(5);

void BM_Shoot(benchmark::State& state) {
  const auto p = ModelParams::constant_k(static_cast<double>(state.range(0)), 0.05, static_cast<double>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(lagerstrom::shoot::shoot(p).c_star);
}
BENCHMARK(BM_Shoot)->Args({2, 0})->Args({3, 0})->Args({2, 1})->Unit(benchmark::kMillisecond);

void BM_SolveC(benchmark::State& state) {
  const auto p = ModelParams::constant_k(static_cast<double>(state.range(0)), 0.05, static_cast<double>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(lagerstrom::ie::solve_C(p).C);
}
BENCHMARK(BM_SolveC)->Args({2, 0})->Args({3, 0})->Args({2, 1})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
