#include <benchmark/benchmark.h>

#include <complex>

#include "angenent/block_tridiagonal.hpp"
#include "angenent/discrete_lagrangian.hpp"
#include "angenent/scenarios.hpp"

namespace {

using angenent::DiscreteLagrangian;
using angenent::Point;

static void BM_SecondDerivatives(benchmark::State& state) {
  const DiscreteLagrangian dl;
  const Point a(1.3, 0.2), b(1.31, 0.21);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dl.second_derivatives(a, b));
  }
}
BENCHMARK(BM_SecondDerivatives);

static void BM_CyclicComplexSolve(benchmark::State& state) {
  using Complex = std::complex<double>;
  const auto n = static_cast<std::size_t>(state.range(0));
  angenent::BlockTridiagonal<Complex> a(n, true);
  for (std::size_t k = 0; k < n; ++k) {
    a.diag(k) << Complex(4.0, 0.1), Complex(0.5), Complex(0.5), Complex(4.0, 0.1);
    a.lower(k) << Complex(-1.0), Complex(0.2), Complex(0.1), Complex(-1.0);
    a.upper(k) = a.lower(k).transpose();
  }
  const Eigen::VectorXcd rhs = Eigen::VectorXcd::Ones(2 * static_cast<Eigen::Index>(n));
  for (auto _ : state) {
    benchmark::DoNotOptimize(a.solve(rhs));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CyclicComplexSolve)->RangeMultiplier(2)->Range(128, 4096)->Complexity(benchmark::oN);

static void BM_SolveAngenent(benchmark::State& state) {
  const DiscreteLagrangian dl;
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(angenent::solve_angenent(n, dl).entropy);
  }
}
BENCHMARK(BM_SolveAngenent)->RangeMultiplier(2)->Range(128, 2048)->Unit(benchmark::kMillisecond);

static void BM_Shooting(benchmark::State& state) {
  const DiscreteLagrangian dl;
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(angenent::angenent_shooting_path(n, dl).points.back());
  }
}
BENCHMARK(BM_Shooting)->Arg(2048)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
