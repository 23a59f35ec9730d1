#include <benchmark/benchmark.h>

#include <random>

#include "qgcnet/garch.hpp"
#include "qgcnet/linreg.hpp"
#include "qgcnet/networks.hpp"
#include "qgcnet/qreg.hpp"
#include "qgcnet/sim.hpp"

using namespace qgc;

namespace {

Matrix gaussian(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

void BM_QuantileRegression(benchmark::State& state) {
  const Index n = state.range(0);
  const Index k = state.range(1);
  const Matrix x = gaussian(n, k, 1);
  const Vector y = x.col(0) * 0.5 + gaussian(n, 1, 2).col(0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_qr({x, y, 0.2, 0.0}));
  state.SetComplexityN(n);
}
BENCHMARK(BM_QuantileRegression)->Args({100, 5})->Args({400, 5})->Args({100, 30})->Args({1000, 3});

void BM_QuantileLassoGrid(benchmark::State& state) {
  const Index n = state.range(0);
  const Matrix x = gaussian(n, 30, 3);
  const Vector y = x.col(0) * 0.6 + gaussian(n, 1, 4).col(0);
  const auto grid = default_lambda_grid(x, y, Method::qgc(0.05));
  for (auto _ : state) {
    QuantileLassoPath path(x, y, 0.05, true);
    for (double lambda : grid) benchmark::DoNotOptimize(path.solve(lambda));
  }
}
BENCHMARK(BM_QuantileLassoGrid)->Arg(50)->Arg(100);

void BM_LassoGrid(benchmark::State& state) {
  const Index n = state.range(0);
  const Matrix x = gaussian(n, 30, 5);
  const Vector y = x.col(0) * 0.6 + gaussian(n, 1, 6).col(0);
  const auto grid = default_lambda_grid(x, y, Method::gc(false));
  for (auto _ : state) {
    Vector warm = Vector::Zero(30);
    for (double lambda : grid) {
      warm = solve_lasso({x, y, lambda}, warm).coefficients;
      benchmark::DoNotOptimize(warm);
    }
  }
}
BENCHMARK(BM_LassoGrid)->Arg(50)->Arg(100);

void BM_Garch(benchmark::State& state) {
  const Vector sim = simulate_garch11({0.0, 0.05, 0.1, 0.85}, state.range(0), 7);
  const std::vector<double> x(sim.data(), sim.data() + sim.size());
  for (auto _ : state) benchmark::DoNotOptimize(fit_garch11(x));
}
BENCHMARK(BM_Garch)->Arg(36)->Arg(1000);

void BM_MultivariateNetwork(benchmark::State& state) {
  HubSimConfig config;
  config.p = 30;
  config.n = state.range(0);
  config.seed = 11;
  const ReturnPanel panel = simulate_panel(config).panel;
  const Method method = state.range(1) ? Method::qgc(0.05) : Method::gc();
  for (auto _ : state) benchmark::DoNotOptimize(multivariate_network(panel, method, CVConfig{}));
  state.SetLabel(state.range(1) ? "qgc" : "gc");
}
BENCHMARK(BM_MultivariateNetwork)->Args({50, 0})->Args({50, 1})->Args({100, 0})->Args({100, 1})
    ->Unit(benchmark::kMillisecond);

void BM_BivariateNetwork(benchmark::State& state) {
  HubSimConfig config;
  config.p = 30;
  config.n = 36;
  config.seed = 12;
  const ReturnPanel panel = simulate_panel(config).panel;
  const Method method = state.range(0) ? Method::qgc(0.05) : Method::gc();
  for (auto _ : state) benchmark::DoNotOptimize(bivariate_network(panel, method));
  state.SetLabel(state.range(0) ? "qgc" : "gc");
}
BENCHMARK(BM_BivariateNetwork)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
