#include <benchmark/benchmark.h>

#include "fchlog/diagnostics.hpp"
#include "fchlog/initdata.hpp"
#include "fchlog/model.hpp"
#include "fchlog/spectral.hpp"
#include "fchlog/stepper.hpp"

using namespace fchlog;

namespace {

const PotentialParams kParams{3.0, 1.0};

Grid grid_for(const benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  if (state.range(1) == 1) return Grid::line(n, 5.0, Boundary::NeumannCosine);
  return Grid({n, n}, {5.0, 5.0}, Boundary::NeumannCosine);
}

ScalarField initial(const Grid& g) {
  InitialSpec s;
  s.kind = InitialKind::BandLimitedNoise;
  s.mean_m = 0.2;
  s.amplitude = 0.05;
  s.seed = 42;
  s.cutoff = 8;
  return generate(s, g);
}

void BM_Laplacian(benchmark::State& state) {
  const Grid g = grid_for(state);
  Spectral sp(g);
  const ScalarField u = initial(g);
  for (auto _ : state) benchmark::DoNotOptimize(sp.laplacian(u));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g.size()));
}

void BM_Mu(benchmark::State& state) {
  const Grid g = grid_for(state);
  Model model(g, Nonlinearity::exact(kParams));
  const ScalarField u = initial(g);
  for (auto _ : state) benchmark::DoNotOptimize(model.mu(u));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g.size()));
}

void BM_Energy(benchmark::State& state) {
  const Grid g = grid_for(state);
  Model model(g, Nonlinearity::exact(kParams));
  const ScalarField u = initial(g);
  for (auto _ : state) benchmark::DoNotOptimize(model.energy(u));
}

void BM_ImexStep(benchmark::State& state) {
  const Grid g = grid_for(state);
  Stepper st(g, kParams, with_default_stabilization(SolverConfig{}, kParams, 0.5));
  const ScalarField u = initial(g);
  const double e = st.model().energy(u).total;
  for (auto _ : state) benchmark::DoNotOptimize(st.step_imex(u, 1e-4, e));
}

void BM_ImplicitStep(benchmark::State& state) {
  const Grid g = grid_for(state);
  SolverConfig cfg = with_default_stabilization(SolverConfig{}, kParams, 0.5);
  cfg.scheme = Scheme::ImplicitNewton;
  Stepper st(g, kParams, cfg);
  const ScalarField u = initial(g);
  const double e = st.model().energy(u).total;
  for (auto _ : state) benchmark::DoNotOptimize(st.step_implicit(u, 1e-4, e));
}

void BM_Record(benchmark::State& state) {
  const Grid g = grid_for(state);
  Model model(g, Nonlinearity::exact(kParams));
  const ScalarField u = initial(g);
  for (auto _ : state) benchmark::DoNotOptimize(record(model, u, 0.0, 0.0));
}

}  // namespace

BENCHMARK(BM_Laplacian)->Args({512, 1})->Args({4096, 1})->Args({128, 2});
BENCHMARK(BM_Mu)->Args({512, 1})->Args({4096, 1})->Args({128, 2});
BENCHMARK(BM_Energy)->Args({512, 1})->Args({128, 2});
BENCHMARK(BM_ImexStep)->Args({512, 1})->Args({128, 2});
BENCHMARK(BM_ImplicitStep)->Args({512, 1})->Args({64, 2});
BENCHMARK(BM_Record)->Args({512, 1})->Args({128, 2});
BENCHMARK_MAIN();
