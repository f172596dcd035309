#include <benchmark/benchmark.h>

#include <random>

#include "mildflow/initial_data.hpp"
#include "mildflow/nonlinear.hpp"
#include "mildflow/norms.hpp"
#include "mildflow/solver.hpp"
#include "mildflow/spectral.hpp"

using namespace mildflow;

namespace {

VectorField noise(const SpectralGrid& grid, std::size_t comps) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  std::vector<VectorField::Samples> s(comps, VectorField::Samples(grid.size()));
  for (auto& c : s) {
    for (double& v : c) v = normal(rng);
  }
  return VectorField::from_physical(grid, std::move(s));
}

void BM_Forward(benchmark::State& state) {
  const auto grid = make_grid(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  std::vector<double> in(grid.size(), 1.0);
  std::vector<Complex> out(grid.size());
  for (auto _ : state) {
    grid.forward(in, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_Forward)->Args({2, 64})->Args({2, 256})->Args({3, 32})->Args({3, 64});

void BM_HeatLeray(benchmark::State& state) {
  const auto grid = make_grid(3, static_cast<int>(state.range(0)));
  const auto f = noise(grid, 3);
  for (auto _ : state) benchmark::DoNotOptimize(leray_project(heat_semigroup(f, 0.1)));
}
BENCHMARK(BM_HeatLeray)->Arg(16)->Arg(32);

void BM_SupNorm(benchmark::State& state) {
  const auto grid = make_grid(3, static_cast<int>(state.range(0)));
  const auto f = noise(grid, 3);
  for (auto _ : state) benchmark::DoNotOptimize(sup_norm(f));
}
BENCHMARK(BM_SupNorm)->Arg(16)->Arg(32);

void BM_Nonlinearity(benchmark::State& state) {
  const auto grid = make_grid(3, static_cast<int>(state.range(0)));
  const auto u = leray_project(noise(grid, 3));
  DirectorSpec spec;
  spec.family = "random_band";
  const auto d = make_director(grid, spec, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(momentum_nonlinearity(u, d));
    benchmark::DoNotOptimize(director_nonlinearity(u, d));
  }
}
BENCHMARK(BM_Nonlinearity)->Arg(16)->Arg(32);

void BM_DuhamelMap(benchmark::State& state) {
  const auto grid = make_grid(2, static_cast<int>(state.range(0)));
  const auto u0 = taylor_green(grid, 0.5);
  DirectorSpec spec;
  spec.family = "geodesic_director";
  const auto d0 = make_director(grid, spec, 0);
  const auto input = Trajectory::constant(StatePair(u0, d0, 0.0), 0.0, 0.05, 8);
  const DuhamelWeights weights(grid, [&] {
    std::vector<double> offsets;
    for (double t : input.times()) offsets.push_back(t);
    return offsets;
  }());
  for (auto _ : state) benchmark::DoNotOptimize(duhamel_map(u0, d0, input, weights));
}
BENCHMARK(BM_DuhamelMap)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_WeightTable(benchmark::State& state) {
  const auto grid = make_grid(2, static_cast<int>(state.range(0)));
  std::vector<double> offsets{0.0, 0.01, 0.03, 0.05};
  for (auto _ : state) benchmark::DoNotOptimize(DuhamelWeights(grid, offsets));
}
BENCHMARK(BM_WeightTable)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
