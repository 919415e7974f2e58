#include <benchmark/benchmark.h>

#include "lrising/contours.hpp"
#include "lrising/exact.hpp"
#include "lrising/mcmc.hpp"

using namespace lrising;

namespace {

ModelParams power(double beta, double alpha) { return ModelParams{beta, PowerLaw{1.0, alpha, {}}, {}}; }

void BM_LogPartition(benchmark::State& state) {
  const GibbsModel m(Volume::line(state.range(0)), power(1.0, 1.5), BoundaryCondition::plus());
  exact::EnumerationOptions opts;
  opts.workers = 1;
  for (auto _ : state) benchmark::DoNotOptimize(exact::log_partition(m, {}, opts));
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << m.size()));
}
BENCHMARK(BM_LogPartition)->Arg(4)->Arg(6)->Arg(8);

void BM_HeatBathSweep(benchmark::State& state) {
  const GibbsModel m(Volume::line(state.range(0)), power(1.0, 1.5), BoundaryCondition::plus());
  mcmc::Sampler s(m, 1, mcmc::Initial::Random);
  for (auto _ : state) s.sweep(mcmc::Rule::HeatBath);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(m.size()));
}
BENCHMARK(BM_HeatBathSweep)->Arg(16)->Arg(64)->Arg(256);

void BM_Triangles(benchmark::State& state) {
  const auto v = Volume::line(state.range(0));
  Configuration s = Configuration::constant(v.size(), 1);
  for (std::size_t i = 0; i < s.size(); i += 3) s[i] = -1;
  for (auto _ : state) benchmark::DoNotOptimize(contours::triangles(v, s, BoundaryCondition::plus()));
}
BENCHMARK(BM_Triangles)->Arg(64)->Arg(1024);

void BM_ExcessEnergy(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(excess_energy(Volume::line(state.range(0)), PowerLaw{1.0, 1.5, {}}));
}
BENCHMARK(BM_ExcessEnergy)->Arg(64)->Arg(512);

}  // namespace
BENCHMARK_MAIN();
