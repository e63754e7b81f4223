#include <benchmark/benchmark.h>

#include "inar/asymptotics.hpp"
#include "inar/recursions.hpp"
#include "inar/simulator.hpp"

namespace {

inar::InarModel hawkes() {
  return inar::InarModel(inar::CountDistribution::poisson(1.0),
                         inar::offspring::PoissonFamily{inar::decay::Geometric{0.25, 0.5}});
}

inar::InarModel inar1() {
  return inar::InarModel(inar::CountDistribution::bernoulli(0.5),
                         inar::offspring::Explicit{{inar::CountDistribution::bernoulli(0.4)}});
}

void BM_SimulateHawkes(benchmark::State& state) {
  const auto m = hawkes();
  inar::RandomStream rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(inar::simulate(m, state.range(0), rng));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateHawkes)->Arg(1000)->Arg(100000);

void BM_SimulateHawkesIndividual(benchmark::State& state) {
  const auto m = hawkes();
  inar::RandomStream rng(1);
  inar::SimulationOptions opt;
  opt.sampling = inar::CompoundSampling::individual;
  for (auto _ : state) benchmark::DoNotOptimize(inar::simulate(m, state.range(0), rng, opt));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateHawkesIndividual)->Arg(1000)->Arg(100000);

void BM_SimulateInar1(benchmark::State& state) {
  const auto m = inar1();
  inar::RandomStream rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(inar::simulate(m, state.range(0), rng));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateInar1)->Arg(100000);

void BM_FSequence(benchmark::State& state) {
  const auto m = hawkes();
  for (auto _ : state) benchmark::DoNotOptimize(inar::f_sequence(m, 0.1, state.range(0)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FSequence)->Arg(10000)->Arg(1000000);

void BM_GbarTables(benchmark::State& state) {
  const auto m = hawkes();
  for (auto _ : state) benchmark::DoNotOptimize(inar::gbar_tables(m, state.range(0)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GbarTables)->Arg(100000);

void BM_RateI(benchmark::State& state) {
  const auto m = inar1();
  for (auto _ : state) benchmark::DoNotOptimize(inar::ldp_rate_I(m, 1.2));
}
BENCHMARK(BM_RateI);

}  // namespace

BENCHMARK_MAIN();
