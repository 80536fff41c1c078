#include <benchmark/benchmark.h>

#include <cstdint>

#include "qdsim/montecarlo.hpp"
#include "qdsim/protocols.hpp"

namespace {

using namespace qdsim;

void BM_Hadamard(benchmark::State& state) {
  const int num_qubits = static_cast<int>(state.range(0));
  PureState psi = PureState::basis(num_qubits, 0);
  int qubit = 0;
  for (auto _ : state) {
    psi = apply_hadamard(psi, qubit);
    qubit = (qubit + 1) % num_qubits;
    benchmark::DoNotOptimize(psi);
  }
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << num_qubits));
}
BENCHMARK(BM_Hadamard)->Arg(4)->Arg(10)->Arg(16)->Arg(20);

void BM_BellQnd(benchmark::State& state) {
  const PureState input = bell_state(BellLabel::PsiMinus);
  std::uint64_t trial = 0;
  for (auto _ : state) {
    DeviceState dev = make_fig1_device(input);
    RandomSource source = RandomSource::for_trial(Seed{1}, trial++);
    const BellQndRecord rec = bell_qnd(input, dev, source);
    benchmark::DoNotOptimize(rec);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_BellQnd);

void BM_Ghz3Run(benchmark::State& state) {
  const int max_rounds = static_cast<int>(state.range(0));
  std::uint64_t trial = 0;
  for (auto _ : state) {
    DeviceState dev = make_ghz3_device();
    RandomSource source = RandomSource::for_trial(Seed{2}, trial++);
    const GhzRunRecord rec = ghz3_prepare(max_rounds, dev, source);
    benchmark::DoNotOptimize(rec);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Ghz3Run)->Arg(1)->Arg(4);

void BM_SampledTrials(benchmark::State& state) {
  ScenarioConfig cfg;
  cfg.protocol = Protocol::Ghz3;
  cfg.max_rounds = 2;
  const std::uint64_t batch = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    const RunStats stats = run_trials(cfg, batch, Seed{3});
    benchmark::DoNotOptimize(stats);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(batch));
}
BENCHMARK(BM_SampledTrials)->Arg(100)->Arg(1000);

void BM_ExactEnumeration(benchmark::State& state) {
  ScenarioConfig cfg;
  cfg.protocol = Protocol::GhzN;
  cfg.strategy = GrowthStrategy::PairMerge;
  cfg.n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const ExactResult result = exhaustive_branches(cfg);
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(BM_ExactEnumeration)->Arg(8)->Arg(12);

}  // namespace

BENCHMARK_MAIN();
