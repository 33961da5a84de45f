#include <benchmark/benchmark.h>

#include <random>

#include "tpem/lifecycle/masking.hpp"
#include "tpem/lifecycle/pruning.hpp"

namespace {

void BM_PruneGrid(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal(0.0, 1.0);
  tpem::ad::Tensor weights(1, n);
  for (auto& x : weights.values()) x = normal(rng);
  for (auto _ : state) {
    state.PauseTiming();
    auto w = weights;
    tpem::lifecycle::OwnershipGrid owners(1, n, 1);
    state.ResumeTiming();
    benchmark::DoNotOptimize(tpem::lifecycle::prune_grid(w, owners, 1, 0.5));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n));
}
BENCHMARK(BM_PruneGrid)->Arg(1000)->Arg(100000);

void BM_BinarizeAndPack(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 0.01);
  std::vector<double> real(n);
  for (auto& x : real) x = unit(rng);
  for (auto _ : state) {
    const auto bits = tpem::lifecycle::binarize(real, 5e-3);
    benchmark::DoNotOptimize(tpem::lifecycle::BinaryMask::pack(bits, 1, n));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n));
}
BENCHMARK(BM_BinarizeAndPack)->Arg(100000);

}  // namespace
