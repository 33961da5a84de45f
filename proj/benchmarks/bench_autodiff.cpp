#include <benchmark/benchmark.h>

#include <random>

#include "tpem/autodiff/gru.hpp"
#include "tpem/autodiff/tape.hpp"

namespace {

tpem::ad::Tensor random_tensor(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 0.1);
  tpem::ad::Tensor t(rows, cols);
  for (auto& x : t.values()) x = normal(rng);
  return t;
}

void BM_MatmulForwardBackward(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  const auto a = random_tensor(n, n, rng);
  const auto b = random_tensor(n, 1, rng);
  tpem::ad::Tensor ga(n, n), gb(n, 1);
  tpem::ad::Tape tape;
  for (auto _ : state) {
    tape.clear();
    const auto y = tape.matmul(tape.bind(a, &ga), tape.bind(b, &gb));
    tape.backward(tape.sum(y));
    benchmark::DoNotOptimize(ga.values().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n * n));
}
BENCHMARK(BM_MatmulForwardBackward)->Arg(32)->Arg(128);

// One GRU step over a 20-token sequence, forward and backward.
void BM_GruSequence(benchmark::State& state) {
  const auto h = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(2);
  std::vector<tpem::ad::Tensor> params;
  for (int g = 0; g < 3; ++g) {
    params.push_back(random_tensor(h, h, rng));
    params.push_back(random_tensor(h, h, rng));
    params.push_back(random_tensor(h, 1, rng));
  }
  const auto x = random_tensor(h, 1, rng);
  tpem::ad::Tape tape;
  for (auto _ : state) {
    tape.clear();
    std::vector<tpem::ad::Var> v;
    for (const auto& p : params) v.push_back(tape.leaf(p));
    const tpem::ad::GruVars w{v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8]};
    auto state_var = tape.constant(tpem::ad::Tensor(h, 1));
    const auto input = tape.constant(x);
    for (int t = 0; t < 20; ++t) state_var = tpem::ad::gru_cell(tape, w, input, state_var);
    tape.backward(tape.sum(state_var));
    benchmark::DoNotOptimize(tape.grad(v[0]).values().data());
  }
}
BENCHMARK(BM_GruSequence)->Arg(32)->Arg(128);

}  // namespace
