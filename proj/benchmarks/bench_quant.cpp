#include <benchmark/benchmark.h>

#include <vector>

#include "qrl/quant.hpp"
#include "qrl/rng.hpp"

namespace {

std::vector<double> random_obs(std::size_t n) {
  qrl::Rng rng(7);
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-150.0, 150.0);
  return v;
}

void BM_encode(benchmark::State& state) {
  const auto s = qrl::make_scheme(127, static_cast<int>(state.range(0)));
  const auto xs = random_obs(4096);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(qrl::encode(xs[i], s));
    i = (i + 1) & 4095;
  }
}
BENCHMARK(BM_encode)->Arg(1)->Arg(2);

void BM_decode(benchmark::State& state) {
  const auto s = qrl::make_scheme(127, static_cast<int>(state.range(0)));
  const auto xs = random_obs(4096);
  std::vector<qrl::Code> codes(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) codes[k] = qrl::encode(xs[k], s);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(qrl::decode(codes[i], s));
    i = (i + 1) & 4095;
  }
}
BENCHMARK(BM_decode)->Arg(1)->Arg(2);

void BM_quantize_vector(benchmark::State& state) {
  const auto s = qrl::make_scheme(127, 2);
  auto xs = random_obs(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    double acc = 0;
    for (double x : xs) acc += qrl::quantize(x, s);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_quantize_vector)->Arg(376);

}  // namespace

BENCHMARK_MAIN();
