#include <benchmark/benchmark.h>

#include <vector>

#include "qrl/mlp.hpp"
#include "qrl/rng.hpp"

namespace {

void BM_mlp_forward(benchmark::State& state) {
  const std::size_t batch = static_cast<std::size_t>(state.range(0));
  qrl::Rng rng(1);
  qrl::Mlp net({4, 64, 64, 1}, qrl::Activation::relu);
  net.init_fanin_uniform(rng);
  std::vector<double> x(batch * 4);
  for (double& v : x) v = rng.normal();
  qrl::MlpCache cache;
  for (auto _ : state) {
    const auto out = net.forward(x, batch, cache);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_mlp_forward)->Arg(1)->Arg(256);

void BM_mlp_backward(benchmark::State& state) {
  const std::size_t batch = static_cast<std::size_t>(state.range(0));
  qrl::Rng rng(1);
  qrl::Mlp net({4, 64, 64, 1}, qrl::Activation::relu);
  net.init_fanin_uniform(rng);
  std::vector<double> x(batch * 4), up(batch), grads(net.param_count());
  for (double& v : x) v = rng.normal();
  for (double& v : up) v = rng.normal();
  qrl::MlpCache cache;
  net.forward(x, batch, cache);
  for (auto _ : state) {
    std::fill(grads.begin(), grads.end(), 0.0);
    net.backward(cache, up, grads);
    benchmark::DoNotOptimize(grads.data());
  }
  state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_mlp_backward)->Arg(256);

}  // namespace
