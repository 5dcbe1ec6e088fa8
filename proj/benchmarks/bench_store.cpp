#include <benchmark/benchmark.h>

#include <vector>

#include "qrl/packed_store.hpp"
#include "qrl/replay_buffer.hpp"
#include "qrl/rng.hpp"

namespace {

void BM_packed_write(benchmark::State& state) {
  const auto s = qrl::make_scheme(127, 2);
  const std::size_t dim = static_cast<std::size_t>(state.range(0));
  qrl::PackedObsStore store(s, dim, 1024);
  qrl::Rng rng(3);
  std::vector<double> obs(dim);
  for (double& x : obs) x = rng.uniform(-127.0, 127.0);
  std::size_t i = 0;
  for (auto _ : state) {
    store.write(i, obs);
    i = (i + 1) & 1023;
  }
  state.SetItemsProcessed(state.iterations() * dim);
}
BENCHMARK(BM_packed_write)->Arg(3)->Arg(376);

void BM_packed_read(benchmark::State& state) {
  const auto s = qrl::make_scheme(127, 2);
  const std::size_t dim = static_cast<std::size_t>(state.range(0));
  qrl::PackedObsStore store(s, dim, 1024);
  qrl::Rng rng(3);
  std::vector<double> obs(dim), out(dim);
  for (std::size_t k = 0; k < 1024; ++k) {
    for (double& x : obs) x = rng.uniform(-127.0, 127.0);
    store.write(k, obs);
  }
  std::size_t i = 0;
  for (auto _ : state) {
    store.read(i, out);
    benchmark::DoNotOptimize(out.data());
    i = (i + 1) & 1023;
  }
  state.SetItemsProcessed(state.iterations() * dim);
}
BENCHMARK(BM_packed_read)->Arg(3)->Arg(376);

void BM_replay_push_sample(benchmark::State& state) {
  const bool quantized = state.range(0) != 0;
  std::optional<qrl::QuantScheme> scheme;
  if (quantized) scheme = qrl::make_scheme(127, 2);
  qrl::ReplayBuffer buf(100000, 17, 6, scheme);
  qrl::Rng rng(5);
  qrl::Transition t;
  t.obs.resize(17);
  t.next_obs.resize(17);
  t.action.resize(6);
  for (double& x : t.obs) x = rng.uniform(-8.0, 8.0);
  for (double& x : t.next_obs) x = rng.uniform(-8.0, 8.0);
  for (double& x : t.action) x = rng.uniform(-1.0, 1.0);
  qrl::TransitionBatch batch;
  for (auto _ : state) {
    buf.push(t);
    buf.sample(64, rng, batch);
    benchmark::DoNotOptimize(batch.obs.data());
  }
}
BENCHMARK(BM_replay_push_sample)->Arg(0)->Arg(1);

}  // namespace
