#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "fd_check.hpp"
#include "qrl/mlp.hpp"
#include "qrl/rng.hpp"

using namespace qrl;

namespace {

// independent naive oracle: explicit per-layer triple loop on copies
std::vector<double> oracle_forward(const Mlp& net, std::span<const double> input,
                                   std::size_t batch) {
  const auto& sizes = net.sizes();
  std::vector<double> cur(input.begin(), input.end());
  std::size_t off = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const std::size_t in = sizes[l], out = sizes[l + 1];
    std::span<const double> w = net.params().subspan(off, in * out);
    std::span<const double> b = net.params().subspan(off + in * out, out);
    off += in * out + out;
    std::vector<double> next(batch * out, 0.0);
    for (std::size_t bi = 0; bi < batch; ++bi)
      for (std::size_t o = 0; o < out; ++o) {
        double acc = b[o];
        for (std::size_t i = 0; i < in; ++i) acc += w[o * in + i] * cur[bi * in + i];
        if (l + 2 < sizes.size()) acc = std::tanh(acc);
        next[bi * out + o] = acc;
      }
    cur = std::move(next);
  }
  return cur;
}

}  // namespace

TEST_CASE("zero parameters map everything to zero") {
  Mlp net({4, 8, 3}, Activation::tanh);
  net.init_zero();
  const auto out = net.forward_one(std::vector<double>{1.0, -2.0, 3.0, 4.0});
  for (double v : out) CHECK(v == 0.0);
}

TEST_CASE("single linear layer with identity weights is the identity") {
  Mlp net({3, 3}, Activation::tanh);
  auto p = net.params();
  for (std::size_t i = 0; i < 3; ++i) p[i * 3 + i] = 1.0;
  const std::vector<double> x{0.5, -1.5, 2.0};
  CHECK(net.forward_one(x) == x);
}

TEST_CASE("forward matches the naive triple-loop oracle") {
  Rng rng(123);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t in = 1 + rng.uniform_int(6);
    const std::size_t hid = 1 + rng.uniform_int(8);
    const std::size_t out = 1 + rng.uniform_int(4);
    const std::size_t batch = 1 + rng.uniform_int(5);
    Mlp net({in, hid, hid, out}, Activation::tanh);
    for (double& v : net.params()) v = rng.normal();
    std::vector<double> x(batch * in);
    for (double& v : x) v = rng.normal();
    MlpCache cache;
    const auto got = net.forward(x, batch, cache);
    const auto want = oracle_forward(net, x, batch);
    for (std::size_t i = 0; i < want.size(); ++i) {
      const double denom = std::max(1.0, std::abs(want[i]));
      CHECK(std::abs(got[i] - want[i]) / denom <= 1e-12);
    }
  }
}

TEST_CASE("backward: zero upstream gives zero gradients") {
  Rng rng(7);
  Mlp net({3, 5, 2}, Activation::relu);
  for (double& v : net.params()) v = rng.normal();
  std::vector<double> x{0.1, 0.2, 0.3};
  MlpCache cache;
  net.forward(x, 1, cache);
  std::vector<double> grads(net.param_count(), 0.0);
  net.backward(cache, std::vector<double>{0.0, 0.0}, grads);
  for (double g : grads) CHECK(g == 0.0);
}

TEST_CASE("linear net: weight gradient is the outer product upstream x input") {
  Mlp net({3, 2}, Activation::tanh);
  Rng rng(9);
  for (double& v : net.params()) v = rng.normal();
  const std::vector<double> x{0.5, -1.0, 2.0};
  const std::vector<double> up{2.0, -3.0};
  MlpCache cache;
  net.forward(x, 1, cache);
  std::vector<double> grads(net.param_count(), 0.0);
  net.backward(cache, up, grads);
  for (std::size_t o = 0; o < 2; ++o) {
    for (std::size_t i = 0; i < 3; ++i) CHECK(grads[o * 3 + i] == up[o] * x[i]);
    CHECK(grads[6 + o] == up[o]);  // bias gradient
  }
}

TEST_CASE("backward matches central finite differences") {
  Rng rng(2025);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t in = 1 + rng.uniform_int(4);
    const std::size_t out = 1 + rng.uniform_int(3);
    const std::size_t batch = 1 + rng.uniform_int(4);
    const Activation act = trial % 2 == 0 ? Activation::tanh : Activation::relu;
    Mlp net({in, 6, 5, out}, act);
    for (double& v : net.params()) v = 0.4 * rng.normal();
    std::vector<double> x(batch * in);
    for (double& v : x) v = rng.normal();
    std::vector<double> up(batch * out);
    for (double& v : up) v = rng.normal();

    // scalar objective: dot(upstream, output)
    auto eval = [&]() {
      MlpCache c;
      const auto y = net.forward(x, batch, c);
      double s = 0.0;
      for (std::size_t i = 0; i < y.size(); ++i) s += up[i] * y[i];
      return s;
    };
    MlpCache cache;
    net.forward(x, batch, cache);
    std::vector<double> analytic(net.param_count(), 0.0);
    std::vector<double> dinput(batch * in, 0.0);
    net.backward(cache, up, analytic, dinput);

    const auto fd = testutil::finite_difference(net.params(), eval);
    CHECK(testutil::max_rel_err(analytic, fd) <= 1e-4);

    // input gradient against finite differences too
    std::vector<double> fd_in(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double keep = x[i];
      x[i] = keep + 1e-5;
      const double upv = eval();
      x[i] = keep - 1e-5;
      const double dn = eval();
      x[i] = keep;
      fd_in[i] = (upv - dn) / 2e-5;
    }
    CHECK(testutil::max_rel_err(dinput, fd_in) <= 1e-4);
  }
}

TEST_CASE("forward rejects bad input") {
  Mlp net({2, 2}, Activation::tanh);
  MlpCache cache;
  CHECK_THROWS_AS(net.forward(std::vector<double>{1.0}, 1, cache), std::invalid_argument);
  CHECK_THROWS_AS(net.forward(std::vector<double>{1.0, std::nan("")}, 1, cache),
                  std::invalid_argument);
}

TEST_CASE("orthogonal init produces orthonormal rows times gain") {
  Rng rng(55);
  Mlp net({6, 4}, Activation::tanh);
  net.init_orthogonal(rng, 2.0, 2.0);
  const auto p = net.params();
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t q = 0; q <= r; ++q) {
      double dot = 0.0;
      for (std::size_t i = 0; i < 6; ++i) dot += p[r * 6 + i] * p[q * 6 + i];
      CHECK(dot == doctest::Approx(r == q ? 4.0 : 0.0).epsilon(1e-9));
    }
}

TEST_CASE("identical seeds give bit-identical nets") {
  Rng a(77), b(77);
  Mlp na({5, 16, 2}, Activation::relu), nb({5, 16, 2}, Activation::relu);
  na.init_fanin_uniform(a);
  nb.init_fanin_uniform(b);
  CHECK(std::vector<double>(na.params().begin(), na.params().end()) ==
        std::vector<double>(nb.params().begin(), nb.params().end()));
}
