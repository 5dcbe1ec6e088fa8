#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "qrl/packed_store.hpp"
#include "qrl/rng.hpp"

using namespace qrl;

TEST_CASE("packed store size law") {
  const QuantScheme s1 = make_scheme(127, 1);
  PackedObsStore store(s1, 3, 1000);
  CHECK(store.byte_size() == 4500);  // ceil(1000*3*12/8)
  CHECK(1000 * 3 * sizeof(double) == 24000);
  CHECK(24000.0 / store.byte_size() == doctest::Approx(64.0 / 12.0).epsilon(1e-9));

  // ceiling applies only at the very end of the array
  CHECK(PackedObsStore::byte_size_for(1, 1, 12) == 2);
  CHECK(PackedObsStore::byte_size_for(3, 1, 12) == 5);   // 36 bits
  CHECK(PackedObsStore::byte_size_for(5, 7, 15) == 66);  // 525 bits -> 65.625
}

TEST_CASE("write then read dequantizes componentwise") {
  const QuantScheme s = make_scheme(127, 1);
  PackedObsStore store(s, 3, 16);
  const std::vector<double> obs{3.14159, -200.0, 0.0};
  store.write(7, obs);
  const std::vector<double> back = store.read(7);
  CHECK(back[0] == 3.1);
  CHECK(back[1] == -127.0);
  CHECK(back[2] == 0.0);
}

TEST_CASE("never-written slots read as zero") {
  const QuantScheme s = make_scheme(127, 2);
  PackedObsStore store(s, 4, 8);
  for (std::size_t i = 0; i < 8; ++i)
    for (double v : store.read(i)) CHECK(v == 0.0);
}

TEST_CASE("fields straddle byte boundaries") {
  const QuantScheme s = make_scheme(127, 1);  // 12 bits: index 1 occupies bits 12..24
  PackedObsStore store(s, 1, 4);
  store.write(1, std::vector<double>{-42.7});
  store.write(0, std::vector<double>{13.3});
  store.write(2, std::vector<double>{127.0});
  CHECK(store.read(1)[0] == -42.7);
  CHECK(store.read(0)[0] == 13.3);
  CHECK(store.read(2)[0] == 127.0);
}

TEST_CASE("writes do not disturb neighbors") {
  const QuantScheme s = make_scheme(127, 1);
  PackedObsStore store(s, 2, 10);
  store.write(4, std::vector<double>{1.5, -2.5});
  const auto before = store.read(4);
  store.write(3, std::vector<double>{99.9, -99.9});
  store.write(5, std::vector<double>{-127.0, 127.0});
  CHECK(store.read(4) == before);
}

TEST_CASE("store error cases") {
  const QuantScheme s = make_scheme(127, 1);
  PackedObsStore store(s, 3, 5);
  CHECK_THROWS_AS(store.write(5, std::vector<double>{1, 2, 3}), std::out_of_range);
  CHECK_THROWS_AS(store.write(0, std::vector<double>{1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(store.write(0, std::vector<double>{1, 2, std::nan("")}),
                  std::invalid_argument);
  CHECK_THROWS_AS(store.read(5), std::out_of_range);
  std::vector<double> small(2);
  CHECK_THROWS_AS(store.read(0, std::span<double>(small)), std::invalid_argument);
}

TEST_CASE("packed round-trip equals quantize: exhaustive small, randomized large") {
  Rng rng(99);
  // exhaustive over tiny geometries
  for (std::size_t dim : {1u, 2u, 3u}) {
    for (std::size_t cap : {1u, 2u, 5u}) {
      for (const auto& [bound, m] : {std::pair<double, int>{127, 1}, {8, 3}}) {
        const QuantScheme s = make_scheme(bound, m);
        PackedObsStore store(s, dim, cap);
        std::vector<double> obs(dim);
        for (std::size_t i = 0; i < cap; ++i) {
          for (double& v : obs) v = rng.uniform(-1.5 * bound, 1.5 * bound);
          store.write(i, obs);
          const auto back = store.read(i);
          for (std::size_t d = 0; d < dim; ++d) CHECK(back[d] == quantize(obs[d], s));
        }
      }
    }
  }
  // randomized over a large store with random write order
  const QuantScheme s = make_scheme(127, 2);
  const std::size_t dim = 7, cap = 521;
  PackedObsStore store(s, dim, cap);
  std::vector<std::vector<double>> shadow(cap);
  std::vector<double> obs(dim);
  for (int iter = 0; iter < 3000; ++iter) {
    const std::size_t i = rng.uniform_int(cap);
    for (double& v : obs) v = rng.uniform(-150.0, 150.0);
    store.write(i, obs);
    shadow[i] = obs;
  }
  for (std::size_t i = 0; i < cap; ++i) {
    if (shadow[i].empty()) continue;
    const auto back = store.read(i);
    for (std::size_t d = 0; d < dim; ++d) CHECK(back[d] == quantize(shadow[i][d], s));
  }
}

TEST_CASE("size law holds for random geometries") {
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const std::size_t cap = 1 + rng.uniform_int(400);
    const std::size_t dim = 1 + rng.uniform_int(40);
    const int m = static_cast<int>(rng.uniform_int(3));
    const QuantScheme s = make_scheme(127, m);
    PackedObsStore store(s, dim, cap);
    const std::size_t bits = cap * dim * static_cast<std::size_t>(s.total_bits);
    CHECK(store.byte_size() == (bits + 7) / 8);
  }
}
