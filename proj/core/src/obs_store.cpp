#include "qrl/obs_store.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qrl {

ObsStore ObsStore::dense(std::size_t obs_dim, std::size_t capacity) {
  if (obs_dim == 0 || capacity == 0)
    throw std::invalid_argument("ObsStore: obs_dim and capacity must be positive");
  ObsStore s(obs_dim, capacity);
  s.backend_ = Dense{std::vector<double>(obs_dim * capacity, 0.0), {}};
  return s;
}

ObsStore ObsStore::packed(const QuantScheme& scheme, std::size_t obs_dim, std::size_t capacity) {
  ObsStore s(obs_dim, capacity);
  s.backend_ = PackedObsStore(scheme, obs_dim, capacity);
  return s;
}

ObsStore ObsStore::transformed(std::size_t obs_dim, std::size_t capacity,
                               std::function<double(double)> fn) {
  ObsStore s = dense(obs_dim, capacity);
  std::get<Dense>(s.backend_).fn = std::move(fn);
  return s;
}

void ObsStore::write(std::size_t index, std::span<const double> obs) {
  if (index >= capacity_)
    throw std::out_of_range("ObsStore::write: index " + std::to_string(index) + " >= capacity " +
                            std::to_string(capacity_));
  if (obs.size() != obs_dim_)
    throw std::invalid_argument("ObsStore::write: observation dimension mismatch");
  if (auto* d = std::get_if<Dense>(&backend_)) {
    for (double x : obs)
      if (!std::isfinite(x))
        throw std::invalid_argument("ObsStore::write: observation value is not finite");
    double* dst = d->data.data() + index * obs_dim_;
    if (d->fn) {
      for (std::size_t i = 0; i < obs_dim_; ++i) dst[i] = d->fn(obs[i]);
    } else {
      std::copy(obs.begin(), obs.end(), dst);
    }
  } else {
    std::get<PackedObsStore>(backend_).write(index, obs);
  }
}

void ObsStore::read(std::size_t index, std::span<double> out) const {
  if (index >= capacity_)
    throw std::out_of_range("ObsStore::read: index " + std::to_string(index) + " >= capacity " +
                            std::to_string(capacity_));
  if (out.size() != obs_dim_)
    throw std::invalid_argument("ObsStore::read: output dimension mismatch");
  if (const auto* d = std::get_if<Dense>(&backend_)) {
    const double* src = d->data.data() + index * obs_dim_;
    std::copy(src, src + obs_dim_, out.begin());
  } else {
    std::get<PackedObsStore>(backend_).read(index, out);
  }
}

std::size_t ObsStore::byte_size() const {
  if (const auto* d = std::get_if<Dense>(&backend_)) return d->data.size() * sizeof(double);
  return std::get<PackedObsStore>(backend_).byte_size();
}

}  // namespace qrl
