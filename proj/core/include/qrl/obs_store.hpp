#pragma once

#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "qrl/packed_store.hpp"
#include "qrl/quant.hpp"

namespace qrl {

/// Observation storage behind the replay and rollout buffers.
///
/// Buffers read and write plain double vectors regardless of the backing:
///   - dense: full-precision doubles,
///   - packed: bit-packed fixed-point codes (write quantizes, read decodes),
///   - transformed: dense storage with a per-component function applied on
///     write. Used by tests to run the quantized code path with an identity
///     codec; not part of the training configuration surface.
class ObsStore {
 public:
  static ObsStore dense(std::size_t obs_dim, std::size_t capacity);
  static ObsStore packed(const QuantScheme& scheme, std::size_t obs_dim, std::size_t capacity);
  static ObsStore transformed(std::size_t obs_dim, std::size_t capacity,
                              std::function<double(double)> fn);

  void write(std::size_t index, std::span<const double> obs);
  void read(std::size_t index, std::span<double> out) const;

  std::size_t obs_dim() const { return obs_dim_; }
  std::size_t capacity() const { return capacity_; }
  /// Bytes of payload storage (exact bit-packed size when packed).
  std::size_t byte_size() const;
  bool is_packed() const { return std::holds_alternative<PackedObsStore>(backend_); }

 private:
  struct Dense {
    std::vector<double> data;
    std::function<double(double)> fn;  // empty unless transformed
  };
  ObsStore(std::size_t obs_dim, std::size_t capacity) : obs_dim_(obs_dim), capacity_(capacity) {}

  std::size_t obs_dim_ = 0;
  std::size_t capacity_ = 0;
  std::variant<Dense, PackedObsStore> backend_{Dense{}};
};

}  // namespace qrl
