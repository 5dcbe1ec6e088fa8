#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qrl/quant.hpp"

namespace qrl {

/// Contiguous bit array of fixed-point observation codes.
///
/// Observation i occupies bits [i*obs_dim*total_bits, (i+1)*obs_dim*total_bits)
/// with no per-observation or per-component padding; the array is rounded up
/// to whole bytes only at its very end, so
///   byte_size() == ceil(capacity * obs_dim * total_bits / 8).
class PackedObsStore {
 public:
  PackedObsStore(QuantScheme scheme, std::size_t obs_dim, std::size_t capacity);

  /// Quantizes obs componentwise and packs the codes at slot `index`.
  /// Throws std::out_of_range on a bad index, std::invalid_argument on a
  /// dimension mismatch or a non-finite component.
  void write(std::size_t index, std::span<const double> obs);

  /// Dequantized values of the codes stored at slot `index`.
  void read(std::size_t index, std::span<double> out) const;
  std::vector<double> read(std::size_t index) const;

  const QuantScheme& scheme() const { return scheme_; }
  std::size_t obs_dim() const { return obs_dim_; }
  std::size_t capacity() const { return capacity_; }
  std::size_t byte_size() const { return bytes_.size(); }

  /// Exact byte size of a store with the given geometry.
  static std::size_t byte_size_for(std::size_t capacity, std::size_t obs_dim, int total_bits);

 private:
  std::uint64_t get_bits(std::size_t bit_off) const;
  void set_bits(std::size_t bit_off, std::uint64_t value);

  QuantScheme scheme_;
  std::size_t obs_dim_;
  std::size_t capacity_;
  std::vector<std::uint8_t> bytes_;
};

}  // namespace qrl
