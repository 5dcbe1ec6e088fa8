#include "qrl/packed_store.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace qrl {

PackedObsStore::PackedObsStore(QuantScheme scheme, std::size_t obs_dim, std::size_t capacity)
    : scheme_(scheme), obs_dim_(obs_dim), capacity_(capacity) {
  if (obs_dim == 0 || capacity == 0)
    throw std::invalid_argument("PackedObsStore: obs_dim and capacity must be positive");
  bytes_.assign(byte_size_for(capacity, obs_dim, scheme.total_bits), 0);
}

std::size_t PackedObsStore::byte_size_for(std::size_t capacity, std::size_t obs_dim,
                                          int total_bits) {
  const std::size_t bits = capacity * obs_dim * static_cast<std::size_t>(total_bits);
  return (bits + 7) / 8;
}

// Codes are stored little-endian across the bit stream: bit k of the field
// lands at stream bit (bit_off + k), which is bit ((bit_off + k) % 8) of
// byte ((bit_off + k) / 8).
std::uint64_t PackedObsStore::get_bits(std::size_t bit_off) const {
  const int nbits = scheme_.total_bits;
  std::uint64_t value = 0;
  int got = 0;
  std::size_t byte = bit_off / 8;
  int shift = static_cast<int>(bit_off % 8);
  while (got < nbits) {
    const int take = std::min(8 - shift, nbits - got);
    const std::uint64_t chunk =
        (static_cast<std::uint64_t>(bytes_[byte]) >> shift) & ((1ull << take) - 1);
    value |= chunk << got;
    got += take;
    ++byte;
    shift = 0;
  }
  return value;
}

void PackedObsStore::set_bits(std::size_t bit_off, std::uint64_t value) {
  const int nbits = scheme_.total_bits;
  int put = 0;
  std::size_t byte = bit_off / 8;
  int shift = static_cast<int>(bit_off % 8);
  while (put < nbits) {
    const int take = std::min(8 - shift, nbits - put);
    const std::uint8_t mask = static_cast<std::uint8_t>(((1u << take) - 1u) << shift);
    const std::uint8_t chunk = static_cast<std::uint8_t>((value >> put) << shift);
    bytes_[byte] = static_cast<std::uint8_t>((bytes_[byte] & ~mask) | (chunk & mask));
    put += take;
    ++byte;
    shift = 0;
  }
}

void PackedObsStore::write(std::size_t index, std::span<const double> obs) {
  if (index >= capacity_)
    throw std::out_of_range("PackedObsStore::write: index " + std::to_string(index) +
                            " >= capacity " + std::to_string(capacity_));
  if (obs.size() != obs_dim_)
    throw std::invalid_argument("PackedObsStore::write: observation dimension mismatch");
  const int nbits = scheme_.total_bits;
  const std::uint64_t mask = (nbits == 64) ? ~0ull : ((1ull << nbits) - 1);
  std::size_t bit_off = index * obs_dim_ * static_cast<std::size_t>(nbits);
  for (double x : obs) {
    const Code code = encode(x, scheme_);
    set_bits(bit_off, static_cast<std::uint64_t>(code) & mask);
    bit_off += static_cast<std::size_t>(nbits);
  }
}

void PackedObsStore::read(std::size_t index, std::span<double> out) const {
  if (index >= capacity_)
    throw std::out_of_range("PackedObsStore::read: index " + std::to_string(index) +
                            " >= capacity " + std::to_string(capacity_));
  if (out.size() != obs_dim_)
    throw std::invalid_argument("PackedObsStore::read: output dimension mismatch");
  const int nbits = scheme_.total_bits;
  std::size_t bit_off = index * obs_dim_ * static_cast<std::size_t>(nbits);
  for (double& x : out) {
    std::uint64_t raw = get_bits(bit_off);
    // sign-extend from total_bits to 64
    if (nbits < 64 && (raw >> (nbits - 1)) & 1ull) raw |= ~((1ull << nbits) - 1);
    x = static_cast<double>(static_cast<std::int64_t>(raw)) / scheme_.scale;
    bit_off += static_cast<std::size_t>(nbits);
  }
}

std::vector<double> PackedObsStore::read(std::size_t index) const {
  std::vector<double> out(obs_dim_);
  read(index, std::span<double>(out));
  return out;
}

}  // namespace qrl
