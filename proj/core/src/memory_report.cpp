#include "qrl/memory_report.hpp"

#include <stdexcept>

#include "json.hpp"
#include "qrl/packed_store.hpp"

namespace qrl {

std::string_view to_string(AlgoKind k) { return k == AlgoKind::ppo ? "ppo" : "sac"; }

AlgoKind algo_kind_from_string(std::string_view s) {
  if (s == "ppo") return AlgoKind::ppo;
  if (s == "sac") return AlgoKind::sac;
  throw std::invalid_argument("unknown algorithm '" + std::string(s) + "' (expected ppo|sac)");
}

namespace {

// weights + biases of an MLP with the given in/hidden/out chain
std::size_t mlp_params(std::size_t in, const std::vector<std::size_t>& hidden, std::size_t out) {
  std::size_t n = 0;
  std::size_t prev = in;
  for (std::size_t h : hidden) {
    n += prev * h + h;
    prev = h;
  }
  n += prev * out + out;
  return n;
}

std::uint64_t obs_field_bytes(const MemoryReportConfig& cfg) {
  if (cfg.scheme)
    return PackedObsStore::byte_size_for(cfg.buffer_entries, cfg.obs_dim,
                                         cfg.scheme->total_bits);
  return static_cast<std::uint64_t>(cfg.buffer_entries) * cfg.obs_dim * cfg.float_bytes;
}

// bytes of everything in the buffer except observation fields
std::uint64_t aux_field_bytes(const MemoryReportConfig& cfg) {
  const std::uint64_t e = cfg.buffer_entries;
  const std::uint64_t fb = cfg.float_bytes;
  switch (cfg.layout) {
    case BufferLayout::sar:
      return e * (cfg.act_dim * fb + fb);  // action + reward
    case BufferLayout::full:
      if (cfg.algo == AlgoKind::ppo)
        // action + reward, value, log-prob, advantage, return + start flag
        return e * (cfg.act_dim * fb + 5 * fb + 1);
      // action + reward + done flag
      return e * (cfg.act_dim * fb + fb + 1);
  }
  throw std::logic_error("unreachable");
}

}  // namespace

std::vector<std::pair<std::string, std::size_t>> model_param_counts(
    AlgoKind algo, std::size_t obs_dim, std::size_t act_dim,
    const std::vector<std::size_t>& hidden) {
  if (algo == AlgoKind::ppo) {
    // policy mean net + state-independent log-std vector; separate value net
    return {{"policy", mlp_params(obs_dim, hidden, act_dim) + act_dim},
            {"value", mlp_params(obs_dim, hidden, 1)}};
  }
  // squashed-Gaussian policy emits mean and log-std per action dimension
  const std::size_t q = mlp_params(obs_dim + act_dim, hidden, 1);
  return {{"policy", mlp_params(obs_dim, hidden, 2 * act_dim)}, {"q1", q}, {"q2", q}};
}

MemoryReport memory_report(const MemoryReportConfig& cfg) {
  if (cfg.obs_dim == 0 || cfg.act_dim == 0 || cfg.buffer_entries == 0)
    throw std::invalid_argument("memory_report: dimensions and entries must be positive");
  if (cfg.float_bytes != 4 && cfg.float_bytes != 8)
    throw std::invalid_argument("memory_report: float_bytes must be 4 or 8");

  MemoryReport r;
  for (const auto& [name, count] : model_param_counts(cfg.algo, cfg.obs_dim, cfg.act_dim,
                                                      cfg.hidden_layers)) {
    const std::uint64_t bytes = static_cast<std::uint64_t>(count) * cfg.float_bytes;
    r.model_bytes_per_net.emplace_back(name, bytes);
    r.model_bytes_total += bytes;
  }

  const std::uint64_t obs_per_field = obs_field_bytes(cfg);
  // SAC full layout stores next_obs in its own store, same size as obs
  const int obs_fields =
      (cfg.layout == BufferLayout::full && cfg.algo == AlgoKind::sac) ? 2 : 1;
  r.obs_bytes = obs_per_field * obs_fields;
  r.buffer_bytes = r.obs_bytes + aux_field_bytes(cfg);
  r.total_bytes = r.model_bytes_total + r.buffer_bytes;
  r.obs_fraction_of_buffer = static_cast<double>(r.obs_bytes) / r.buffer_bytes;
  r.buffer_fraction_of_total = static_cast<double>(r.buffer_bytes) / r.total_bytes;

  if (cfg.scheme) {
    MemoryReportConfig base = cfg;
    base.scheme.reset();
    const std::uint64_t baseline_buffer = obs_field_bytes(base) * obs_fields +
                                          aux_field_bytes(base);
    r.reduction_ratio = static_cast<double>(baseline_buffer) / r.buffer_bytes;
  }
  return r;
}

std::string MemoryReport::to_json_string(int indent) const {
  nlohmann::json model;
  for (const auto& [name, bytes] : model_bytes_per_net) model[name] = bytes;
  model["total"] = model_bytes_total;
  nlohmann::json j{{"model_bytes", model},
                   {"buffer_bytes", buffer_bytes},
                   {"obs_bytes", obs_bytes},
                   {"total_bytes", total_bytes},
                   {"obs_fraction_of_buffer", obs_fraction_of_buffer},
                   {"buffer_fraction_of_total", buffer_fraction_of_total},
                   {"reduction_ratio", reduction_ratio}};
  return j.dump(indent);
}

}  // namespace qrl
