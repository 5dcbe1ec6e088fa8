#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qrl/rng.hpp"

namespace qrl {

enum class Activation { relu, tanh };

/// Scratch space for one forward pass, reused across calls.
/// acts[0] is a copy of the input batch, acts[l] the post-activation output
/// of layer l-1 (the last entry is the raw linear output of the final layer).
struct MlpCache {
  std::size_t batch = 0;
  std::vector<std::vector<double>> acts;
};

/// Feed-forward network with a hidden activation and a linear output layer.
/// Parameters live in one flat vector ([W0 | b0 | W1 | b1 | ...], weights
/// row-major [out x in]) so optimizers and finite-difference checks can walk
/// them uniformly. All arithmetic is double precision.
class Mlp {
 public:
  Mlp() = default;
  /// sizes = {in, hidden..., out}; needs at least {in, out}.
  Mlp(std::vector<std::size_t> sizes, Activation hidden_act);

  void init_zero();
  /// Orthogonal rows/columns scaled by `gain` (final layer uses final_gain).
  void init_orthogonal(Rng& rng, double hidden_gain, double final_gain);
  /// W, b ~ U[-1/sqrt(fan_in), 1/sqrt(fan_in)] per layer.
  void init_fanin_uniform(Rng& rng);

  /// Batched forward pass; input is row-major [batch x in_dim].
  /// Returns the output batch [batch x out_dim] owned by the cache.
  /// Throws std::invalid_argument on dimension mismatch or non-finite input.
  std::span<const double> forward(std::span<const double> input, std::size_t batch,
                                  MlpCache& cache) const;
  std::vector<double> forward_one(std::span<const double> input) const;

  /// Reverse-mode gradients of the forward pass recorded in `cache`.
  /// `dout` is the loss gradient at the output [batch x out_dim];
  /// parameter gradients are accumulated (+=) into dparams (param_count
  /// long); when dinput is non-empty the input gradient [batch x in_dim]
  /// is written there.
  void backward(const MlpCache& cache, std::span<const double> dout, std::span<double> dparams,
                std::span<double> dinput = {}) const;

  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }
  std::size_t param_count() const { return params_.size(); }
  std::size_t in_dim() const { return sizes_.front(); }
  std::size_t out_dim() const { return sizes_.back(); }
  const std::vector<std::size_t>& sizes() const { return sizes_; }
  std::size_t layer_count() const { return layers_.size(); }

  static std::size_t count_params(const std::vector<std::size_t>& sizes);

 private:
  struct Layer {
    std::size_t in, out, w_off, b_off;
  };
  std::vector<std::size_t> sizes_;
  std::vector<Layer> layers_;
  std::vector<double> params_;
  Activation act_ = Activation::tanh;
};

}  // namespace qrl
