#include "qrl/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace qrl {

Mlp::Mlp(std::vector<std::size_t> sizes, Activation hidden_act)
    : sizes_(std::move(sizes)), act_(hidden_act) {
  if (sizes_.size() < 2) throw std::invalid_argument("Mlp: need at least input and output sizes");
  for (std::size_t s : sizes_)
    if (s == 0) throw std::invalid_argument("Mlp: layer sizes must be positive");
  std::size_t off = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    Layer layer{sizes_[l], sizes_[l + 1], off, off + sizes_[l] * sizes_[l + 1]};
    off = layer.b_off + layer.out;
    layers_.push_back(layer);
  }
  params_.assign(off, 0.0);
}

std::size_t Mlp::count_params(const std::vector<std::size_t>& sizes) {
  std::size_t n = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) n += sizes[l] * sizes[l + 1] + sizes[l + 1];
  return n;
}

void Mlp::init_zero() { std::fill(params_.begin(), params_.end(), 0.0); }

void Mlp::init_fanin_uniform(Rng& rng) {
  for (const Layer& l : layers_) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(l.in));
    for (std::size_t i = 0; i < l.in * l.out; ++i)
      params_[l.w_off + i] = rng.uniform(-bound, bound);
    for (std::size_t i = 0; i < l.out; ++i) params_[l.b_off + i] = rng.uniform(-bound, bound);
  }
}

void Mlp::init_orthogonal(Rng& rng, double hidden_gain, double final_gain) {
  for (std::size_t li = 0; li < layers_.size(); ++li) {
    const Layer& l = layers_[li];
    const double gain = (li + 1 == layers_.size()) ? final_gain : hidden_gain;
    double* w = params_.data() + l.w_off;
    for (std::size_t i = 0; i < l.in * l.out; ++i) w[i] = rng.normal();
    // modified Gram-Schmidt over the shorter side; a Gaussian matrix is
    // almost surely well-conditioned so this is numerically adequate
    const bool rows = l.out <= l.in;
    const std::size_t nvec = rows ? l.out : l.in;
    const std::size_t dim = rows ? l.in : l.out;
    auto at = [&](std::size_t v, std::size_t d) -> double& {
      return rows ? w[v * l.in + d] : w[d * l.in + v];
    };
    for (std::size_t v = 0; v < nvec; ++v) {
      for (std::size_t u = 0; u < v; ++u) {
        double dot = 0;
        for (std::size_t d = 0; d < dim; ++d) dot += at(u, d) * at(v, d);
        for (std::size_t d = 0; d < dim; ++d) at(v, d) -= dot * at(u, d);
      }
      double norm = 0;
      for (std::size_t d = 0; d < dim; ++d) norm += at(v, d) * at(v, d);
      norm = std::sqrt(norm);
      for (std::size_t d = 0; d < dim; ++d) at(v, d) /= norm;
    }
    for (std::size_t i = 0; i < l.in * l.out; ++i) w[i] *= gain;
    for (std::size_t i = 0; i < l.out; ++i) params_[l.b_off + i] = 0.0;
  }
}

std::span<const double> Mlp::forward(std::span<const double> input, std::size_t batch,
                                     MlpCache& cache) const {
  if (batch == 0) throw std::invalid_argument("Mlp::forward: empty batch");
  if (input.size() != batch * in_dim())
    throw std::invalid_argument("Mlp::forward: input dimension mismatch");
  for (double x : input)
    if (!std::isfinite(x)) throw std::invalid_argument("Mlp::forward: non-finite input");

  cache.batch = batch;
  cache.acts.resize(layers_.size() + 1);
  cache.acts[0].assign(input.begin(), input.end());

  for (std::size_t li = 0; li < layers_.size(); ++li) {
    const Layer& l = layers_[li];
    const std::vector<double>& in = cache.acts[li];
    std::vector<double>& out = cache.acts[li + 1];
    out.resize(batch * l.out);
    const double* w = params_.data() + l.w_off;
    const double* b = params_.data() + l.b_off;
    for (std::size_t bi = 0; bi < batch; ++bi) {
      const double* x = in.data() + bi * l.in;
      double* y = out.data() + bi * l.out;
      for (std::size_t o = 0; o < l.out; ++o) {
        const double* wr = w + o * l.in;
        double acc = b[o];
        for (std::size_t i = 0; i < l.in; ++i) acc += wr[i] * x[i];
        y[o] = acc;
      }
    }
    if (li + 1 < layers_.size()) {
      if (act_ == Activation::relu) {
        for (double& v : out) v = v > 0.0 ? v : 0.0;
      } else {
        for (double& v : out) v = std::tanh(v);
      }
    }
  }
  return cache.acts.back();
}

std::vector<double> Mlp::forward_one(std::span<const double> input) const {
  MlpCache cache;
  auto out = forward(input, 1, cache);
  return std::vector<double>(out.begin(), out.end());
}

void Mlp::backward(const MlpCache& cache, std::span<const double> dout,
                   std::span<double> dparams, std::span<double> dinput) const {
  const std::size_t batch = cache.batch;
  if (cache.acts.size() != layers_.size() + 1)
    throw std::invalid_argument("Mlp::backward: cache does not match a forward pass");
  if (dout.size() != batch * out_dim())
    throw std::invalid_argument("Mlp::backward: output gradient dimension mismatch");
  if (dparams.size() != params_.size())
    throw std::invalid_argument("Mlp::backward: parameter gradient size mismatch");
  if (!dinput.empty() && dinput.size() != batch * in_dim())
    throw std::invalid_argument("Mlp::backward: input gradient size mismatch");

  std::vector<double> d(dout.begin(), dout.end());
  std::vector<double> dprev;
  for (std::size_t li = layers_.size(); li-- > 0;) {
    const Layer& l = layers_[li];
    const std::vector<double>& in = cache.acts[li];
    // hidden layers: gradient w.r.t. the pre-activation
    if (li + 1 < layers_.size()) {
      const std::vector<double>& out = cache.acts[li + 1];
      if (act_ == Activation::relu) {
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = out[i] > 0.0 ? d[i] : 0.0;
      } else {
        for (std::size_t i = 0; i < d.size(); ++i) d[i] *= 1.0 - out[i] * out[i];
      }
    }
    double* dw = dparams.data() + l.w_off;
    double* db = dparams.data() + l.b_off;
    for (std::size_t bi = 0; bi < batch; ++bi) {
      const double* x = in.data() + bi * l.in;
      const double* g = d.data() + bi * l.out;
      for (std::size_t o = 0; o < l.out; ++o) {
        const double go = g[o];
        db[o] += go;
        double* dwr = dw + o * l.in;
        for (std::size_t i = 0; i < l.in; ++i) dwr[i] += go * x[i];
      }
    }
    const bool need_dinput = li > 0 || !dinput.empty();
    if (need_dinput) {
      dprev.assign(batch * l.in, 0.0);
      const double* w = params_.data() + l.w_off;
      for (std::size_t bi = 0; bi < batch; ++bi) {
        const double* g = d.data() + bi * l.out;
        double* dx = dprev.data() + bi * l.in;
        for (std::size_t o = 0; o < l.out; ++o) {
          const double go = g[o];
          const double* wr = w + o * l.in;
          for (std::size_t i = 0; i < l.in; ++i) dx[i] += go * wr[i];
        }
      }
      d.swap(dprev);
    }
  }
  if (!dinput.empty()) std::copy(d.begin(), d.end(), dinput.begin());
}

}  // namespace qrl
