#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dmcnet/adam.hpp"
#include "dmcnet/init.hpp"
#include "dmcnet/ops.hpp"
#include "dmcnet/rng.hpp"

namespace dmcnet {

// Six densely connected 3x3/stride-1/pad-1 convolutions over the stacked
// dense motion-vector field (2 ch) and residual (3 ch). Layer k consumes the
// raw 5-channel input concatenated with every earlier layer's activation, so
// the input widths run [5, 13, 21, 27, 31, 33]. A leaky rectifier
// (slope 0.1) follows every layer except the last; the final 2-channel
// refinement is added onto the motion-vector input to form the DMC.
struct GeneratorConfig {
  std::vector<int> layer_out_channels = {8, 8, 6, 4, 2, 2};
  int mv_channels = 2;
  int residual_channels = 3;
  double leaky_slope = 0.1;
  bool shortcut = true;

  int input_channels() const { return mv_channels + residual_channels; }
  int layer_count() const { return int(layer_out_channels.size()); }

  std::vector<int> input_channels_per_layer() const {
    std::vector<int> in;
    int ch = input_channels();
    for (int out : layer_out_channels) {
      in.push_back(ch);
      ch += out;
    }
    return in;
  }
};

// Multiply-accumulates of one forward pass at the given resolution:
// kernel^2 * C_in * C_out * H * W per layer (bias and activation not
// counted, one MAC counted as one FLOP).
inline std::vector<std::uint64_t> macs_per_layer(const GeneratorConfig& config, int h,
                                                 int w) {
  if (h < 1 || w < 1) throw DataError("macs_per_layer: H and W must be >= 1");
  std::vector<std::uint64_t> out;
  const auto in_ch = config.input_channels_per_layer();
  for (int k = 0; k < config.layer_count(); ++k)
    out.push_back(std::uint64_t(9) * in_ch[k] * config.layer_out_channels[k] * h * w);
  return out;
}

inline std::uint64_t count_macs(const GeneratorConfig& config, int h, int w) {
  std::uint64_t total = 0;
  for (std::uint64_t m : macs_per_layer(config, h, w)) total += m;
  return total;
}

template <typename T>
class Generator {
public:
  struct Cache {
    std::vector<Tensor4<T>> conv_inputs;  // concatenated features per layer
    std::vector<Tensor4<T>> pre_acts;     // conv outputs before activation
  };

  Generator(const GeneratorConfig& config, std::uint64_t seed) : config_(config) {
    const auto in_ch = config.input_channels_per_layer();
    const int last = config.layer_count() - 1;
    if (config.shortcut &&
        config.layer_out_channels[last] != config.mv_channels)
      throw DataError("Generator: shortcut requires the last layer to emit " +
                      std::to_string(config.mv_channels) + " channels");
    Rng rng(derive_seed(seed, "gen"));
    for (int k = 0; k < config.layer_count(); ++k) {
      ConvLayer<T> layer(config.layer_out_channels[k], in_ch[k], 3, 1, 1);
      if (k == last)
        init_conv_zero(layer);  // training starts from DMC == MV
      else
        init_conv_fanin(layer, rng);
      layers_.push_back(std::move(layer));
    }
  }

  // mv_dense in pixel units, residual scaled to [-1, 1].
  Tensor4<T> forward(const Tensor4<T>& mv_dense, const Tensor4<T>& residual,
                     Cache* cache = nullptr) const {
    if (mv_dense.c != config_.mv_channels)
      throw DataError("Generator::forward: mv input must have " +
                      std::to_string(config_.mv_channels) + " channels");
    if (residual.c != config_.residual_channels)
      throw DataError("Generator::forward: residual input must have " +
                      std::to_string(config_.residual_channels) + " channels");
    Tensor4<T> feats = concat_channels(mv_dense, residual);
    Tensor4<T> out;
    const int last = config_.layer_count() - 1;
    for (int k = 0; k <= last; ++k) {
      if (cache) cache->conv_inputs.push_back(feats);
      Tensor4<T> pre = conv2d_forward(feats, layers_[k]);
      if (cache) cache->pre_acts.push_back(pre);
      if (k < last) {
        Tensor4<T> act = leaky_relu_forward(pre, T(config_.leaky_slope));
        feats = concat_channels(feats, act);
      } else {
        out = std::move(pre);
      }
    }
    if (config_.shortcut) add_inplace(out, mv_dense);
    return out;
  }

  struct InputGrads {
    Tensor4<T> mv_grad;
    Tensor4<T> residual_grad;
  };

  // Accumulates parameter gradients into the layers and returns the
  // gradients w.r.t. both inputs.
  InputGrads backward(const Tensor4<T>& d_dmc, const Cache& cache) {
    const int last = config_.layer_count() - 1;
    const int n = d_dmc.n, h = d_dmc.h, w = d_dmc.w;

    // pending gradient for each layer's activation; filled by later layers
    std::vector<Tensor4<T>> d_act(config_.layer_count());
    for (int k = 0; k < last; ++k)
      d_act[k] = Tensor4<T>(n, config_.layer_out_channels[k], h, w);
    d_act[last] = d_dmc;

    Tensor4<T> d_raw(n, config_.input_channels(), h, w);
    for (int k = last; k >= 0; --k) {
      Tensor4<T> d_pre =
          (k < last) ? leaky_relu_backward(d_act[k], cache.pre_acts[k],
                                           T(config_.leaky_slope))
                     : d_act[k];
      ConvGrads<T> g = conv2d_backward(d_pre, cache.conv_inputs[k], layers_[k]);
      accumulate_grad(layers_[k].weight, g.weight_grad);
      accumulate_grad(layers_[k].bias, g.bias_grad);
      // route the input gradient back to the raw input and earlier layers
      add_inplace(d_raw, channel_slice(g.input_grad, 0, d_raw.c));
      int off = config_.input_channels();
      for (int j = 0; j < k; ++j) {
        add_inplace(d_act[j],
                    channel_slice(g.input_grad, off, config_.layer_out_channels[j]));
        off += config_.layer_out_channels[j];
      }
    }

    InputGrads ig;
    ig.mv_grad = channel_slice(d_raw, 0, config_.mv_channels);
    ig.residual_grad =
        channel_slice(d_raw, config_.mv_channels, config_.residual_channels);
    if (config_.shortcut) add_inplace(ig.mv_grad, d_dmc);
    return ig;
  }

  std::vector<Param<T>> params() {
    std::vector<Param<T>> out;
    for (int k = 0; k < config_.layer_count(); ++k) {
      out.push_back({"gen.conv" + std::to_string(k) + ".weight", &layers_[k].weight, 1.0});
      out.push_back({"gen.conv" + std::to_string(k) + ".bias", &layers_[k].bias, 1.0});
    }
    return out;
  }

  void zero_grad() {
    for (auto& l : layers_) {
      l.weight.zero_grad();
      l.bias.zero_grad();
    }
  }

  const GeneratorConfig& config() const { return config_; }
  std::vector<ConvLayer<T>>& layers() { return layers_; }
  const std::vector<ConvLayer<T>>& layers() const { return layers_; }

private:
  GeneratorConfig config_;
  std::vector<ConvLayer<T>> layers_;
};

}  // namespace dmcnet
