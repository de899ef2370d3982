#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dmcnet/adam.hpp"
#include "dmcnet/init.hpp"
#include "dmcnet/ops.hpp"
#include "dmcnet/rng.hpp"

namespace dmcnet {

// Shared trunk for the discriminator and the per-stream classifiers:
// a stack of 3x3 stride-2 convolutions, each followed by a leaky rectifier,
// then global average pooling and a fully connected head.
struct ConvStackConfig {
  int in_channels = 2;
  std::vector<int> channels = {16, 32, 64, 128};
  double leaky_slope = 0.1;
  int head_out = 2;
};

template <typename T>
class ConvStackNet {
public:
  struct Cache {
    std::vector<Tensor4<T>> conv_inputs;
    std::vector<Tensor4<T>> pre_acts;
    Tensor4<T> last_act;  // input to the pooling stage
    Tensor4<T> pooled;    // input to the head
  };

  ConvStackNet() = default;
  ConvStackNet(const ConvStackConfig& config, std::uint64_t seed,
               std::string name_prefix)
      : config_(config), prefix_(std::move(name_prefix)) {
    Rng rng(seed);
    int ch = config.in_channels;
    for (int out_ch : config.channels) {
      ConvLayer<T> layer(out_ch, ch, 3, 2, 1);
      init_conv_fanin(layer, rng);
      convs_.push_back(std::move(layer));
      ch = out_ch;
    }
    head_ = LinearLayer<T>(config.head_out, ch);
    init_linear_fanin(head_, rng);
  }

  Tensor4<T> forward(const Tensor4<T>& x, Cache* cache = nullptr) const {
    if (x.c != config_.in_channels)
      throw DataError(prefix_ + ": input has " + std::to_string(x.c) +
                      " channels, expected " + std::to_string(config_.in_channels));
    Tensor4<T> cur = x;
    for (const auto& layer : convs_) {
      if (cache) cache->conv_inputs.push_back(cur);
      Tensor4<T> pre = conv2d_forward(cur, layer);
      if (cache) cache->pre_acts.push_back(pre);
      cur = leaky_relu_forward(pre, T(config_.leaky_slope));
    }
    if (cache) cache->last_act = cur;
    Tensor4<T> pooled = global_avg_pool_forward(cur);
    if (cache) cache->pooled = pooled;
    return linear_forward(pooled, head_);
  }

  // Accumulates parameter gradients and returns the input gradient.
  Tensor4<T> backward(const Tensor4<T>& d_logits, const Cache& cache) {
    LinearGrads<T> hg = linear_backward(d_logits, cache.pooled, head_);
    accumulate_grad(head_.weight, hg.weight_grad);
    accumulate_grad(head_.bias, hg.bias_grad);
    Tensor4<T> d =
        global_avg_pool_backward(hg.input_grad, cache.last_act.h, cache.last_act.w);
    for (int k = int(convs_.size()) - 1; k >= 0; --k) {
      Tensor4<T> d_pre =
          leaky_relu_backward(d, cache.pre_acts[k], T(config_.leaky_slope));
      ConvGrads<T> g = conv2d_backward(d_pre, cache.conv_inputs[k], convs_[k]);
      accumulate_grad(convs_[k].weight, g.weight_grad);
      accumulate_grad(convs_[k].bias, g.bias_grad);
      d = std::move(g.input_grad);
    }
    return d;
  }

  // body_lr_scale applies to every layer except the head.
  std::vector<Param<T>> params(double body_lr_scale = 1.0) {
    std::vector<Param<T>> out;
    for (std::size_t k = 0; k < convs_.size(); ++k) {
      const std::string base = prefix_ + ".conv" + std::to_string(k);
      out.push_back({base + ".weight", &convs_[k].weight, body_lr_scale});
      out.push_back({base + ".bias", &convs_[k].bias, body_lr_scale});
    }
    out.push_back({prefix_ + ".fc.weight", &head_.weight, 1.0});
    out.push_back({prefix_ + ".fc.bias", &head_.bias, 1.0});
    return out;
  }

  void zero_grad() {
    for (auto& l : convs_) {
      l.weight.zero_grad();
      l.bias.zero_grad();
    }
    head_.weight.zero_grad();
    head_.bias.zero_grad();
  }

  const ConvStackConfig& config() const { return config_; }
  const std::string& prefix() const { return prefix_; }

private:
  ConvStackConfig config_;
  std::string prefix_;
  std::vector<ConvLayer<T>> convs_;
  LinearLayer<T> head_;
};

}  // namespace dmcnet
