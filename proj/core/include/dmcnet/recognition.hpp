#pragma once

#include <span>
#include <string>
#include <vector>

#include "dmcnet/convstack.hpp"

namespace dmcnet {

enum class StreamId { I, MV, R, DMC };

inline const char* stream_name(StreamId s) {
  switch (s) {
    case StreamId::I: return "i";
    case StreamId::MV: return "mv";
    case StreamId::R: return "r";
    case StreamId::DMC: return "dmc";
  }
  return "?";
}

// Small stand-in action classifier: four stride-2 conv blocks, global
// average pooling and a K-way head. Pluggable behind forward/params so a
// deeper backbone can replace it.
struct ClassifierConfig {
  int in_channels = 2;  // 3 for the I and R streams, 2 for MV and DMC
  int classes = 8;
  std::vector<int> channels = {16, 32, 64, 128};
  double leaky_slope = 0.1;
};

template <typename T>
class Classifier {
public:
  using Cache = typename ConvStackNet<T>::Cache;

  Classifier() = default;
  Classifier(const ClassifierConfig& config, std::uint64_t seed,
             const std::string& stream)
      : config_(config),
        net_(ConvStackConfig{config.in_channels, config.channels,
                             config.leaky_slope, config.classes},
             seed, "cls." + stream) {}

  Tensor4<T> forward(const Tensor4<T>& x, Cache* cache = nullptr) const {
    return net_.forward(x, cache);
  }
  Tensor4<T> backward(const Tensor4<T>& d_logits, const Cache& cache) {
    return net_.backward(d_logits, cache);
  }
  std::vector<Param<T>> params(double body_lr_scale = 1.0) {
    return net_.params(body_lr_scale);
  }
  void zero_grad() { net_.zero_grad(); }
  const ClassifierConfig& config() const { return config_; }

private:
  ClassifierConfig config_;
  ConvStackNet<T> net_;
};

template <typename T>
double loss_cls(const Tensor4<T>& logits, std::span<const int> labels) {
  return softmax_ce_loss(logits, labels);
}

template <typename T>
Tensor4<T> loss_cls_backward(const Tensor4<T>& logits, std::span<const int> labels) {
  return softmax_ce_backward(logits, labels);
}

// One modality's video-level class probabilities.
struct StreamPrediction {
  StreamId stream = StreamId::DMC;
  std::vector<double> scores;  // length K, sums to 1
};

// Weighted arithmetic mean of per-stream score vectors, renormalized to
// sum 1. Invariant under uniform positive rescaling of the weights.
std::vector<double> fuse_scores(std::span<const StreamPrediction> predictions,
                                std::span<const double> weights);

// Fraction of videos whose argmax score equals the label; argmax ties break
// toward the lowest class index.
double top1_accuracy(const std::vector<std::vector<double>>& scores,
                     std::span<const int> labels);

}  // namespace dmcnet
