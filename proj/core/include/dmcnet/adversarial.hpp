#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "dmcnet/convstack.hpp"
#include "dmcnet/generator.hpp"
#include "dmcnet/recognition.hpp"

namespace dmcnet {

// Discriminator output classes: index 0 = fake (generated DMC),
// index 1 = real (optical flow).
inline constexpr int kFakeClass = 0;
inline constexpr int kRealClass = 1;

// Logs are clamped at this floor so a saturated discriminator cannot emit
// an infinite loss.
inline constexpr double kLogFloor = 1e-12;

// Binary real/fake network over 2-channel motion fields: stride-2 conv
// stack, global average pooling, two-way head.
struct DiscriminatorConfig {
  int in_channels = 2;
  std::vector<int> channels = {16, 32, 64, 128};
  double leaky_slope = 0.2;
};

template <typename T>
class Discriminator {
public:
  using Cache = typename ConvStackNet<T>::Cache;

  Discriminator() = default;
  Discriminator(const DiscriminatorConfig& config, std::uint64_t seed)
      : config_(config),
        net_(ConvStackConfig{config.in_channels, config.channels,
                             config.leaky_slope, 2},
             seed, "disc") {}

  Tensor4<T> forward(const Tensor4<T>& field, Cache* cache = nullptr) const {
    return net_.forward(field, cache);
  }
  Tensor4<T> backward(const Tensor4<T>& d_logits, const Cache& cache) {
    return net_.backward(d_logits, cache);
  }
  std::vector<Param<T>> params() { return net_.params(); }
  void zero_grad() { net_.zero_grad(); }
  const DiscriminatorConfig& config() const { return config_; }

private:
  DiscriminatorConfig config_;
  ConvStackNet<T> net_;
};

// Per-sample probabilities of the two-way softmax over discriminator logits.
struct RealFakeProbs {
  std::vector<double> p_real, p_fake;
};

template <typename T>
RealFakeProbs real_fake_probs(const Tensor4<T>& logits) {
  if (logits.c != 2) throw DataError("real_fake_probs: logits must be two-way");
  Tensor4<T> probs = softmax_rows(logits);
  RealFakeProbs out;
  out.p_real.resize(std::size_t(logits.n));
  out.p_fake.resize(std::size_t(logits.n));
  for (int n = 0; n < logits.n; ++n) {
    out.p_fake[std::size_t(n)] = double(probs.data[std::size_t(n) * 2 + kFakeClass]);
    out.p_real[std::size_t(n)] = double(probs.data[std::size_t(n) * 2 + kRealClass]);
  }
  return out;
}

inline double clamped_nll(double p) { return -std::log(std::max(p, kLogFloor)); }

// Discriminator objective: batch mean of
// -log p_fake(generated) - log p_real(flow).
inline double loss_adv_d(const RealFakeProbs& on_dmc, const RealFakeProbs& on_flow) {
  if (on_dmc.p_fake.size() != on_flow.p_real.size() || on_dmc.p_fake.empty())
    throw DataError("loss_adv_d: batch sizes differ or empty");
  double acc = 0.0;
  for (std::size_t i = 0; i < on_dmc.p_fake.size(); ++i)
    acc += clamped_nll(on_dmc.p_fake[i]) + clamped_nll(on_flow.p_real[i]);
  return acc / double(on_dmc.p_fake.size());
}

// Generator-side adversarial objective: batch mean of -log p_real(generated).
inline double loss_adv_g(const RealFakeProbs& on_dmc) {
  if (on_dmc.p_real.empty()) throw DataError("loss_adv_g: empty batch");
  double acc = 0.0;
  for (double p : on_dmc.p_real) acc += clamped_nll(p);
  return acc / double(on_dmc.p_real.size());
}

// One minibatch of P-frame training data.
template <typename T>
struct TrainBatch {
  Tensor4<T> mv;        // (N, 2, H, W), pixel units
  Tensor4<T> residual;  // (N, 3, H, W), scaled to [-1, 1]
  Tensor4<T> flow;      // (N, 2, H, W) targets; n == 0 when absent
  std::vector<int> labels;

  bool has_flow() const { return flow.n > 0; }
};

// One optimizer step on the discriminator objective. The generator is used
// for inference only; its parameters (and any classifier's) are untouched.
template <typename T>
double train_step_d(Discriminator<T>& disc, Adam<T>& opt_d, const Generator<T>& gen,
                    const TrainBatch<T>& batch, double lr) {
  if (!batch.has_flow()) throw DataError("train_step_d: missing flow targets");
  Tensor4<T> dmc = gen.forward(batch.mv, batch.residual);

  typename Discriminator<T>::Cache cache_fake, cache_real;
  Tensor4<T> logits_fake = disc.forward(dmc, &cache_fake);
  Tensor4<T> logits_real = disc.forward(batch.flow, &cache_real);

  const std::vector<int> fake_labels(std::size_t(dmc.n), kFakeClass);
  const std::vector<int> real_labels(std::size_t(dmc.n), kRealClass);
  const double loss = softmax_ce_loss(logits_fake, std::span<const int>(fake_labels)) +
                      softmax_ce_loss(logits_real, std::span<const int>(real_labels));

  opt_d.zero_grad();
  disc.backward(softmax_ce_backward(logits_fake, std::span<const int>(fake_labels)),
                cache_fake);
  disc.backward(softmax_ce_backward(logits_real, std::span<const int>(real_labels)),
                cache_real);
  opt_d.step(lr);
  return loss;
}

struct GStepLosses {
  double cls = 0.0, mse = 0.0, adv = 0.0, total = 0.0;
};

// One optimizer step on the full generator-side objective
// cls + alpha * reconstruction + lambda * adversarial. opt_g owns the
// parameter set that may move (generator alone, or generator + classifier);
// the discriminator only provides gradients and its parameters stay fixed.
template <typename T>
GStepLosses train_step_g(Generator<T>& gen, Classifier<T>& cls, Adam<T>& opt_g,
                         Discriminator<T>* disc, const TrainBatch<T>& batch,
                         double alpha, double lambda, bool use_cls, bool use_mse,
                         bool use_adv, double lr) {
  if (alpha < 0.0 || lambda < 0.0)
    throw DataError("train_step_g: alpha and lambda must be >= 0");
  if (!use_cls && !use_mse && !use_adv)
    throw DataError("train_step_g: at least one loss must be enabled");
  if (use_cls && batch.labels.empty())
    throw DataError("train_step_g: classification loss requires labels");
  if (use_mse && !batch.has_flow())
    throw DataError("train_step_g: reconstruction loss requires flow targets");
  if (use_adv && disc == nullptr)
    throw DataError("train_step_g: adversarial loss requires a discriminator");

  opt_g.zero_grad();
  typename Generator<T>::Cache gen_cache;
  Tensor4<T> dmc = gen.forward(batch.mv, batch.residual, &gen_cache);
  Tensor4<T> d_dmc(dmc.n, dmc.c, dmc.h, dmc.w);

  GStepLosses losses;
  if (use_cls) {
    typename Classifier<T>::Cache cls_cache;
    Tensor4<T> logits = cls.forward(dmc, &cls_cache);
    losses.cls = loss_cls(logits, std::span<const int>(batch.labels));
    Tensor4<T> d_logits = loss_cls_backward(logits, std::span<const int>(batch.labels));
    add_inplace(d_dmc, cls.backward(d_logits, cls_cache));
  }
  if (use_mse) {
    losses.mse = mse_loss(dmc, batch.flow);
    Tensor4<T> d_mse = mse_loss_backward(dmc, batch.flow);
    scale_inplace(d_mse, T(alpha));
    add_inplace(d_dmc, d_mse);
  }
  if (use_adv) {
    typename Discriminator<T>::Cache disc_cache;
    Tensor4<T> logits = disc->forward(dmc, &disc_cache);
    const std::vector<int> real_labels(std::size_t(dmc.n), kRealClass);
    losses.adv = softmax_ce_loss(logits, std::span<const int>(real_labels));
    Tensor4<T> d_logits =
        softmax_ce_backward(logits, std::span<const int>(real_labels));
    scale_inplace(d_logits, T(lambda));
    add_inplace(d_dmc, disc->backward(d_logits, disc_cache));
    disc->zero_grad();  // discriminator gradients are a by-product here
  }

  gen.backward(d_dmc, gen_cache);
  opt_g.step(lr);

  losses.total = (use_cls ? losses.cls : 0.0) + alpha * (use_mse ? losses.mse : 0.0) +
                 lambda * (use_adv ? losses.adv : 0.0);
  return losses;
}

}  // namespace dmcnet
