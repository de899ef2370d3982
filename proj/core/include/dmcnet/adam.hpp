#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dmcnet/tensor.hpp"

namespace dmcnet {

// Handle to one trainable tensor. lr_scale implements per-group learning
// rates (classifier bodies run at a fraction of the base rate).
template <typename T>
struct Param {
  std::string name;
  Tensor4<T>* tensor = nullptr;
  double lr_scale = 1.0;
};

// One bias-corrected adaptive-moment update on a flat parameter array.
// step_count must already be incremented for this step (first call passes 1).
template <typename T>
void adam_step(std::span<T> values, std::span<const T> grads, std::span<T> m,
               std::span<T> v, long step_count, double lr, double beta1,
               double beta2, double eps) {
  if (values.size() != grads.size() || values.size() != m.size() ||
      values.size() != v.size())
    throw DataError("adam_step: buffer size mismatch");
  if (lr < 0.0) throw DataError("adam_step: lr must be non-negative");
  const double bc1 = 1.0 - std::pow(beta1, double(step_count));
  const double bc2 = 1.0 - std::pow(beta2, double(step_count));
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double g = double(grads[i]);
    const double mi = beta1 * double(m[i]) + (1.0 - beta1) * g;
    const double vi = beta2 * double(v[i]) + (1.0 - beta2) * g * g;
    m[i] = T(mi);
    v[i] = T(vi);
    const double mhat = mi / bc1;
    const double vhat = vi / bc2;
    values[i] = T(double(values[i]) - lr * mhat / (std::sqrt(vhat) + eps));
  }
}

// Owns first/second-moment state for a fixed set of parameters.
template <typename T>
class Adam {
public:
  explicit Adam(std::vector<Param<T>> params, double beta1 = 0.9,
                double beta2 = 0.999, double eps = 1e-8)
      : params_(std::move(params)), beta1_(beta1), beta2_(beta2), eps_(eps) {
    slots_.resize(params_.size());
    for (std::size_t i = 0; i < params_.size(); ++i) {
      slots_[i].m.assign(params_[i].tensor->numel(), T(0));
      slots_[i].v.assign(params_[i].tensor->numel(), T(0));
    }
  }

  void zero_grad() {
    for (auto& p : params_) p.tensor->zero_grad();
  }

  void step(double lr) {
    ++step_count_;
    for (std::size_t i = 0; i < params_.size(); ++i) {
      Tensor4<T>& t = *params_[i].tensor;
      adam_step<T>(std::span<T>(t.data), std::span<const T>(t.grad),
                   std::span<T>(slots_[i].m), std::span<T>(slots_[i].v),
                   step_count_, lr * params_[i].lr_scale, beta1_, beta2_, eps_);
    }
  }

  long step_count() const { return step_count_; }
  const std::vector<Param<T>>& params() const { return params_; }

private:
  struct Slot {
    std::vector<T> m, v;
  };
  std::vector<Param<T>> params_;
  std::vector<Slot> slots_;
  long step_count_ = 0;
  double beta1_, beta2_, eps_;
};

}  // namespace dmcnet
