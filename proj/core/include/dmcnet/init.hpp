#pragma once

#include "dmcnet/ops.hpp"
#include "dmcnet/rng.hpp"

namespace dmcnet {

// Fan-in-scaled uniform init: weights ~ U(-1/sqrt(fan_in), +1/sqrt(fan_in)),
// bias zero. Draws in a fixed flat order from the supplied stream so a seed
// pins the weights bit-for-bit.
template <typename T>
void init_conv_fanin(ConvLayer<T>& L, Rng& rng) {
  const double fan_in = double(L.weight.c) * L.weight.h * L.weight.w;
  const double bound = 1.0 / std::sqrt(fan_in);
  for (auto& w : L.weight.data) w = T(rng.uniform(-bound, bound));
  L.bias.fill(T(0));
}

template <typename T>
void init_conv_zero(ConvLayer<T>& L) {
  L.weight.fill(T(0));
  L.bias.fill(T(0));
}

template <typename T>
void init_linear_fanin(LinearLayer<T>& L, Rng& rng) {
  const double bound = 1.0 / std::sqrt(double(L.weight.c));
  for (auto& w : L.weight.data) w = T(rng.uniform(-bound, bound));
  L.bias.fill(T(0));
}

}  // namespace dmcnet
