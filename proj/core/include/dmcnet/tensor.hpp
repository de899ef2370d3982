#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "dmcnet/errors.hpp"

namespace dmcnet {

// Dense (N, C, H, W) array, the carrier for every network input, activation
// and parameter. T is float for training and double for gradient
// verification. `grad`, when allocated, always has the same shape as `data`.
template <typename T>
struct Tensor4 {
  int n = 0, c = 0, h = 0, w = 0;
  std::vector<T> data;
  bool requires_grad = false;
  std::vector<T> grad;  // empty unless requires_grad

  Tensor4() = default;
  Tensor4(int n_, int c_, int h_, int w_, bool requires_grad_ = false)
      : n(n_), c(c_), h(h_), w(w_), requires_grad(requires_grad_) {
    if (n_ <= 0 || c_ <= 0 || h_ <= 0 || w_ <= 0)
      throw DataError("Tensor4: all shape components must be positive");
    data.assign(std::size_t(n_) * c_ * h_ * w_, T(0));
    if (requires_grad_) grad.assign(data.size(), T(0));
  }

  std::size_t numel() const { return data.size(); }

  std::size_t index(int in, int ic, int iy, int ix) const {
    return ((std::size_t(in) * c + ic) * h + iy) * w + ix;
  }

  T& at(int in, int ic, int iy, int ix) { return data[index(in, ic, iy, ix)]; }
  T at(int in, int ic, int iy, int ix) const { return data[index(in, ic, iy, ix)]; }

  T* plane(int in, int ic) { return data.data() + (std::size_t(in) * c + ic) * h * w; }
  const T* plane(int in, int ic) const {
    return data.data() + (std::size_t(in) * c + ic) * h * w;
  }

  bool same_shape(const Tensor4& o) const {
    return n == o.n && c == o.c && h == o.h && w == o.w;
  }

  std::string shape_str() const {
    return "(" + std::to_string(n) + "," + std::to_string(c) + "," +
           std::to_string(h) + "," + std::to_string(w) + ")";
  }

  void zero_grad() {
    if (requires_grad) grad.assign(data.size(), T(0));
  }

  void fill(T v) { data.assign(data.size(), v); }

  bool all_finite() const {
    for (T v : data)
      if (!std::isfinite(double(v))) return false;
    return true;
  }
};

using Tensor4f = Tensor4<float>;
using Tensor4d = Tensor4<double>;

template <typename T>
void check_finite(const Tensor4<T>& t, const char* where) {
  if (!t.all_finite())
    throw NumericError(std::string("non-finite value after ") + where);
}

// In debug builds every op verifies its output; release builds only check
// where the training loop asks for it.
#ifndef NDEBUG
#define DMCNET_DEBUG_CHECK_FINITE(t, where) ::dmcnet::check_finite((t), (where))
#else
#define DMCNET_DEBUG_CHECK_FINITE(t, where) ((void)0)
#endif

// param.grad += g.data
template <typename T>
void accumulate_grad(Tensor4<T>& param, const Tensor4<T>& g) {
  if (!param.requires_grad)
    throw DataError("accumulate_grad: tensor does not track gradients");
  if (!param.same_shape(g))
    throw DataError("accumulate_grad: shape mismatch " + param.shape_str() + " vs " +
                    g.shape_str());
  for (std::size_t i = 0; i < param.grad.size(); ++i) param.grad[i] += g.data[i];
}

// Content hash (FNV-1a over the raw bytes), used by the alternation-isolation
// checks to prove a training step did not touch a parameter set.
template <typename T>
std::uint64_t content_hash(const Tensor4<T>& t) {
  std::uint64_t hsh = 0xCBF29CE484222325ull;
  const unsigned char* p = reinterpret_cast<const unsigned char*>(t.data.data());
  std::size_t bytes = t.data.size() * sizeof(T);
  for (std::size_t i = 0; i < bytes; ++i) {
    hsh ^= p[i];
    hsh *= 0x100000001B3ull;
  }
  // fold the shape in so reshapes never collide silently
  for (int d : {t.n, t.c, t.h, t.w}) {
    hsh ^= std::uint64_t(d);
    hsh *= 0x100000001B3ull;
  }
  return hsh;
}

}  // namespace dmcnet
