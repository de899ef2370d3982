#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "dmcnet/tensor.hpp"

namespace dmcnet {

// 2-D convolution layer (cross-correlation). weight is (C_out, C_in, kh, kw),
// bias is (1, C_out, 1, 1). Reduction order is fixed for reproducibility:
// each output element accumulates input channels outermost, then kernel rows,
// then kernel columns.
template <typename T>
struct ConvLayer {
  Tensor4<T> weight;
  Tensor4<T> bias;
  int stride = 1;
  int pad = 1;

  ConvLayer() = default;
  ConvLayer(int c_out, int c_in, int k, int stride_, int pad_)
      : weight(c_out, c_in, k, k, true),
        bias(1, c_out, 1, 1, true),
        stride(stride_),
        pad(pad_) {}

  int out_channels() const { return weight.n; }
  int in_channels() const { return weight.c; }
  int kernel() const { return weight.h; }
};

template <typename T>
inline std::pair<int, int> conv2d_out_shape(int h, int w, const ConvLayer<T>& L) {
  int ho = (h + 2 * L.pad - L.weight.h) / L.stride + 1;
  int wo = (w + 2 * L.pad - L.weight.w) / L.stride + 1;
  return {ho, wo};
}

namespace detail {

// Fast path: 3x3 kernel, stride 1, pad 1 (all generator layers). Interior
// columns take all three taps of a kernel row in one fused, left-associated
// pass; edge columns are handled separately with the same tap order.
template <typename T>
void conv3x3_s1p1_accum_plane(T* out, const T* in, const T* w9, int h, int wd) {
  for (int ky = 0; ky < 3; ++ky) {
    const T w0 = w9[ky * 3 + 0], w1 = w9[ky * 3 + 1], w2 = w9[ky * 3 + 2];
    for (int yo = 0; yo < h; ++yo) {
      const int yi = yo + ky - 1;
      if (yi < 0 || yi >= h) continue;
      T* orow = out + std::size_t(yo) * wd;
      const T* irow = in + std::size_t(yi) * wd;
      orow[0] = (orow[0] + w1 * irow[0]) + w2 * irow[1];
      for (int xo = 1; xo < wd - 1; ++xo)
        orow[xo] = ((orow[xo] + w0 * irow[xo - 1]) + w1 * irow[xo]) + w2 * irow[xo + 1];
      orow[wd - 1] = (orow[wd - 1] + w0 * irow[wd - 2]) + w1 * irow[wd - 1];
    }
  }
}

}  // namespace detail

template <typename T>
Tensor4<T> conv2d_forward(const Tensor4<T>& input, const ConvLayer<T>& L) {
  if (input.c != L.in_channels())
    throw DataError("conv2d_forward: input has " + std::to_string(input.c) +
                    " channels, layer expects " + std::to_string(L.in_channels()));
  auto [ho, wo] = conv2d_out_shape(input.h, input.w, L);
  if (ho < 1 || wo < 1) throw DataError("conv2d_forward: output would be empty");
  const int kh = L.weight.h, kw = L.weight.w, s = L.stride, p = L.pad;
  Tensor4<T> out(input.n, L.out_channels(), ho, wo);

  const bool fast = (kh == 3 && kw == 3 && s == 1 && p == 1 && input.w >= 2);
  for (int n = 0; n < input.n; ++n) {
    for (int co = 0; co < L.out_channels(); ++co) {
      T* op = out.plane(n, co);
      const T bv = L.bias.data[co];
      std::fill(op, op + std::size_t(ho) * wo, bv);
      for (int ci = 0; ci < input.c; ++ci) {
        const T* ip = input.plane(n, ci);
        const T* wp = &L.weight.data[(std::size_t(co) * input.c + ci) * kh * kw];
        if (fast) {
          detail::conv3x3_s1p1_accum_plane(op, ip, wp, input.h, input.w);
          continue;
        }
        for (int ky = 0; ky < kh; ++ky) {
          for (int kx = 0; kx < kw; ++kx) {
            const T wv = wp[ky * kw + kx];
            for (int yo = 0; yo < ho; ++yo) {
              const int yi = yo * s + ky - p;
              if (yi < 0 || yi >= input.h) continue;
              const T* irow = ip + std::size_t(yi) * input.w;
              T* orow = op + std::size_t(yo) * wo;
              for (int xo = 0; xo < wo; ++xo) {
                const int xi = xo * s + kx - p;
                if (xi < 0 || xi >= input.w) continue;
                orow[xo] += wv * irow[xi];
              }
            }
          }
        }
      }
    }
  }
  DMCNET_DEBUG_CHECK_FINITE(out, "conv2d_forward");
  return out;
}

template <typename T>
struct ConvGrads {
  Tensor4<T> input_grad;
  Tensor4<T> weight_grad;
  Tensor4<T> bias_grad;
};

// Analytic gradients of conv2d_forward. Weight gradients reduce batch
// outermost, then output rows, then output columns; input gradients
// accumulate output channels outermost, then kernel rows, then columns.
template <typename T>
ConvGrads<T> conv2d_backward(const Tensor4<T>& upstream, const Tensor4<T>& saved_input,
                             const ConvLayer<T>& L) {
  auto [ho, wo] = conv2d_out_shape(saved_input.h, saved_input.w, L);
  if (upstream.n != saved_input.n || upstream.c != L.out_channels() ||
      upstream.h != ho || upstream.w != wo)
    throw DataError("conv2d_backward: upstream shape " + upstream.shape_str() +
                    " inconsistent with forward output");
  const int kh = L.weight.h, kw = L.weight.w, s = L.stride, p = L.pad;
  const int hi = saved_input.h, wi = saved_input.w;

  ConvGrads<T> g;
  g.input_grad = Tensor4<T>(saved_input.n, saved_input.c, hi, wi);
  g.weight_grad = Tensor4<T>(L.weight.n, L.weight.c, kh, kw);
  g.bias_grad = Tensor4<T>(1, L.out_channels(), 1, 1);

  for (int n = 0; n < upstream.n; ++n) {
    for (int co = 0; co < L.out_channels(); ++co) {
      const T* up = upstream.plane(n, co);
      T bsum = 0;
      for (std::size_t i = 0; i < std::size_t(ho) * wo; ++i) bsum += up[i];
      g.bias_grad.data[co] += bsum;

      for (int ci = 0; ci < saved_input.c; ++ci) {
        const T* ip = saved_input.plane(n, ci);
        T* dip = g.input_grad.plane(n, ci);
        const std::size_t wbase = (std::size_t(co) * saved_input.c + ci) * kh * kw;
        for (int ky = 0; ky < kh; ++ky) {
          for (int kx = 0; kx < kw; ++kx) {
            const T wv = L.weight.data[wbase + ky * kw + kx];
            T wsum = 0;
            for (int yo = 0; yo < ho; ++yo) {
              const int yi = yo * s + ky - p;
              if (yi < 0 || yi >= hi) continue;
              const T* irow = ip + std::size_t(yi) * wi;
              T* dirow = dip + std::size_t(yi) * wi;
              const T* urow = up + std::size_t(yo) * wo;
              if (s == 1) {
                const int xlo = std::max(0, p - kx);
                const int xhi = std::min(wo, wi + p - kx);
                const T* ir = irow + (kx - p);
                T* dir = dirow + (kx - p);
                for (int xo = xlo; xo < xhi; ++xo) {
                  wsum += urow[xo] * ir[xo];
                  dir[xo] += wv * urow[xo];
                }
              } else {
                for (int xo = 0; xo < wo; ++xo) {
                  const int xi = xo * s + kx - p;
                  if (xi < 0 || xi >= wi) continue;
                  wsum += urow[xo] * irow[xi];
                  dirow[xi] += wv * urow[xo];
                }
              }
            }
            g.weight_grad.data[wbase + ky * kw + kx] += wsum;
          }
        }
      }
    }
  }
  DMCNET_DEBUG_CHECK_FINITE(g.input_grad, "conv2d_backward");
  return g;
}

// Leaky rectifier. The subgradient at exactly 0 takes the negative-side
// slope so the op stays a total, deterministic function.
template <typename T>
Tensor4<T> leaky_relu_forward(const Tensor4<T>& x, T slope) {
  Tensor4<T> y(x.n, x.c, x.h, x.w);
  for (std::size_t i = 0; i < x.numel(); ++i) {
    const T v = x.data[i];
    y.data[i] = v > T(0) ? v : slope * v;
  }
  return y;
}

template <typename T>
Tensor4<T> leaky_relu_backward(const Tensor4<T>& dy, const Tensor4<T>& saved_x, T slope) {
  if (!dy.same_shape(saved_x)) throw DataError("leaky_relu_backward: shape mismatch");
  Tensor4<T> dx(dy.n, dy.c, dy.h, dy.w);
  for (std::size_t i = 0; i < dy.numel(); ++i)
    dx.data[i] = saved_x.data[i] > T(0) ? dy.data[i] : slope * dy.data[i];
  return dx;
}

template <typename T>
Tensor4<T> concat_channels(const Tensor4<T>& a, const Tensor4<T>& b) {
  if (a.n != b.n || a.h != b.h || a.w != b.w)
    throw DataError("concat_channels: batch/spatial mismatch " + a.shape_str() +
                    " vs " + b.shape_str());
  Tensor4<T> out(a.n, a.c + b.c, a.h, a.w);
  for (int n = 0; n < a.n; ++n) {
    std::copy(a.plane(n, 0), a.plane(n, 0) + std::size_t(a.c) * a.h * a.w,
              out.plane(n, 0));
    std::copy(b.plane(n, 0), b.plane(n, 0) + std::size_t(b.c) * b.h * b.w,
              out.plane(n, a.c));
  }
  return out;
}

// Backward of concat: route a channel range of `src` into its own tensor.
template <typename T>
Tensor4<T> channel_slice(const Tensor4<T>& src, int c0, int count) {
  if (c0 < 0 || count < 1 || c0 + count > src.c)
    throw DataError("channel_slice: range out of bounds");
  Tensor4<T> out(src.n, count, src.h, src.w);
  for (int n = 0; n < src.n; ++n)
    std::copy(src.plane(n, c0), src.plane(n, c0) + std::size_t(count) * src.h * src.w,
              out.plane(n, 0));
  return out;
}

template <typename T>
std::pair<Tensor4<T>, Tensor4<T>> split_channels(const Tensor4<T>& x, int c_first) {
  return {channel_slice(x, 0, c_first), channel_slice(x, c_first, x.c - c_first)};
}

// dst[:, c0:c0+src.c] += src
template <typename T>
void add_into_channels(Tensor4<T>& dst, int c0, const Tensor4<T>& src) {
  if (dst.n != src.n || dst.h != src.h || dst.w != src.w || c0 + src.c > dst.c)
    throw DataError("add_into_channels: shape mismatch");
  for (int n = 0; n < src.n; ++n) {
    T* d = dst.plane(n, c0);
    const T* s = src.plane(n, 0);
    const std::size_t len = std::size_t(src.c) * src.h * src.w;
    for (std::size_t i = 0; i < len; ++i) d[i] += s[i];
  }
}

template <typename T>
void add_inplace(Tensor4<T>& dst, const Tensor4<T>& src) {
  if (!dst.same_shape(src)) throw DataError("add_inplace: shape mismatch");
  for (std::size_t i = 0; i < dst.numel(); ++i) dst.data[i] += src.data[i];
}

template <typename T>
void scale_inplace(Tensor4<T>& t, T s) {
  for (auto& v : t.data) v *= s;
}

// Mean of squared differences over every element. The sum runs in double in
// flat index order.
template <typename T>
double mse_loss(const Tensor4<T>& pred, const Tensor4<T>& target) {
  if (!pred.same_shape(target))
    throw DataError("mse_loss: shape mismatch " + pred.shape_str() + " vs " +
                    target.shape_str());
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.numel(); ++i) {
    const double d = double(pred.data[i]) - double(target.data[i]);
    acc += d * d;
  }
  return acc / double(pred.numel());
}

template <typename T>
Tensor4<T> mse_loss_backward(const Tensor4<T>& pred, const Tensor4<T>& target) {
  if (!pred.same_shape(target)) throw DataError("mse_loss_backward: shape mismatch");
  Tensor4<T> dpred(pred.n, pred.c, pred.h, pred.w);
  const T scale = T(2) / T(double(pred.numel()));
  for (std::size_t i = 0; i < pred.numel(); ++i)
    dpred.data[i] = scale * (pred.data[i] - target.data[i]);
  return dpred;
}

// Row-wise softmax with max subtraction. logits are carried as (N, K, 1, 1).
template <typename T>
Tensor4<T> softmax_rows(const Tensor4<T>& logits) {
  Tensor4<T> probs(logits.n, logits.c, 1, 1);
  for (int n = 0; n < logits.n; ++n) {
    const T* row = &logits.data[std::size_t(n) * logits.c];
    T* out = &probs.data[std::size_t(n) * logits.c];
    T maxv = row[0];
    for (int k = 1; k < logits.c; ++k) maxv = std::max(maxv, row[k]);
    double denom = 0.0;
    for (int k = 0; k < logits.c; ++k) denom += std::exp(double(row[k] - maxv));
    for (int k = 0; k < logits.c; ++k)
      out[k] = T(std::exp(double(row[k] - maxv)) / denom);
  }
  return probs;
}

template <typename T>
double softmax_ce_loss(const Tensor4<T>& logits, std::span<const int> labels) {
  if (int(labels.size()) != logits.n)
    throw DataError("softmax_ce_loss: label count does not match batch");
  double acc = 0.0;
  for (int n = 0; n < logits.n; ++n) {
    const int label = labels[n];
    if (label < 0 || label >= logits.c)
      throw DataError("softmax_ce_loss: label " + std::to_string(label) +
                      " out of range [0," + std::to_string(logits.c) + ")");
    const T* row = &logits.data[std::size_t(n) * logits.c];
    T maxv = row[0];
    for (int k = 1; k < logits.c; ++k) maxv = std::max(maxv, row[k]);
    double denom = 0.0;
    for (int k = 0; k < logits.c; ++k) denom += std::exp(double(row[k] - maxv));
    acc += std::log(denom) - double(row[label] - maxv);
  }
  return acc / double(logits.n);
}

template <typename T>
Tensor4<T> softmax_ce_backward(const Tensor4<T>& logits, std::span<const int> labels) {
  Tensor4<T> d = softmax_rows(logits);
  const T inv_n = T(1) / T(logits.n);
  for (int n = 0; n < logits.n; ++n) {
    d.data[std::size_t(n) * logits.c + labels[n]] -= T(1);
    for (int k = 0; k < logits.c; ++k) d.data[std::size_t(n) * logits.c + k] *= inv_n;
  }
  return d;
}

// Global average pooling to (N, C, 1, 1); spatial sums run row-major.
template <typename T>
Tensor4<T> global_avg_pool_forward(const Tensor4<T>& x) {
  Tensor4<T> out(x.n, x.c, 1, 1);
  const T inv = T(1) / T(std::size_t(x.h) * x.w);
  for (int n = 0; n < x.n; ++n)
    for (int c = 0; c < x.c; ++c) {
      const T* p = x.plane(n, c);
      T acc = 0;
      for (std::size_t i = 0; i < std::size_t(x.h) * x.w; ++i) acc += p[i];
      out.data[std::size_t(n) * x.c + c] = acc * inv;
    }
  return out;
}

template <typename T>
Tensor4<T> global_avg_pool_backward(const Tensor4<T>& dy, int h, int w) {
  Tensor4<T> dx(dy.n, dy.c, h, w);
  const T inv = T(1) / T(std::size_t(h) * w);
  for (int n = 0; n < dy.n; ++n)
    for (int c = 0; c < dy.c; ++c) {
      const T g = dy.data[std::size_t(n) * dy.c + c] * inv;
      T* p = dx.plane(n, c);
      std::fill(p, p + std::size_t(h) * w, g);
    }
  return dx;
}

// Fully connected layer on (N, C_in, 1, 1). weight is (C_out, C_in, 1, 1).
template <typename T>
struct LinearLayer {
  Tensor4<T> weight;
  Tensor4<T> bias;

  LinearLayer() = default;
  LinearLayer(int c_out, int c_in)
      : weight(c_out, c_in, 1, 1, true), bias(1, c_out, 1, 1, true) {}

  int out_features() const { return weight.n; }
  int in_features() const { return weight.c; }
};

template <typename T>
Tensor4<T> linear_forward(const Tensor4<T>& x, const LinearLayer<T>& L) {
  if (x.c != L.in_features() || x.h != 1 || x.w != 1)
    throw DataError("linear_forward: expected (N," + std::to_string(L.in_features()) +
                    ",1,1), got " + x.shape_str());
  Tensor4<T> out(x.n, L.out_features(), 1, 1);
  for (int n = 0; n < x.n; ++n) {
    const T* xin = &x.data[std::size_t(n) * x.c];
    for (int o = 0; o < L.out_features(); ++o) {
      const T* wrow = &L.weight.data[std::size_t(o) * x.c];
      T acc = L.bias.data[o];
      for (int i = 0; i < x.c; ++i) acc += wrow[i] * xin[i];
      out.data[std::size_t(n) * L.out_features() + o] = acc;
    }
  }
  return out;
}

template <typename T>
struct LinearGrads {
  Tensor4<T> input_grad;
  Tensor4<T> weight_grad;
  Tensor4<T> bias_grad;
};

template <typename T>
LinearGrads<T> linear_backward(const Tensor4<T>& dy, const Tensor4<T>& saved_x,
                               const LinearLayer<T>& L) {
  if (dy.c != L.out_features() || dy.n != saved_x.n)
    throw DataError("linear_backward: shape mismatch");
  LinearGrads<T> g;
  g.input_grad = Tensor4<T>(saved_x.n, saved_x.c, 1, 1);
  g.weight_grad = Tensor4<T>(L.weight.n, L.weight.c, 1, 1);
  g.bias_grad = Tensor4<T>(1, L.out_features(), 1, 1);
  for (int n = 0; n < dy.n; ++n) {
    const T* dyrow = &dy.data[std::size_t(n) * dy.c];
    const T* xin = &saved_x.data[std::size_t(n) * saved_x.c];
    T* dxrow = &g.input_grad.data[std::size_t(n) * saved_x.c];
    for (int o = 0; o < dy.c; ++o) {
      const T go = dyrow[o];
      const T* wrow = &L.weight.data[std::size_t(o) * saved_x.c];
      T* dwrow = &g.weight_grad.data[std::size_t(o) * saved_x.c];
      g.bias_grad.data[o] += go;
      for (int i = 0; i < saved_x.c; ++i) {
        dxrow[i] += go * wrow[i];
        dwrow[i] += go * xin[i];
      }
    }
  }
  return g;
}

}  // namespace dmcnet
