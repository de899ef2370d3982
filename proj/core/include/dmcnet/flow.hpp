#pragma once

#include <vector>

#include "dmcnet/errors.hpp"

namespace dmcnet {

// Dense per-pixel displacement map in pixel units, stored as two planes
// (horizontal u, then vertical v), row-major. Positive u points right,
// positive v points down; a value gives the forward motion of the content at
// that pixel relative to its reference frame.
struct FlowField {
  int h = 0, w = 0;
  std::vector<float> data;  // 2 * h * w, u plane then v plane

  FlowField() = default;
  FlowField(int h_, int w_) : h(h_), w(w_) {
    if (h_ <= 0 || w_ <= 0) throw DataError("FlowField: dimensions must be positive");
    data.assign(std::size_t(2) * h_ * w_, 0.0f);
  }

  float& u(int y, int x) { return data[std::size_t(y) * w + x]; }
  float u(int y, int x) const { return data[std::size_t(y) * w + x]; }
  float& v(int y, int x) { return data[std::size_t(h) * w + std::size_t(y) * w + x]; }
  float v(int y, int x) const {
    return data[std::size_t(h) * w + std::size_t(y) * w + x];
  }
};

// Mean end-point error: the average Euclidean norm of the per-pixel
// difference between two fields.
double mean_epe(const FlowField& a, const FlowField& b);

}  // namespace dmcnet
