#pragma once

#include <string>
#include <vector>

#include "dmcnet/codec.hpp"
#include "dmcnet/tensor.hpp"

namespace dmcnet {

// One labeled clip plus optional per-P-frame ground-truth flow (global
// P-frame order: gop * gop_p_count + (k - 1)).
struct LabeledClip {
  EncodedVideo video;
  std::vector<FlowField> flows;  // empty when no flow targets exist

  int pframe_count() const { return int(video.gops.size()) * video.gop_p_count; }
};

using Dataset = std::vector<LabeledClip>;

// Network-input normalization: motion vectors and flow stay in pixel units,
// residuals map to [-1, 1] (divide by 255), I-frame pixels map to [0, 1].
inline constexpr float kResidualScale = 1.0f / 255.0f;
inline constexpr float kPixelScale = 1.0f / 255.0f;

// (1, 2, H, W) dense expanded motion vectors of one P-frame.
Tensor4f mv_input(const EncodedVideo& v, int gop, int k);
// (1, 3, H, W) normalized residual of one P-frame.
Tensor4f residual_input(const EncodedVideo& v, int gop, int k);
// (1, 3, H, W) normalized I-frame pixels.
Tensor4f iframe_input(const EncodedVideo& v, int gop);

Tensor4f flow_to_tensor(const FlowField& f);
FlowField tensor_to_flow(const Tensor4f& t, int batch_index = 0);

// Copy sample n of src into slot n of a preallocated batch tensor.
void copy_into_batch(Tensor4f& batch, int slot, const Tensor4f& sample);

// Directory layout written by the synthesizer and accepted everywhere:
// clip_NNNN.dmcv plus clip_NNNN.pKK.flo sidecars (KK = global P index).
Dataset load_dataset_dir(const std::string& dir);
void save_dataset_dir(const std::string& dir, const Dataset& dataset);

int class_count(const Dataset& dataset);  // max label + 1; labels must be >= 0
bool dataset_has_flow(const Dataset& dataset);

}  // namespace dmcnet
