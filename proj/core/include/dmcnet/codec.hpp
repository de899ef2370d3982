#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dmcnet/errors.hpp"
#include "dmcnet/flow.hpp"

namespace dmcnet {

inline constexpr int kMacroblock = 16;
inline constexpr int kDefaultGopPCount = 11;
inline constexpr int kDefaultSearchRange = 16;

// Raw RGB frame, planar (3, H, W), macroblock-aligned.
struct Frame {
  int h = 0, w = 0;
  std::vector<std::uint8_t> pixels;  // R plane, G plane, B plane, row-major

  Frame() = default;
  Frame(int h_, int w_) : h(h_), w(w_) {
    if (h_ <= 0 || w_ <= 0 || h_ % kMacroblock != 0 || w_ % kMacroblock != 0)
      throw DataError("Frame: dimensions must be positive multiples of 16, got " +
                      std::to_string(h_) + "x" + std::to_string(w_));
    pixels.assign(std::size_t(3) * h_ * w_, 0);
  }

  std::uint8_t& at(int c, int y, int x) {
    return pixels[(std::size_t(c) * h + y) * w + x];
  }
  std::uint8_t at(int c, int y, int x) const {
    return pixels[(std::size_t(c) * h + y) * w + x];
  }
  bool same_shape(const Frame& o) const { return h == o.h && w == o.w; }
};

// Per-macroblock displacement to the best-matching reference patch.
// dx/dy are the patch-fetch offsets: the matching reference patch for the
// block at (bx, by) starts at (16*bx + dx, 16*by + dy).
struct MotionVectorField {
  int bh = 0, bw = 0;  // block-grid dimensions (H/16, W/16)
  std::vector<std::int8_t> dx, dy;

  MotionVectorField() = default;
  MotionVectorField(int bh_, int bw_) : bh(bh_), bw(bw_) {
    if (bh_ <= 0 || bw_ <= 0) throw DataError("MotionVectorField: empty grid");
    dx.assign(std::size_t(bh_) * bw_, 0);
    dy.assign(std::size_t(bh_) * bw_, 0);
  }

  std::size_t idx(int by, int bx) const { return std::size_t(by) * bw + bx; }
};

// Signed RGB difference between a frame and its motion-compensated reference.
struct ResidualField {
  int h = 0, w = 0;
  std::vector<std::int16_t> values;  // (3, H, W) planar

  ResidualField() = default;
  ResidualField(int h_, int w_) : h(h_), w(w_) {
    values.assign(std::size_t(3) * h_ * w_, 0);
  }

  std::int16_t& at(int c, int y, int x) {
    return values[(std::size_t(c) * h + y) * w + x];
  }
  std::int16_t at(int c, int y, int x) const {
    return values[(std::size_t(c) * h + y) * w + x];
  }
};

enum class RefMode : std::uint8_t { IFrame = 0, Previous = 1 };

struct PFrame {
  MotionVectorField mv;
  ResidualField residual;
};

struct Gop {
  Frame iframe;
  std::vector<PFrame> pframes;
};

// GOP-structured compressed clip: per GOP one intra frame plus
// motion-vector/residual pairs for each predictive frame.
struct EncodedVideo {
  int width = 0, height = 0;
  int gop_p_count = kDefaultGopPCount;
  RefMode ref_mode = RefMode::IFrame;
  int label = -1;  // class index, -1 = unlabeled
  std::vector<Gop> gops;

  int frame_count() const { return int(gops.size()) * (1 + gop_p_count); }
};

// Exhaustive block matching: for each 16x16 macroblock of `current`, the
// (dx, dy) in [-search_range, search_range]^2 minimizing the sum of absolute
// RGB differences against the edge-clamped reference patch. Ties break by
// smallest SAD, then smallest |dx|+|dy|, then lexicographically smallest
// (dy, dx), so the result is a total deterministic function.
MotionVectorField block_match(const Frame& current, const Frame& reference,
                              int search_range);

// Warp: output macroblock (bx, by) is the edge-clamped reference patch at
// (16*bx + dx, 16*by + dy).
Frame motion_compensate(const Frame& reference, const MotionVectorField& mv);

// current - compensated, exact signed integers.
ResidualField compute_residual(const Frame& current, const Frame& compensated);

// Splits frames into GOPs of (1 + gop_p_count), stores the first frame of
// each GOP intra and every other frame as motion vectors plus residual
// against its reference: the GOP I-frame (RefMode::IFrame) or the previously
// reconstructed frame (RefMode::Previous). Lossless in both modes.
EncodedVideo encode(const std::vector<Frame>& frames, int gop_p_count,
                    int search_range, RefMode ref_mode);

// Exact reconstruction: each P-frame is motion_compensate(reference, mv)
// plus its residual.
std::vector<Frame> decode(const EncodedVideo& ev);

// Dense (2, H, W) field: every pixel of a macroblock carries the block's
// value, negated into the optical-flow sign convention (forward motion of
// content from reference to current).
FlowField expand_mv(const MotionVectorField& mv);

// --- DMCV binary container ---------------------------------------------------
// magic "DMCV", version u16 = 1, then little-endian header {width u16,
// height u16, gop_p_count u8, ref_mode u8, gop_count u32, label i32}, then
// per GOP: raw I-frame bytes (3*H*W), then per P-frame: the MV grid as i8
// (dx, dy) pairs row-major followed by the residual as i16 little-endian.
void write_dmcv(const std::string& path, const EncodedVideo& ev);
EncodedVideo read_dmcv(const std::string& path);

// --- Raw planar RGB8 video ---------------------------------------------------
// Frames stored back to back, each as R/G/B planes row-major. The sidecar
// header at <path>.hdr carries key=value lines: width, height, frames.
std::vector<Frame> read_raw_video(const std::string& path);
void write_raw_video(const std::string& path, const std::vector<Frame>& frames);

}  // namespace dmcnet
