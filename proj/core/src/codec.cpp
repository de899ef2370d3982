#include "dmcnet/codec.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <tuple>

namespace dmcnet {

namespace {

inline int clampi(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

// SAD of one 16x16 block over all three channels against the reference patch
// at (rx, ry), clamping sampled coordinates to the frame.
int sad_block_clamped(const Frame& cur, const Frame& ref, int bx0, int by0, int rx,
                      int ry) {
  int acc = 0;
  for (int c = 0; c < 3; ++c) {
    for (int py = 0; py < kMacroblock; ++py) {
      const int sy = clampi(ry + py, 0, ref.h - 1);
      const std::uint8_t* crow =
          &cur.pixels[(std::size_t(c) * cur.h + by0 + py) * cur.w + bx0];
      const std::uint8_t* rrow = &ref.pixels[(std::size_t(c) * ref.h + sy) * ref.w];
      for (int px = 0; px < kMacroblock; ++px) {
        const int sx = clampi(rx + px, 0, ref.w - 1);
        acc += std::abs(int(crow[px]) - int(rrow[sx]));
      }
    }
  }
  return acc;
}

// Same cost with the patch known to lie fully inside the reference.
int sad_block_fast(const Frame& cur, const Frame& ref, int bx0, int by0, int rx,
                   int ry) {
  int acc = 0;
  for (int c = 0; c < 3; ++c) {
    for (int py = 0; py < kMacroblock; ++py) {
      const std::uint8_t* crow =
          &cur.pixels[(std::size_t(c) * cur.h + by0 + py) * cur.w + bx0];
      const std::uint8_t* rrow =
          &ref.pixels[(std::size_t(c) * ref.h + ry + py) * ref.w + rx];
      for (int px = 0; px < kMacroblock; ++px)
        acc += std::abs(int(crow[px]) - int(rrow[px]));
    }
  }
  return acc;
}

}  // namespace

MotionVectorField block_match(const Frame& current, const Frame& reference,
                              int search_range) {
  if (!current.same_shape(reference))
    throw DataError("block_match: frame dimensions differ");
  if (search_range < 0) throw DataError("block_match: search_range must be >= 0");
  if (search_range > 127)
    throw DataError("block_match: search_range must fit a signed byte");

  const int bh = current.h / kMacroblock, bw = current.w / kMacroblock;
  MotionVectorField mv(bh, bw);

  for (int by = 0; by < bh; ++by) {
    for (int bx = 0; bx < bw; ++bx) {
      const int bx0 = bx * kMacroblock, by0 = by * kMacroblock;
      // best = (sad, |dx|+|dy|, dy, dx)
      std::tuple<int, int, int, int> best(INT32_MAX, 0, 0, 0);
      for (int dy = -search_range; dy <= search_range; ++dy) {
        const int ry = by0 + dy;
        const bool y_in = ry >= 0 && ry + kMacroblock <= current.h;
        for (int dx = -search_range; dx <= search_range; ++dx) {
          const int rx = bx0 + dx;
          const bool inside = y_in && rx >= 0 && rx + kMacroblock <= current.w;
          const int sad = inside
                              ? sad_block_fast(current, reference, bx0, by0, rx, ry)
                              : sad_block_clamped(current, reference, bx0, by0, rx, ry);
          std::tuple<int, int, int, int> cand(sad, std::abs(dx) + std::abs(dy), dy, dx);
          if (cand < best) best = cand;
        }
      }
      mv.dx[mv.idx(by, bx)] = std::int8_t(std::get<3>(best));
      mv.dy[mv.idx(by, bx)] = std::int8_t(std::get<2>(best));
    }
  }
  return mv;
}

Frame motion_compensate(const Frame& reference, const MotionVectorField& mv) {
  if (mv.bh * kMacroblock != reference.h || mv.bw * kMacroblock != reference.w)
    throw DataError("motion_compensate: MV grid does not match frame dimensions");
  Frame out(reference.h, reference.w);
  for (int by = 0; by < mv.bh; ++by) {
    for (int bx = 0; bx < mv.bw; ++bx) {
      const int dx = mv.dx[mv.idx(by, bx)], dy = mv.dy[mv.idx(by, bx)];
      const int bx0 = bx * kMacroblock, by0 = by * kMacroblock;
      for (int c = 0; c < 3; ++c) {
        for (int py = 0; py < kMacroblock; ++py) {
          const int sy = clampi(by0 + py + dy, 0, reference.h - 1);
          const std::uint8_t* rrow =
              &reference.pixels[(std::size_t(c) * reference.h + sy) * reference.w];
          std::uint8_t* orow =
              &out.pixels[(std::size_t(c) * out.h + by0 + py) * out.w + bx0];
          for (int px = 0; px < kMacroblock; ++px)
            orow[px] = rrow[clampi(bx0 + px + dx, 0, reference.w - 1)];
        }
      }
    }
  }
  return out;
}

ResidualField compute_residual(const Frame& current, const Frame& compensated) {
  if (!current.same_shape(compensated))
    throw DataError("compute_residual: frame dimensions differ");
  ResidualField r(current.h, current.w);
  for (std::size_t i = 0; i < current.pixels.size(); ++i)
    r.values[i] = std::int16_t(int(current.pixels[i]) - int(compensated.pixels[i]));
  return r;
}

EncodedVideo encode(const std::vector<Frame>& frames, int gop_p_count,
                    int search_range, RefMode ref_mode) {
  if (frames.empty()) throw DataError("encode: no frames");
  if (gop_p_count < 0 || gop_p_count > 255)
    throw DataError("encode: gop_p_count out of range");
  const int gop_len = 1 + gop_p_count;
  if (int(frames.size()) % gop_len != 0)
    throw DataError("encode: frame count " + std::to_string(frames.size()) +
                    " not divisible by GOP length " + std::to_string(gop_len));
  for (const Frame& f : frames)
    if (!f.same_shape(frames[0])) throw DataError("encode: frame shapes differ");

  EncodedVideo ev;
  ev.width = frames[0].w;
  ev.height = frames[0].h;
  ev.gop_p_count = gop_p_count;
  ev.ref_mode = ref_mode;
  const int gop_count = int(frames.size()) / gop_len;
  ev.gops.reserve(gop_count);
  for (int g = 0; g < gop_count; ++g) {
    Gop gop;
    gop.iframe = frames[std::size_t(g) * gop_len];
    const Frame* ref = &gop.iframe;
    for (int k = 1; k < gop_len; ++k) {
      const Frame& cur = frames[std::size_t(g) * gop_len + k];
      PFrame pf;
      pf.mv = block_match(cur, *ref, search_range);
      Frame comp = motion_compensate(*ref, pf.mv);
      pf.residual = compute_residual(cur, comp);
      gop.pframes.push_back(std::move(pf));
      // compensated + residual == cur exactly, so the reconstructed
      // reference for Previous mode is the original frame itself
      if (ref_mode == RefMode::Previous) ref = &cur;
    }
    ev.gops.push_back(std::move(gop));
  }
  return ev;
}

std::vector<Frame> decode(const EncodedVideo& ev) {
  std::vector<Frame> out;
  out.reserve(std::size_t(ev.frame_count()));
  for (const Gop& gop : ev.gops) {
    if (gop.iframe.h != ev.height || gop.iframe.w != ev.width)
      throw DataError("decode: GOP I-frame dimensions do not match container");
    if (int(gop.pframes.size()) != ev.gop_p_count)
      throw DataError("decode: GOP P-frame count does not match container");
    out.push_back(gop.iframe);
    const Frame* ref = &gop.iframe;
    for (const PFrame& pf : gop.pframes) {
      Frame comp = motion_compensate(*ref, pf.mv);
      Frame rec(ev.height, ev.width);
      for (std::size_t i = 0; i < rec.pixels.size(); ++i) {
        const int v = int(comp.pixels[i]) + int(pf.residual.values[i]);
        if (v < 0 || v > 255)
          throw DataError("decode: reconstructed value out of range (corrupt data)");
        rec.pixels[i] = std::uint8_t(v);
      }
      out.push_back(std::move(rec));
      if (ev.ref_mode == RefMode::Previous) ref = &out.back();
    }
  }
  return out;
}

FlowField expand_mv(const MotionVectorField& mv) {
  const int h = mv.bh * kMacroblock, w = mv.bw * kMacroblock;
  FlowField f(h, w);
  for (int by = 0; by < mv.bh; ++by) {
    for (int bx = 0; bx < mv.bw; ++bx) {
      const float u = -float(mv.dx[mv.idx(by, bx)]);
      const float v = -float(mv.dy[mv.idx(by, bx)]);
      for (int py = 0; py < kMacroblock; ++py) {
        const int y = by * kMacroblock + py;
        for (int px = 0; px < kMacroblock; ++px) {
          const int x = bx * kMacroblock + px;
          f.u(y, x) = u;
          f.v(y, x) = v;
        }
      }
    }
  }
  return f;
}

double mean_epe(const FlowField& a, const FlowField& b) {
  if (a.h != b.h || a.w != b.w) throw DataError("mean_epe: field dimensions differ");
  double acc = 0.0;
  for (int y = 0; y < a.h; ++y)
    for (int x = 0; x < a.w; ++x) {
      const double du = double(a.u(y, x)) - double(b.u(y, x));
      const double dv = double(a.v(y, x)) - double(b.v(y, x));
      acc += std::sqrt(du * du + dv * dv);
    }
  return acc / (double(a.h) * a.w);
}

}  // namespace dmcnet
