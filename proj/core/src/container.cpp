#include <fstream>
#include <sstream>

#include "dmcnet/codec.hpp"
#include "wire.hpp"

namespace dmcnet {

namespace {
constexpr char kMagic[4] = {'D', 'M', 'C', 'V'};
constexpr std::uint16_t kVersion = 1;
}  // namespace

void write_dmcv(const std::string& path, const EncodedVideo& ev) {
  if (ev.width <= 0 || ev.height <= 0 || ev.width % kMacroblock != 0 ||
      ev.height % kMacroblock != 0)
    throw DataError("write_dmcv: invalid dimensions");
  if (ev.width > 0xFFFF || ev.height > 0xFFFF)
    throw DataError("write_dmcv: dimensions exceed container limits");

  wire::Writer w;
  w.bytes(kMagic, 4);
  w.u16(kVersion);
  w.u16(std::uint16_t(ev.width));
  w.u16(std::uint16_t(ev.height));
  w.u8(std::uint8_t(ev.gop_p_count));
  w.u8(std::uint8_t(ev.ref_mode));
  w.u32(std::uint32_t(ev.gops.size()));
  w.i32(ev.label);

  const std::size_t plane = std::size_t(ev.height) * ev.width;
  for (const Gop& gop : ev.gops) {
    if (gop.iframe.h != ev.height || gop.iframe.w != ev.width)
      throw DataError("write_dmcv: I-frame shape mismatch");
    if (int(gop.pframes.size()) != ev.gop_p_count)
      throw DataError("write_dmcv: P-frame count mismatch");
    w.bytes(gop.iframe.pixels.data(), 3 * plane);
    for (const PFrame& pf : gop.pframes) {
      if (pf.mv.bh * kMacroblock != ev.height || pf.mv.bw * kMacroblock != ev.width)
        throw DataError("write_dmcv: MV grid shape mismatch");
      for (std::size_t i = 0; i < pf.mv.dx.size(); ++i) {
        w.i8(pf.mv.dx[i]);
        w.i8(pf.mv.dy[i]);
      }
      for (std::int16_t v : pf.residual.values) w.i16(v);
    }
  }
  w.save(path);
}

EncodedVideo read_dmcv(const std::string& path) {
  wire::Reader r = wire::Reader::from_file(path);
  char magic[4];
  r.bytes(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0)
    throw DataError("read_dmcv: bad magic in " + path);
  const std::uint16_t version = r.u16();
  if (version != kVersion)
    throw DataError("read_dmcv: unsupported version " + std::to_string(version));

  EncodedVideo ev;
  ev.width = r.u16();
  ev.height = r.u16();
  ev.gop_p_count = r.u8();
  const std::uint8_t mode = r.u8();
  if (mode > 1) throw DataError("read_dmcv: bad ref_mode");
  ev.ref_mode = RefMode(mode);
  const std::uint32_t gop_count = r.u32();
  ev.label = r.i32();
  if (ev.width <= 0 || ev.height <= 0 || ev.width % kMacroblock != 0 ||
      ev.height % kMacroblock != 0)
    throw DataError("read_dmcv: invalid dimensions");

  const std::size_t plane = std::size_t(ev.height) * ev.width;
  const int bh = ev.height / kMacroblock, bw = ev.width / kMacroblock;
  ev.gops.reserve(gop_count);
  for (std::uint32_t g = 0; g < gop_count; ++g) {
    Gop gop;
    gop.iframe = Frame(ev.height, ev.width);
    r.bytes(gop.iframe.pixels.data(), 3 * plane);
    gop.pframes.resize(std::size_t(ev.gop_p_count));
    for (PFrame& pf : gop.pframes) {
      pf.mv = MotionVectorField(bh, bw);
      for (std::size_t i = 0; i < pf.mv.dx.size(); ++i) {
        pf.mv.dx[i] = r.i8();
        pf.mv.dy[i] = r.i8();
      }
      pf.residual = ResidualField(ev.height, ev.width);
      for (auto& v : pf.residual.values) v = r.i16();
    }
    ev.gops.push_back(std::move(gop));
  }
  if (!r.at_end()) throw DataError("read_dmcv: trailing bytes in " + path);
  return ev;
}

std::vector<Frame> read_raw_video(const std::string& path) {
  std::ifstream hdr(path + ".hdr");
  if (!hdr) throw DataError("read_raw_video: missing sidecar " + path + ".hdr");
  int width = 0, height = 0, frames = 0;
  std::string line;
  while (std::getline(hdr, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(0, eq);
    const int value = std::stoi(line.substr(eq + 1));
    if (key == "width") width = value;
    else if (key == "height") height = value;
    else if (key == "frames") frames = value;
  }
  if (width <= 0 || height <= 0 || frames <= 0)
    throw DataError("read_raw_video: sidecar must define width, height, frames");

  wire::Reader r = wire::Reader::from_file(path);
  std::vector<Frame> out;
  out.reserve(std::size_t(frames));
  for (int f = 0; f < frames; ++f) {
    Frame frame(height, width);
    r.bytes(frame.pixels.data(), frame.pixels.size());
    out.push_back(std::move(frame));
  }
  if (!r.at_end()) throw DataError("read_raw_video: file larger than sidecar claims");
  return out;
}

void write_raw_video(const std::string& path, const std::vector<Frame>& frames) {
  if (frames.empty()) throw DataError("write_raw_video: no frames");
  wire::Writer w;
  for (const Frame& f : frames) {
    if (!f.same_shape(frames[0]))
      throw DataError("write_raw_video: frame shapes differ");
    w.bytes(f.pixels.data(), f.pixels.size());
  }
  w.save(path);

  std::ostringstream hdr;
  hdr << "width=" << frames[0].w << "\n"
      << "height=" << frames[0].h << "\n"
      << "frames=" << frames.size() << "\n";
  wire::Writer hw;
  hw.text(hdr.str());
  hw.save(path + ".hdr");
}

}  // namespace dmcnet
