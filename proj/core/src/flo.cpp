#include "dmcnet/flo.hpp"

#include "wire.hpp"

namespace dmcnet {

namespace {
constexpr float kFloMagic = 202021.25f;
}

void write_flo(const std::string& path, const FlowField& field) {
  if (field.h <= 0 || field.w <= 0) throw DataError("write_flo: empty field");
  wire::Writer w;
  w.f32(kFloMagic);
  w.i32(field.w);
  w.i32(field.h);
  for (int y = 0; y < field.h; ++y)
    for (int x = 0; x < field.w; ++x) {
      w.f32(field.u(y, x));
      w.f32(field.v(y, x));
    }
  w.save(path);
}

FlowField read_flo(const std::string& path) {
  wire::Reader r = wire::Reader::from_file(path);
  const float magic = r.f32();
  if (magic != kFloMagic)
    throw DataError("read_flo: bad magic in " + path);
  const std::int32_t w = r.i32();
  const std::int32_t h = r.i32();
  if (w <= 0 || h <= 0) throw DataError("read_flo: nonpositive dimensions");
  FlowField f(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      f.u(y, x) = r.f32();
      f.v(y, x) = r.f32();
    }
  if (!r.at_end()) throw DataError("read_flo: trailing bytes in " + path);
  return f;
}

}  // namespace dmcnet
