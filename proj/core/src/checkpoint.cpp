#include "dmcnet/checkpoint.hpp"

#include "wire.hpp"

namespace dmcnet {

namespace {
constexpr char kMagic[4] = {'D', 'M', 'C', 'W'};
constexpr std::uint16_t kVersion = 1;
}  // namespace

void save_checkpoint(
    const std::string& path,
    const std::vector<std::pair<std::string, const Tensor4f*>>& tensors) {
  wire::Writer w;
  w.bytes(kMagic, 4);
  w.u16(kVersion);
  w.u32(std::uint32_t(tensors.size()));
  for (const auto& [name, t] : tensors) {
    if (name.size() > 0xFFFF) throw DataError("save_checkpoint: name too long");
    w.u16(std::uint16_t(name.size()));
    w.text(name);
    w.u8(4);
    w.u32(std::uint32_t(t->n));
    w.u32(std::uint32_t(t->c));
    w.u32(std::uint32_t(t->h));
    w.u32(std::uint32_t(t->w));
    for (float v : t->data) w.f32(v);
  }
  w.save(path);
}

std::map<std::string, Tensor4f> load_checkpoint(const std::string& path) {
  wire::Reader r = wire::Reader::from_file(path);
  char magic[4];
  r.bytes(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0)
    throw DataError("load_checkpoint: bad magic in " + path);
  const std::uint16_t version = r.u16();
  if (version != kVersion)
    throw DataError("load_checkpoint: unsupported version " + std::to_string(version));
  const std::uint32_t count = r.u32();

  std::map<std::string, Tensor4f> out;
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint16_t name_len = r.u16();
    const std::string name = r.text(name_len);
    const std::uint8_t rank = r.u8();
    if (rank != 4) throw DataError("load_checkpoint: unsupported rank");
    const int n = int(r.u32()), c = int(r.u32()), h = int(r.u32()), w = int(r.u32());
    Tensor4f t(n, c, h, w);
    for (auto& v : t.data) v = r.f32();
    if (!out.emplace(name, std::move(t)).second)
      throw DataError("load_checkpoint: duplicate tensor name " + name);
  }
  if (!r.at_end()) throw DataError("load_checkpoint: trailing bytes in " + path);
  return out;
}

}  // namespace dmcnet
