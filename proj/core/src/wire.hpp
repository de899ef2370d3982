#pragma once

// Internal little-endian framing helpers shared by the binary containers.

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "dmcnet/errors.hpp"

namespace dmcnet::wire {

class Writer {
public:
  void u8(std::uint8_t v) { buf_.push_back(char(v)); }
  void u16(std::uint16_t v) {
    buf_.push_back(char(v & 0xFF));
    buf_.push_back(char((v >> 8) & 0xFF));
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(char((v >> (8 * i)) & 0xFF));
  }
  void i8(std::int8_t v) { u8(std::uint8_t(v)); }
  void i16(std::int16_t v) { u16(std::uint16_t(v)); }
  void i32(std::int32_t v) { u32(std::uint32_t(v)); }
  void f32(float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    u32(bits);
  }
  void bytes(const void* p, std::size_t len) {
    const char* c = static_cast<const char*>(p);
    buf_.insert(buf_.end(), c, c + len);
  }
  void text(const std::string& s) { bytes(s.data(), s.size()); }

  // write-temp-then-rename so readers never observe a partial file
  void save(const std::string& path) const {
    const std::string tmp = path + ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw DataError("cannot open for writing: " + tmp);
      out.write(buf_.data(), std::streamsize(buf_.size()));
      if (!out) throw DataError("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
  }

  const std::vector<char>& buffer() const { return buf_; }

private:
  std::vector<char> buf_;
};

class Reader {
public:
  explicit Reader(std::vector<char> buf) : buf_(std::move(buf)) {}

  static Reader from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw DataError("cannot open: " + path);
    const auto size = in.tellg();
    in.seekg(0);
    std::vector<char> buf(std::size_t(size));
    in.read(buf.data(), size);
    if (!in) throw DataError("read failed: " + path);
    return Reader(std::move(buf));
  }

  std::uint8_t u8() {
    need(1);
    return std::uint8_t(buf_[pos_++]);
  }
  std::uint16_t u16() {
    need(2);
    std::uint16_t v = std::uint16_t(std::uint8_t(buf_[pos_])) |
                      std::uint16_t(std::uint8_t(buf_[pos_ + 1])) << 8;
    pos_ += 2;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= std::uint32_t(std::uint8_t(buf_[pos_ + i])) << (8 * i);
    pos_ += 4;
    return v;
  }
  std::int8_t i8() { return std::int8_t(u8()); }
  std::int16_t i16() { return std::int16_t(u16()); }
  std::int32_t i32() { return std::int32_t(u32()); }
  float f32() {
    std::uint32_t bits = u32();
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
  }
  void bytes(void* dst, std::size_t len) {
    need(len);
    std::memcpy(dst, buf_.data() + pos_, len);
    pos_ += len;
  }
  std::string text(std::size_t len) {
    need(len);
    std::string s(buf_.data() + pos_, len);
    pos_ += len;
    return s;
  }
  bool at_end() const { return pos_ == buf_.size(); }

private:
  void need(std::size_t len) const {
    if (pos_ + len > buf_.size()) throw DataError("truncated file");
  }
  std::vector<char> buf_;
  std::size_t pos_ = 0;
};

}  // namespace dmcnet::wire
