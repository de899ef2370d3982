#include "dmcnet/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "dmcnet/errors.hpp"
#include "wire.hpp"

namespace dmcnet {

void KeyValueFile::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries_.emplace_back(key, value);
}

void KeyValueFile::set(const std::string& key, long long value) {
  set(key, std::to_string(value));
}

void KeyValueFile::set(const std::string& key, std::uint64_t value) {
  set(key, std::to_string(value));
}

void KeyValueFile::set(const std::string& key, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  set(key, std::string(buf));
}

void KeyValueFile::set(const std::string& key, bool value) {
  set(key, std::string(value ? "true" : "false"));
}

bool KeyValueFile::has(const std::string& key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return true;
  return false;
}

const std::string& KeyValueFile::get(const std::string& key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return v;
  throw DataError("KeyValueFile: missing key '" + key + "'");
}

std::string KeyValueFile::get_or(const std::string& key,
                                 const std::string& fallback) const {
  return has(key) ? get(key) : fallback;
}

long long KeyValueFile::get_int(const std::string& key) const {
  return std::stoll(get(key));
}

double KeyValueFile::get_double(const std::string& key) const {
  return std::stod(get(key));
}

std::string KeyValueFile::to_string() const {
  std::ostringstream out;
  for (const auto& [k, v] : entries_) out << k << "=" << v << "\n";
  return out.str();
}

void KeyValueFile::save(const std::string& path) const {
  wire::Writer w;
  w.text(to_string());
  w.save(path);
}

KeyValueFile KeyValueFile::parse(const std::string& text) {
  KeyValueFile kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw DataError("KeyValueFile: malformed line '" + line + "'");
    kv.set(line.substr(0, eq), line.substr(eq + 1));
  }
  return kv;
}

KeyValueFile KeyValueFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("KeyValueFile: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

}  // namespace dmcnet
