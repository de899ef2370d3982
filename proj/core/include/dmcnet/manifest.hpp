#pragma once

#include <string>
#include <utility>
#include <vector>

namespace dmcnet {

// Ordered key=value text file, one entry per line. Used for run manifests,
// metric reports and CLI config files; entries keep insertion order so two
// identical runs emit byte-identical files.
class KeyValueFile {
public:
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, long long value);
  void set(const std::string& key, int value) { set(key, (long long)value); }
  void set(const std::string& key, std::uint64_t value);
  void set(const std::string& key, double value);  // %.17g, round-trip exact
  void set(const std::string& key, bool value);

  bool has(const std::string& key) const;
  const std::string& get(const std::string& key) const;  // throws if missing
  std::string get_or(const std::string& key, const std::string& fallback) const;
  long long get_int(const std::string& key) const;
  double get_double(const std::string& key) const;

  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }

  std::string to_string() const;
  void save(const std::string& path) const;  // write-temp-then-rename
  static KeyValueFile load(const std::string& path);
  static KeyValueFile parse(const std::string& text);

private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace dmcnet
