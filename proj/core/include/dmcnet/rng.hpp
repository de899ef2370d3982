#pragma once

#include <cstdint>
#include <cstring>
#include <string_view>
#include <vector>

namespace dmcnet {

// Counter-based 64-bit generator (splitmix64 finalizer). The whole project
// draws randomness through this so that runs reproduce bit-for-bit across
// platforms and standard-library versions.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [0, n). n must be positive. Uses rejection to stay
  // unbiased and platform-independent.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (0ull - n) % n;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  int range_int(int lo, int hi) {  // inclusive bounds
    return lo + int(below(std::uint64_t(hi - lo + 1)));
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = std::size_t(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

private:
  std::uint64_t state_;
};

// FNV-1a over a label, used to derive independent sub-streams from one run
// seed ("gen", "disc", "cls.mv", ...).
inline std::uint64_t hash_label(std::string_view label) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char ch : label) {
    h ^= ch;
    h *= 0x100000001B3ull;
  }
  return h;
}

inline std::uint64_t derive_seed(std::uint64_t run_seed, std::string_view label) {
  Rng mix(run_seed ^ hash_label(label));
  return mix.next_u64();
}

}  // namespace dmcnet
