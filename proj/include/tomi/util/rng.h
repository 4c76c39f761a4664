// Deterministic, platform-independent random number generation. Every
// stochastic choice in the pipeline flows through this generator so the
// same seed replays bit-exactly on any machine.

#pragma once

#include <cstdint>
#include <string_view>

namespace tomi {

/// splitmix64 stream; passes through 64-bit state only.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [lo, hi], inclusive.
  int64_t uniformInt(int64_t lo, int64_t hi) {
    uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    return lo + static_cast<int64_t>(next() % span);
  }

  /// Uniform real in [0, 1).
  double uniformReal() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  bool chance(double probability) { return uniformReal() < probability; }

 private:
  uint64_t state_;
};

/// FNV-1a, used to fold names into per-entity seed streams.
inline uint64_t hashName(std::string_view text) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Combines a run seed with an entity name into an independent stream, so
/// adding an unrelated entity never disturbs another entity's draws.
inline Rng seededFor(uint64_t seed, std::string_view name) {
  return Rng(seed ^ (hashName(name) | 1ULL));
}

}  // namespace tomi
