#pragma once

// Seeded, splittable 64-bit generator for reproducible sweeps.

#include <cmath>
#include <cstdint>

namespace gupqm {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Independent child stream; the parent advances by one draw.
  SplitMix64 split() noexcept { return SplitMix64(next() ^ 0xD1B54A32D192ED03ULL); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  std::uint64_t state() const noexcept { return state_; }

 private:
  std::uint64_t state_;
};

/// Stream for trial `index` of a run seeded with `seed`.
inline SplitMix64 trial_stream(std::uint64_t seed, std::uint64_t index) noexcept {
  SplitMix64 root(seed ^ (index * 0xA24BAED4963EE407ULL));
  root.next();
  return root.split();
}

}  // namespace gupqm
