#pragma once

#include <cstdint>

namespace tlsm {

// splitmix64 finalizer; bijective 64-bit mixer
constexpr uint64_t mix64(uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}

constexpr uint64_t kGolden = 0x9e3779b97f4a7c15ull;

// Seed for trajectory `index` under `base_seed`. Deliberately independent of
// the schedule cell, so every cell sees the same curve panel (common random
// numbers for paired comparisons) and any single trajectory can be replayed
// in isolation.
constexpr uint64_t trajectory_seed(uint64_t base_seed, uint64_t index) {
  return mix64(base_seed + kGolden * (index + 1));
}

// splitmix64 stream
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    state_ += kGolden;
    return mix64(state_);
  }

  // uniform in [0, 1) with 53-bit resolution
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

 private:
  uint64_t state_;
};

}  // namespace tlsm
