#pragma once

#include <cstdint>

namespace agentrl {

inline constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// splitmix64 finalizer: adds the golden-ratio increment then scrambles.
constexpr uint64_t mix64(uint64_t x) {
  uint64_t z = x + kGolden;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Stateless child-seed derivation. Children of distinct (seed, index) pairs
// are decorrelated, and the same pair always yields the same child.
constexpr uint64_t derive_seed(uint64_t seed, uint64_t index) {
  return mix64(seed ^ mix64(index));
}

// splitmix64 stream. Cheap, full-period over 2^64 seeds, and entirely
// reproducible from its seed, which is all the training stack needs.
class RngStream {
 public:
  explicit RngStream(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    state_ += kGolden;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1): top 53 bits scaled by 2^-53.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [0, n) via 128-bit multiply-shift. pre: n > 0.
  uint64_t next_below(uint64_t n) {
    return static_cast<uint64_t>(
        (static_cast<__uint128_t>(next_u64()) * n) >> 64);
  }

  // Uniform in [lo, hi] inclusive. pre: lo <= hi.
  int next_int(int lo, int hi) {
    return lo + static_cast<int>(next_below(
                    static_cast<uint64_t>(hi - lo) + 1));
  }

  bool next_bool(double p_true) { return next_double() < p_true; }

 private:
  uint64_t state_;
};

}  // namespace agentrl
