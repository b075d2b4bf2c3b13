#pragma once

#include <cstdint>
#include <random>

namespace ecoloom {

/// Seeded generator with a fixed, platform-independent output sequence.
/// std::mt19937_64's sequence is pinned by the standard; the conversion to
/// [0,1) is done here because the standard distributions are not.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  /// Uniform double in [0,1) with 53 random bits.
  double uniform() {
    ++draws_;
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Number of values drawn since seeding.
  std::uint64_t draws() const { return draws_; }

  bool operator==(const Rng&) const = default;

 private:
  std::mt19937_64 engine_;
  std::uint64_t draws_ = 0;
};

}  // namespace ecoloom
