#pragma once

#include <array>
#include <cstdint>

namespace croptrack {

/// SplitMix64 finalizer, used for seeding and for deriving independent sub-seeds.
[[nodiscard]] std::uint64_t splitmix64(std::uint64_t& state);
[[nodiscard]] std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// xoshiro256** seeded through SplitMix64. Output is identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal deviate by the Box-Muller transform.
  double normal();
  /// Standard normal from a 65536-entry quantile table indexed by 16 random bits.
  /// Much cheaper than normal(); tails are truncated at about 4.3 sigma.
  float fast_normal();

 private:
  std::array<std::uint64_t, 4> s_{};
  const float* table_;
  double spare_ = 0.0;
  bool has_spare_ = false;
  std::uint64_t bits_ = 0;
  int bits_left_ = 0;
};

}  // namespace croptrack
