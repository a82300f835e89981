#include "croptrack/random.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace croptrack {
namespace {

constexpr int kTableBits = 16;
constexpr std::size_t kTableSize = std::size_t{1} << kTableBits;

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// Midpoint quantiles of the standard normal, found by bisection on the CDF.
std::vector<float> build_quantile_table() {
  std::vector<float> table(kTableSize);
  for (std::size_t i = 0; i < kTableSize / 2; ++i) {
    const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(kTableSize);
    double lo = -10.0;
    double hi = 0.0;
    for (int it = 0; it < 64; ++it) {
      const double mid = 0.5 * (lo + hi);
      (normal_cdf(mid) < p ? lo : hi) = mid;
    }
    const auto q = static_cast<float>(0.5 * (lo + hi));
    table[i] = q;
    table[kTableSize - 1 - i] = -q;
  }
  return table;
}

const std::vector<float>& quantile_table() {
  static const std::vector<float> table = build_quantile_table();
  return table;
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t state = seed ^ (stream * 0xd1b54a32d192ed03ULL);
  (void)splitmix64(state);
  return splitmix64(state);
}

Rng::Rng(std::uint64_t seed) : table_(quantile_table().data()) {
  for (auto& word : s_) word = splitmix64(seed);
}

std::uint64_t Rng::next() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

float Rng::fast_normal() {
  if (bits_left_ < kTableBits) {
    bits_ = next();
    bits_left_ = 64;
  }
  const auto idx = static_cast<std::size_t>(bits_ & (kTableSize - 1));
  bits_ >>= kTableBits;
  bits_left_ -= kTableBits;
  return table_[idx];
}

}  // namespace croptrack
