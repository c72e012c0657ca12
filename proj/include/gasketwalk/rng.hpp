#pragma once

#include <cstdint>

namespace gasket {

/// splitmix64 (Steele, Lea, Flood 2014). Used for seed expansion and for
/// deriving independent per-shard seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed for shard k of a run seeded with `seed`; shards are statistically
/// independent streams and merging shard results is order-independent.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t shard) {
  std::uint64_t s = seed ^ (0x6a09e667f3bcc909ULL + shard * 0x9e3779b97f4a7c15ULL);
  return splitmix64(s);
}

/// xoshiro256++ (Blackman, Vigna 2019); public-domain reference algorithm.
/// Deterministic across platforms for a given seed.
class Xoshiro256PP {
 public:
  explicit Xoshiro256PP(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t state_[4];
};

}  // namespace gasket
