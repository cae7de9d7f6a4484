#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace sigdet {

/// SplitMix64 finalizer; used to hash replication indices into seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of replication `index` under `master`: master XOR hash(index).
constexpr std::uint64_t replication_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return master ^ splitmix64(index);
}

/// Independent sub-stream of `master` identified by `tag`.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag) noexcept {
  return splitmix64(master ^ splitmix64(tag ^ 0xD1B54A32D192ED03ULL));
}

/// xoshiro256** with SplitMix64 state expansion. Satisfies
/// UniformRandomBitGenerator; cheap to seed, one engine per replication.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed) noexcept {
    for (auto& s : state_) {
      s = splitmix64(seed);
      seed += 0x9E3779B97F4A7C15ULL;
    }
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }
  std::array<std::uint64_t, 4> state_{};
};

}  // namespace sigdet
