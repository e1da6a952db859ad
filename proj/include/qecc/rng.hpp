#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace qecc {

/// Default master seed; bare runs are reproducible.
inline constexpr std::uint64_t kDefaultSeed = 0x5EEDC0DEULL;

/// xoshiro256** (Blackman and Vigna). Satisfies UniformRandomBitGenerator.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed = 0) { this->seed(seed); }

  void seed(std::uint64_t seed) {
    for (auto& w : s_) w = splitmix64(seed);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    const std::uint64_t out = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return out;
  }

  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
};

/// Seeded random stream. Substreams are derived from (seed, index) by hashing,
/// so a batch of work draws the same numbers no matter which thread runs it,
/// and opening a stream costs a few nanoseconds.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) { reseed(seed, 0, 0); }
  Rng(std::uint64_t seed, std::uint64_t stream) { reseed(seed, stream, 1); }

  Rng substream(std::uint64_t index) { return Rng(engine_(), index); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double normal() { return normal_(engine_); }
  std::uint64_t below(std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_); }
  std::uint64_t bits() { return engine_(); }

  Xoshiro256& engine() { return engine_; }

 private:
  void reseed(std::uint64_t seed, std::uint64_t stream, std::uint64_t tag) {
    // the splitmix finalizer is a bijection, so streams of one seed never collide
    std::uint64_t a = seed, b = (stream << 1) | tag;
    engine_.seed(Xoshiro256::splitmix64(a) ^ Xoshiro256::splitmix64(b));
  }

  Xoshiro256 engine_;
  std::normal_distribution<double> normal_;
};

}  // namespace qecc
