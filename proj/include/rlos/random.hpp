#pragma once

#include "rlos/types.hpp"

#include <array>
#include <cstdint>
#include <limits>

namespace rlos {

// Every random stream in the engine is xoshiro256** (Blackman & Vigna)
// seeded by expanding a 64-bit seed through splitmix64. Both algorithms are
// fixed here so that seeds reproduce across compilers and platforms; none of
// the <random> distributions are used because their output is
// implementation-defined.

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

class Xoshiro256StarStar {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256StarStar(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& word : s_) word = sm.next();
  }

  explicit Xoshiro256StarStar(const std::array<std::uint64_t, 4>& state) : s_(state) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
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

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::array<std::uint64_t, 4> s_{};
};

/// Seeded stream with the handful of variates the engine needs.
///
/// - uniform(): top 53 bits of one engine output, in [0, 1).
/// - below(n): rejection sampling on the full 64-bit output; values below
///   (2^64 mod n) are rejected, the rest reduced mod n.
/// - normal(): Box-Muller; the second variate of each pair is cached.
/// - poisson(lambda): inversion by sequential search; rates above 200 are
///   split into a sum of independent Poisson draws of rate <= 200.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream for item `index` of a family seeded by `seed`.
  static Rng substream(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 sm(seed ^ (0xD1B54A32D192ED03ULL * (index + 1)));
    return Rng(sm.next());
  }

  std::uint64_t next_u64() { return engine_(); }

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::uint64_t below(std::uint64_t n);

  double normal();

  std::int64_t poisson(double lambda);

  /// Uniform point on the probability simplex (flat Dirichlet).
  Eigen::VectorXd simplex_point(Index d);

  Xoshiro256StarStar& engine() { return engine_; }

 private:
  Xoshiro256StarStar engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace rlos
