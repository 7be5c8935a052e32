#pragma once

#include <cstdint>
#include <vector>

#include "ifslab/common.hpp"

namespace ifslab {

// splitmix64 step, used for seeding and for deriving per-trial streams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// xoshiro256++ with splitmix64 seeding. Chosen over std::mt19937_64 because
// the helper methods below (uniform doubles, categorical draws) must produce
// identical streams on every platform; the standard distributions make no
// such promise.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0, 1), 53 bits of mantissa.
  double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in {0, ..., n-1}.
  int next_index(int n) { return static_cast<int>(next_double() * n) % n; }

  // Draws a 1-based symbol according to the given probability vector.
  int next_symbol(const std::vector<double>& probs) {
    double u = next_double();
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      acc += probs[i];
      if (u < acc) return static_cast<int>(i) + 1;
    }
    return static_cast<int>(probs.size());
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

// Derives the seed of trial i from a base seed. Documented split rule: the
// pair (seed, i) is hashed through splitmix64 twice so neighbouring trials
// share no low-bit structure.
inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t i) {
  std::uint64_t st = seed ^ (0x9e3779b97f4a7c15ull * (i + 1));
  std::uint64_t a = splitmix64(st);
  return splitmix64(st) ^ a;
}

}  // namespace ifslab
