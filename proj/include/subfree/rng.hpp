#pragma once

// Seeded generators. All randomness flows through std::mt19937_64 (whose
// output sequence is fixed by the standard) with splitmix64 used to derive
// independent stream seeds; no std distributions are used, so results are
// identical across standard library implementations.

#include <cstdint>
#include <random>

namespace subfree {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed for an independent stream `stream` under `seed`.
inline constexpr std::uint64_t derive_seed(std::uint64_t seed,
                                           std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform in [0, bound) by 128-bit multiply-shift (bias below 2^-64 * bound).
  std::uint64_t below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<Wide>(engine_()) * bound) >> 64);
  }

  bool bernoulli(double probability) { return uniform01() < probability; }

 private:
  __extension__ typedef unsigned __int128 Wide;

  std::mt19937_64 engine_;
};

}  // namespace subfree
