#pragma once

#include <cstdint>
#include <random>

namespace paulivar {

/// Advances a SplitMix64 state and returns the next output word. Used for
/// seed derivation so that per-stream seeds are decorrelated even for
/// adjacent (master_seed, stream) pairs.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Seed for stream `stream` of master seed `master`: two SplitMix64 steps
/// over the concatenated inputs.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t state = master;
  splitmix64_next(state);
  state ^= 0x6a09e667f3bcc909ull + stream;
  return splitmix64_next(state);
}

/// Deterministic random source: std::mt19937_64 (output sequence fixed by
/// the C++ standard) with uniform doubles generated directly from the top 53
/// bits, so streams reproduce bit-exactly across platforms and standard
/// libraries.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53-bit resolution.
  double next_double() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound) by rejection (bound > 0).
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % bound;
    std::uint64_t draw;
    do {
      draw = engine_();
    } while (draw >= limit);
    return draw % bound;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace paulivar
