#pragma once

#include <cstdint>
#include <limits>

namespace rockrelax {

/// SplitMix64: a 64-bit counter-based generator. Its output sequence is fully
/// determined by the seed, so seeded runs are bit-reproducible on any
/// platform. Satisfies UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;
  static constexpr const char* kName = "splitmix64";

  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// Independent stream seed for the index-th sub-task of a seeded run.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  SplitMix64 g(base ^ (0xd1b54a32d192ed03ULL * (index + 1)));
  return g();
}

}  // namespace rockrelax
