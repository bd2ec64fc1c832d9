#pragma once

#include <cstdint>

namespace melonlab {

// Counter-based generator: every draw is a pure function of its key, so any
// sub-grid of an environment regenerates identically and draws can be made
// in any order or in parallel. The mixer is the SplitMix64 finalizer applied
// to each key word in turn.
namespace rng {

enum class Stream : std::uint64_t {
  kWeight = 0x5745494748543031ULL,
  kJitter = 0x4a49545445523031ULL,
  kTrial = 0x545249414c533031ULL,
};

constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t hash(std::uint64_t seed, Stream stream, std::uint64_t a,
                             std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t h = mix64(seed ^ static_cast<std::uint64_t>(stream));
  h = mix64(h ^ a);
  h = mix64(h ^ (b * 0xd6e8feb86659fd93ULL));
  h = mix64(h ^ (c * 0xa0761d6478bd642fULL));
  return h;
}

// Uniform in the open interval (0, 1) with 53 random bits.
constexpr double to_unit_open(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace rng
}  // namespace melonlab
