#pragma once

#include <cstdint>
#include <random>

namespace prv {

/// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Engine for stream `index` under `seed`. Replicate k always gets the same
/// stream regardless of which worker runs it.
inline std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(mix64(seed)), static_cast<std::uint32_t>(mix64(seed) >> 32),
                    static_cast<std::uint32_t>(mix64(seed ^ mix64(index))),
                    static_cast<std::uint32_t>(mix64(seed ^ mix64(index)) >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace prv
