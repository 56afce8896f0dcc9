#pragma once

#include <cstdint>
#include <random>

namespace salt {

using Rng = std::mt19937_64;

// splitmix64 finalizer, used to turn structured seed inputs into
// well-mixed engine seeds.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic seed for a named substream of a master seed. Every source of
// randomness in a run derives its own engine through this, so runs replay
// bit-for-bit and substreams stay independent of scheduling.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t s = mix64(master);
  s = mix64(s ^ a);
  s = mix64(s ^ b);
  return mix64(s ^ c);
}

}  // namespace salt
