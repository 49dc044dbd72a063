#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace star {

// Bounded draw in [0, n) by rejection. Unlike std::uniform_int_distribution
// the result sequence is identical across standard library implementations.
inline size_t UniformIndex(std::mt19937_64& rng, size_t n) {
  const uint64_t bound = static_cast<uint64_t>(n);
  const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return static_cast<size_t>(x % bound);
}

// Uniform double in [0, 1) from the top 53 bits.
inline double UniformUnit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// 64-bit FNV-1a.
inline uint64_t Fnv1a(std::string_view s, uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace star
