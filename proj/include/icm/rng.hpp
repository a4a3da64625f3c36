// Copyright (c) 2026 The ICM Pipeline Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace icm::rng {

// Deterministic, platform-stable randomness. Everything that shuffles,
// samples, or jitters in the pipeline derives from an explicit seed through
// these helpers; std::uniform_int_distribution is avoided because its
// output is implementation-defined.

struct SplitMix64 {
  uint64_t state = 0;

  explicit SplitMix64(uint64_t seed) : state(seed) {}

  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
};

inline uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Derive a stream seed from a base seed and a salt string (image id, stage
/// name, ...) so independent draws never share a sequence.
inline uint64_t mix(uint64_t seed, std::string_view salt) {
  SplitMix64 g(seed ^ fnv1a64(salt));
  return g.next();
}

/// Bounded draw via 128-bit multiply-shift; bias is O(n / 2^64).
inline size_t uniform_index(SplitMix64& g, size_t n) {
  return static_cast<size_t>((static_cast<unsigned __int128>(g.next()) * n) >> 64);
}

inline double uniform01(SplitMix64& g) {
  return static_cast<double>(g.next() >> 11) * (1.0 / 9007199254740992.0);
}

template <typename T>
void shuffle(std::vector<T>& items, uint64_t seed) {
  SplitMix64 g(seed);
  for (size_t i = items.size(); i > 1; --i) {
    size_t j = uniform_index(g, i);
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace icm::rng
