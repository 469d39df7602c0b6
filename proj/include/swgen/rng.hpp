// Copyright 2026 The swgen Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Seeded randomness. Every random object in the library is driven by a
// 64-bit seed derived from one master seed with derive_seed(); the bit
// generators and the uniform double conversion are spelled out here so
// results do not depend on the standard library's distributions.

#include <cstdint>
#include <cstring>
#include <limits>
#include <span>
#include <string_view>

#include "swgen/common.hpp"

namespace swgen {

inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}
  constexpr std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

 private:
  std::uint64_t state_;
};

/// xoshiro256** bit generator; satisfies UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& w : s_) w = sm.next();
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

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

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound), bound > 0 (Lemire's method).
  std::uint64_t below(std::uint64_t bound) {
    unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>((*this)()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

inline std::uint64_t hash_string(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Sub-seed for the component named `label` under `master`.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view label) {
  return mix64(master ^ mix64(hash_string(label) + 0x632be59bd9b4e019ULL));
}

/// Seeded 64-bit hash of a symbol sequence.
inline std::uint64_t hash_symbols(std::uint64_t seed,
                                  std::span<const Symbol> symbols) {
  std::uint64_t h = mix64(seed ^ (symbols.size() * 0x9e3779b97f4a7c15ULL));
  std::size_t i = 0;
  for (; i + 8 <= symbols.size(); i += 8) {
    std::uint64_t chunk;
    std::memcpy(&chunk, symbols.data() + i, 8);
    h = mix64(h ^ chunk) * 0xff51afd7ed558ccdULL;
  }
  std::uint64_t tail = 0;
  for (std::size_t j = 0; i < symbols.size(); ++i, ++j) {
    tail |= static_cast<std::uint64_t>(symbols[i]) << (8 * j);
  }
  return mix64(h ^ tail ^ 0xc4ceb9fe1a85ec53ULL);
}

/// Uniform double in [0, 1) that is a pure function of (seed, symbols).
inline double hash_uniform(std::uint64_t seed, std::span<const Symbol> symbols) {
  return static_cast<double>(hash_symbols(seed, symbols) >> 11) * 0x1.0p-53;
}

struct WordHash {
  std::size_t operator()(const Word& w) const {
    return static_cast<std::size_t>(hash_symbols(0x5157u, w));
  }
};

}  // namespace swgen
