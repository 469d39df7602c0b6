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

// Partitions of the orbit space as finite-window (sliding block) codes, and
// the statistics we read off the tracks they induce.

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "swgen/common.hpp"
#include "swgen/sources.hpp"

namespace swgen {

/// The symbol stream a scope is allowed to read: the x track, the y track,
/// or pair indices x * y_alphabet + y.
inline std::vector<Symbol> scoped_stream(const Orbit& orbit, Scope scope) {
  switch (scope) {
    case Scope::x_only:
      return orbit.x;
    case Scope::y_only:
      return orbit.y;
    case Scope::joint: {
      std::vector<Symbol> s(orbit.size());
      for (std::size_t i = 0; i < s.size(); ++i)
        s[i] = static_cast<Symbol>(orbit.x[i] * orbit.y_alphabet + orbit.y[i]);
      return s;
    }
  }
  return {};
}

inline unsigned scoped_alphabet(const Orbit& orbit, Scope scope) {
  switch (scope) {
    case Scope::x_only:
      return orbit.x_alphabet;
    case Scope::y_only:
      return orbit.y_alphabet;
    case Scope::joint:
      return orbit.x_alphabet * orbit.y_alphabet;
  }
  return 0;
}

/// A partition with `parts` parts given by a total code on windows of width
/// 2*radius+1 of the scoped stream. The table is indexed row-major: the
/// leftmost window symbol is the most significant digit.
struct SlidingBlockPartition {
  unsigned parts = 1;
  unsigned radius = 0;
  Scope scope = Scope::x_only;
  unsigned input_alphabet = 2;
  std::vector<Symbol> table;
  Symbol fill = 0;

  std::size_t window() const { return 2 * std::size_t{radius} + 1; }

  std::size_t table_size() const {
    std::size_t size = 1;
    for (std::size_t i = 0; i < window(); ++i) size *= input_alphabet;
    return size;
  }

  static SlidingBlockPartition from_function(
      unsigned parts, unsigned radius, Scope scope, unsigned input_alphabet,
      const std::function<Symbol(std::span<const Symbol>)>& code) {
    SlidingBlockPartition p{parts, radius, scope, input_alphabet, {}, 0};
    const std::size_t size = p.table_size();
    if (size > (std::size_t{1} << 26))
      throw Error("sliding block code table too large");
    p.table.resize(size);
    Word window(p.window());
    for (std::size_t idx = 0; idx < size; ++idx) {
      std::size_t rest = idx;
      for (std::size_t j = window.size(); j-- > 0;) {
        window[j] = static_cast<Symbol>(rest % input_alphabet);
        rest /= input_alphabet;
      }
      p.table[idx] = code(window);
    }
    p.validate();
    return p;
  }

  static SlidingBlockPartition constant(Scope scope, unsigned input_alphabet) {
    return from_function(1, 0, scope, input_alphabet,
                         [](std::span<const Symbol>) { return Symbol{0}; });
  }

  /// The coordinate partition itself (radius 0, identity code).
  static SlidingBlockPartition coordinate(Scope scope, unsigned alphabet) {
    return from_function(alphabet, 0, scope, alphabet,
                         [](std::span<const Symbol> w) { return w[0]; });
  }

  void validate() const {
    if (parts < 1) throw Error("partition must have at least one part");
    if (input_alphabet < 1) throw Error("partition input alphabet is empty");
    if (table.size() != table_size())
      throw Error("partition code table has wrong size");
    if (fill >= input_alphabet) throw Error("fill symbol outside alphabet");
    for (Symbol v : table)
      if (v >= parts) throw Error("partition code value outside [0, parts)");
  }

  Symbol code(std::span<const Symbol> window) const {
    std::size_t idx = 0;
    for (Symbol s : window) idx = idx * input_alphabet + s;
    return table[idx];
  }

  friend bool operator==(const SlidingBlockPartition&,
                         const SlidingBlockPartition&) = default;
};

/// Realizes the partition along the orbit. Window positions that fall
/// outside the orbit read the fill symbol.
inline SymbolTrack evaluate(const SlidingBlockPartition& p, const Orbit& orbit) {
  if (scoped_alphabet(orbit, p.scope) != p.input_alphabet)
    throw Error("partition input alphabet does not match orbit scope");
  const auto stream = scoped_stream(orbit, p.scope);
  const std::size_t n = stream.size();
  const auto r = static_cast<std::ptrdiff_t>(p.radius);
  SymbolTrack out{std::vector<Symbol>(n), p.parts};
  Word window(p.window());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::ptrdiff_t d = -r; d <= r; ++d) {
      const auto j = static_cast<std::ptrdiff_t>(i) + d;
      window[static_cast<std::size_t>(d + r)] =
          (j < 0 || j >= static_cast<std::ptrdiff_t>(n))
              ? p.fill
              : stream[static_cast<std::size_t>(j)];
    }
    out.values[i] = p.code(window);
  }
  return out;
}

/// |P triangle Q|: fraction of positions where the tracks disagree.
inline double partition_distance(const SymbolTrack& p, const SymbolTrack& q) {
  if (p.size() != q.size())
    throw Error("partition_distance: track lengths differ");
  if (p.size() == 0) return 0.0;
  std::size_t diff = 0;
  for (std::size_t i = 0; i < p.size(); ++i) diff += p[i] != q[i];
  return static_cast<double>(diff) / static_cast<double>(p.size());
}

namespace detail {
inline double block_entropy(std::span<const Symbol> v, unsigned parts,
                            std::size_t k, std::size_t windows) {
  if (k == 0) return 0.0;
  std::size_t size = 1;
  for (std::size_t i = 0; i < k; ++i) size *= parts;
  std::vector<std::uint32_t> counts(size, 0);
  std::size_t idx = 0, mod = size / parts;
  for (std::size_t i = 0; i < k - 1; ++i) idx = idx * parts + v[i];
  for (std::size_t i = 0; i < windows; ++i) {
    idx = (idx % mod) * parts + v[i + k - 1];
    ++counts[idx];
  }
  double h = 0.0;
  const auto total = static_cast<double>(windows);
  for (auto c : counts)
    if (c) h -= (c / total) * std::log2(c / total);
  return h;
}
}  // namespace detail

/// H(blocks of length k+1) - H(blocks of length k) from empirical block
/// frequencies over the same window count. Throws when parts^(k+1) exceeds
/// the table cap.
inline double empirical_block_entropy(const SymbolTrack& track, std::size_t k,
                                      std::size_t table_cap = std::size_t{1}
                                                              << 24) {
  const unsigned parts = std::max(1u, track.parts);
  double size = 1.0;
  for (std::size_t i = 0; i <= k; ++i) size *= parts;
  if (size > static_cast<double>(table_cap))
    throw Error("empirical_block_entropy: block table exceeds memory cap");
  if (track.size() <= k) throw Error("empirical_block_entropy: track too short");
  const std::size_t windows = track.size() - k;
  return detail::block_entropy(track.values, parts, k + 1, windows) -
         detail::block_entropy(track.values, parts, k, windows);
}

inline std::size_t longest_zero_run(std::span<const Symbol> v) {
  std::size_t best = 0, run = 0;
  for (Symbol s : v) {
    run = s == 0 ? run + 1 : 0;
    best = std::max(best, run);
  }
  return best;
}

/// Longest zero run that is followed by a nonzero symbol. A run reaching
/// the end of the track is ignored: nothing after it can be mistaken for a
/// block start.
inline std::size_t longest_closed_zero_run(std::span<const Symbol> v) {
  std::size_t best = 0, run = 0;
  for (Symbol s : v) {
    if (s == 0) {
      ++run;
    } else {
      best = std::max(best, run);
      run = 0;
    }
  }
  return best;
}

/// True iff no run of `ell` consecutive zeros occurs.
inline bool is_admissible(std::span<const Symbol> v, std::size_t ell) {
  if (ell < 1) throw Error("is_admissible: ell must be >= 1");
  return longest_zero_run(v) < ell;
}

inline bool is_admissible(const SymbolTrack& t, std::size_t ell) {
  return is_admissible(std::span<const Symbol>(t.values), ell);
}

}  // namespace swgen
