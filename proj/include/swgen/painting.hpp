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

// Painting codewords along tower blocks, repainting block heads, and
// recovering the tower bases from the painted track alone.
//
// Painted block layout (height M):   [codeword (M - ell)] [ell zeros]
// Repainted block layout:            [new codeword (head)] [old track] [2 ell zeros]
// Everything outside complete blocks is 0.

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "swgen/codebooks.hpp"
#include "swgen/common.hpp"
#include "swgen/partitions.hpp"
#include "swgen/towers.hpp"

namespace swgen {

namespace detail {
inline void check_names_match(const Tower& tower,
                              const std::vector<BaseName>& names) {
  std::size_t k = 0;
  for (auto b : tower.bases) {
    if (b + tower.height > tower.orbit_length) continue;
    if (k >= names.size() || names[k].first != b)
      throw Error("painting: names do not match the tower's complete blocks");
    ++k;
  }
  if (k != names.size())
    throw Error("painting: names do not match the tower's complete blocks");
}
}  // namespace detail

/// Writes one codeword of length M - ell at the start of every complete
/// block. `codewords` pairs each complete base (in order) with its word.
inline SymbolTrack paint_codewords(const Tower& tower,
                                   const std::vector<BaseName>& codewords,
                                   std::size_t ell, unsigned parts) {
  if (ell >= tower.height) throw Error("paint: ell must be below the height");
  detail::check_names_match(tower, codewords);
  SymbolTrack out{std::vector<Symbol>(tower.orbit_length, 0), parts};
  const std::size_t len = tower.height - ell;
  for (const auto& [base, word] : codewords) {
    if (word.size() != len) throw Error("paint: codeword length != M - ell");
    for (std::size_t i = 0; i < len; ++i) {
      if (word[i] >= parts) throw Error("paint: codeword symbol out of range");
      out.values[base + i] = word[i];
    }
  }
  return out;
}

inline SymbolTrack paint(const Tower& tower, const std::vector<BaseName>& names,
                         const PaintingData& pd, std::size_t ell) {
  if (pd.codebook().length() + ell != tower.height)
    throw Error("paint: codebook length must equal M - ell");
  std::vector<BaseName> words;
  words.reserve(names.size());
  for (const auto& [base, name] : names) words.emplace_back(base, pd.apply(name));
  return paint_codewords(tower, words, ell, pd.codebook().alphabet());
}

inline SymbolTrack paint(const Tower& tower, const TowerNames& names,
                         const PaintingData& pd, std::size_t ell) {
  return paint(tower, names.names, pd, ell);
}

/// Positions i with track[i] == 1 preceded by `zero_run` zeros; positions
/// before the start of the track count as zeros.
inline std::vector<std::size_t> detect_bases(std::span<const Symbol> track,
                                             std::size_t zero_run) {
  std::vector<std::size_t> bases;
  std::size_t run = zero_run;  // virtual zeros before position 0
  for (std::size_t i = 0; i < track.size(); ++i) {
    if (track[i] == 1 && run >= zero_run) bases.push_back(i);
    run = track[i] == 0 ? run + 1 : 0;
  }
  return bases;
}

inline std::vector<std::size_t> recover_bases(std::span<const Symbol> track,
                                              std::size_t ell) {
  return detect_bases(track, ell);
}

inline std::vector<std::size_t> recover_bases(const SymbolTrack& track,
                                              std::size_t ell) {
  return detect_bases(track.values, ell);
}

inline std::vector<std::size_t> recover_bases_repaint(
    std::span<const Symbol> track, std::size_t ell) {
  return detect_bases(track, 2 * ell);
}

inline std::vector<std::size_t> recover_bases_repaint(const SymbolTrack& track,
                                                      std::size_t ell) {
  return detect_bases(track.values, 2 * ell);
}

/// Integer zone boundaries of a repainted block: head [0, head),
/// copy [head, copy_end), zero tail [copy_end, M).
struct RepaintZones {
  std::size_t head = 0;
  std::size_t copy_end = 0;
};

inline RepaintZones repaint_zones(std::size_t height, double eps,
                                  std::size_t ell) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw Error("repaint: eps must be in [0,1]");
  const auto head = static_cast<std::size_t>(
      std::floor(eps * static_cast<double>(height) + 1e-9));
  if (head + 2 * ell > height)
    throw Error("repaint: head plus 2 ell tail exceeds the block height");
  return {head, height - 2 * ell};
}

/// Repaints the head of every complete block with the given codewords,
/// keeps `current` on the middle zone and zeroes the tail and everything
/// off the tower. The current track must have no run of ell zeros except
/// possibly one reaching the track end. With ell == 0 the check is skipped.
inline SymbolTrack repaint_codewords(const Tower& tower,
                                     const SymbolTrack& current,
                                     const std::vector<BaseName>& codewords,
                                     double eps, std::size_t ell,
                                     unsigned parts) {
  if (current.size() != tower.orbit_length)
    throw Error("repaint: track length differs from the orbit length");
  if (ell > 0 && longest_closed_zero_run(current.values) >= ell)
    throw Error("repaint: current track is not ell-admissible");
  const RepaintZones z = repaint_zones(tower.height, eps, ell);
  detail::check_names_match(tower, codewords);
  SymbolTrack out{std::vector<Symbol>(tower.orbit_length, 0),
                  std::max(parts, current.parts)};
  for (const auto& [base, word] : codewords) {
    if (word.size() != z.head) throw Error("repaint: head codeword length");
    for (std::size_t i = 0; i < z.head; ++i) out.values[base + i] = word[i];
    for (std::size_t i = z.head; i < z.copy_end; ++i)
      out.values[base + i] = current.values[base + i];
  }
  return out;
}

/// Repainting with seeded data. `pd` must produce codewords of length
/// floor(eps M); it is ignored when that length is 0.
inline SymbolTrack repaint(const Tower& tower, const SymbolTrack& current,
                           const std::vector<BaseName>& names,
                           const PaintingData* pd, double eps,
                           std::size_t ell) {
  const RepaintZones z = repaint_zones(tower.height, eps, ell);
  std::vector<BaseName> words;
  words.reserve(names.size());
  unsigned parts = current.parts;
  if (z.head > 0) {
    if (!pd) throw Error("repaint: painting data required for a nonempty head");
    if (pd->codebook().length() != z.head)
      throw Error("repaint: codebook length must equal floor(eps M)");
    parts = pd->codebook().alphabet();
  }
  for (const auto& [base, name] : names)
    words.emplace_back(base, z.head > 0 ? pd->apply(name) : Word{});
  return repaint_codewords(tower, current, words, eps, ell, parts);
}

inline SymbolTrack repaint(const Tower& tower, const SymbolTrack& current,
                           const TowerNames& names, const PaintingData& pd,
                           double eps, std::size_t ell) {
  return repaint(tower, current, names.names, &pd, eps, ell);
}

}  // namespace swgen
