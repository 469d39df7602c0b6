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

// Rohlin towers along an orbit. A tower is a list of base positions whose
// consecutive gaps are at least the height M, so the blocks
// [base, base + M) are pairwise disjoint.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "swgen/common.hpp"
#include "swgen/partitions.hpp"
#include "swgen/rng.hpp"
#include "swgen/sources.hpp"

namespace swgen {

/// Seeded marker rule: position i is a candidate base when a hash of the
/// scoped window [i, i + window) falls below density; candidates are then
/// kept greedily left to right whenever they sit >= height after the last
/// kept base.
struct MarkerRule {
  Scope scope = Scope::x_only;
  std::size_t height = 1;
  std::size_t window = 1;
  double density = 1.0;
  std::uint64_t seed = 0;
};

struct Tower {
  std::vector<std::size_t> bases;
  std::size_t height = 1;
  Scope scope = Scope::joint;
  std::size_t orbit_length = 0;
  double coverage = 0.0;
  MarkerRule rule;  // meaningful only for towers built by a marker rule

  /// Bases whose block lies fully inside the orbit.
  std::size_t complete_blocks() const {
    std::size_t c = 0;
    for (auto b : bases) c += b + height <= orbit_length;
    return c;
  }

  /// Tower with explicitly given bases. Throws if a gap is below the height.
  static Tower from_bases(std::vector<std::size_t> bases, std::size_t height,
                          Scope scope, std::size_t orbit_length);
};

/// Fraction of the orbit covered by complete blocks. A trailing block that
/// runs past the orbit end counts as uncovered.
inline double coverage(const Tower& t, std::size_t n) {
  if (n == 0) return 0.0;
  std::size_t complete = 0;
  for (auto b : t.bases) complete += b + t.height <= n;
  return static_cast<double>(complete * t.height) / static_cast<double>(n);
}

inline Tower Tower::from_bases(std::vector<std::size_t> bases,
                               std::size_t height, Scope scope,
                               std::size_t orbit_length) {
  if (height < 1) throw Error("tower height must be >= 1");
  for (std::size_t i = 1; i < bases.size(); ++i) {
    if (bases[i] < bases[i - 1] + height)
      throw Error("tower bases closer than the tower height");
  }
  if (!bases.empty() && bases.back() >= orbit_length)
    throw Error("tower base outside the orbit");
  Tower t;
  t.bases = std::move(bases);
  t.height = height;
  t.scope = scope;
  t.orbit_length = orbit_length;
  t.coverage = swgen::coverage(t, orbit_length);
  t.rule.scope = scope;
  t.rule.height = height;
  return t;
}

class TowerCoverageError : public Error {
 public:
  TowerCoverageError(double achieved, double target)
      : Error("tower coverage " + std::to_string(achieved) +
              " below target " + std::to_string(target)),
        achieved_(achieved) {}
  double achieved() const { return achieved_; }

 private:
  double achieved_;
};

/// Applies a marker rule to the scoped stream of an orbit.
inline Tower apply_marker_rule(const Orbit& orbit, const MarkerRule& rule) {
  if (rule.height < 1) throw Error("tower height must be >= 1");
  if (rule.window < 1) throw Error("marker window must be >= 1");
  const auto stream = scoped_stream(orbit, rule.scope);
  const std::size_t n = stream.size();
  const double scaled = rule.density * 0x1.0p64;
  const std::uint64_t threshold =
      rule.density >= 1.0 ? ~std::uint64_t{0}
                          : static_cast<std::uint64_t>(scaled);
  std::vector<std::size_t> bases;
  std::size_t next_allowed = 0;
  for (std::size_t i = 0; i + rule.window <= n; ++i) {
    if (i < next_allowed) continue;
    const std::span<const Symbol> w(stream.data() + i, rule.window);
    if (rule.density >= 1.0 || hash_symbols(rule.seed, w) < threshold) {
      bases.push_back(i);
      next_allowed = i + rule.height;
    }
  }
  Tower t = Tower::from_bases(std::move(bases), rule.height, rule.scope, n);
  t.rule = rule;
  return t;
}

/// Builds a tower of the given height whose base positions depend only on
/// the scoped track. The marker density starts near the value that meets
/// target_coverage for random candidates and doubles until the target is met.
inline Tower build_tower(const Orbit& orbit, Scope scope, std::size_t height,
                         std::size_t marker_window, double target_coverage,
                         std::uint64_t seed, unsigned retry_cap = 32) {
  if (height < 1) throw Error("tower height must be >= 1");
  if (marker_window < 1) throw Error("marker window must be >= 1");
  MarkerRule rule{scope, height, marker_window, 1.0, seed};
  const double t = std::clamp(target_coverage, 0.0, 0.999999);
  // Expected coverage of a greedy pass is about M / (M + 1/density).
  rule.density =
      std::min(1.0, t / (static_cast<double>(height) * (1.0 - t)) * 0.5);
  double achieved = 0.0;
  for (unsigned attempt = 0; attempt < retry_cap; ++attempt) {
    Tower tower = apply_marker_rule(orbit, rule);
    achieved = tower.coverage;
    if (achieved >= target_coverage) return tower;
    if (rule.density >= 1.0) break;
    rule.density = std::min(1.0, rule.density * 1.5);
  }
  throw TowerCoverageError(achieved, target_coverage);
}

using BaseName = std::pair<std::size_t, Word>;

struct TowerNames {
  std::vector<BaseName> names;
  std::size_t dropped = 0;  // bases whose block runs past the track end
};

/// The (tower, P)-name (P(z), ..., P(T^{M-1} z)) at every complete block.
inline TowerNames names_along_tower(const Tower& tower,
                                    std::span<const Symbol> track) {
  TowerNames out;
  for (auto b : tower.bases) {
    if (b + tower.height > track.size()) {
      ++out.dropped;
      continue;
    }
    out.names.emplace_back(b, slice(track, b, tower.height));
  }
  return out;
}

inline TowerNames names_along_tower(const Tower& tower,
                                    const SymbolTrack& track) {
  return names_along_tower(tower, std::span<const Symbol>(track.values));
}

}  // namespace swgen
