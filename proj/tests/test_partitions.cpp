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

#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "swgen/partitions.hpp"

namespace swgen {
namespace {

Orbit make_orbit(std::vector<Symbol> x, std::vector<Symbol> y, unsigned kx = 2,
                 unsigned ky = 2) {
  Orbit o;
  o.x_alphabet = kx;
  o.y_alphabet = ky;
  o.x = std::move(x);
  o.y = std::move(y);
  return o;
}

SymbolTrack random_track(std::size_t n, unsigned parts, std::uint64_t seed) {
  Rng rng(seed);
  SymbolTrack t{std::vector<Symbol>(n), parts};
  for (auto& v : t.values) v = static_cast<Symbol>(rng.below(parts));
  return t;
}

// Plug-in conditional block entropy computed with a map of strings.
double naive_block_entropy(const SymbolTrack& t, std::size_t k) {
  auto h = [&](std::size_t len) {
    if (len == 0) return 0.0;
    std::map<std::vector<Symbol>, double> counts;
    const std::size_t windows = t.size() - k;
    for (std::size_t i = 0; i < windows; ++i)
      counts[std::vector<Symbol>(t.values.begin() + i, t.values.begin() + i + len)] += 1;
    double s = 0;
    for (const auto& [w, c] : counts) s -= c / windows * std::log2(c / windows);
    return s;
  };
  return h(k + 1) - h(k);
}

TEST(Evaluate, CoordinatePartitionIsTheTrack) {
  const auto o = make_orbit({0, 1, 1, 0, 1, 0}, {1, 1, 0, 0, 1, 1});
  const auto p = SlidingBlockPartition::coordinate(Scope::x_only, 2);
  EXPECT_EQ(evaluate(p, o).values, o.x);
  EXPECT_EQ(evaluate(SlidingBlockPartition::coordinate(Scope::y_only, 2), o).values, o.y);
}

TEST(Evaluate, ConstantPartitionIsZero) {
  const auto o = make_orbit({0, 1, 1, 0, 1}, {1, 1, 0, 0, 1});
  const auto t = evaluate(SlidingBlockPartition::constant(Scope::joint, 4), o);
  EXPECT_EQ(t.values, std::vector<Symbol>(5, 0));
  EXPECT_EQ(t.parts, 1u);
}

TEST(Evaluate, MajorityOfThree) {
  const auto o = make_orbit({0, 1, 1, 0, 1}, {0, 0, 0, 0, 0});
  const auto p = SlidingBlockPartition::from_function(
      2, 1, Scope::x_only, 2, [](std::span<const Symbol> w) {
        return static_cast<Symbol>(w[0] + w[1] + w[2] >= 2);
      });
  EXPECT_EQ(evaluate(p, o).values, (std::vector<Symbol>{0, 1, 1, 1, 0}));
}

TEST(Evaluate, ShiftEquivariance) {
  Rng rng(3);
  const auto p = SlidingBlockPartition::from_function(
      3, 2, Scope::x_only, 2, [](std::span<const Symbol> w) {
        return static_cast<Symbol>((w[0] + 2 * w[2] + w[4]) % 3);
      });
  std::vector<Symbol> x(200), y(200, 0);
  for (auto& v : x) v = static_cast<Symbol>(rng.below(2));
  const auto full = evaluate(p, make_orbit(x, y));
  std::vector<Symbol> xs(x.begin() + 17, x.end()), ys(y.begin() + 17, y.end());
  const auto shifted = evaluate(p, make_orbit(xs, ys));
  for (std::size_t i = 2; i + 2 < shifted.size(); ++i)
    EXPECT_EQ(shifted[i], full[i + 17]);
}

TEST(Evaluate, ScopeInvariance) {
  Rng rng(21);
  const auto p = SlidingBlockPartition::from_function(
      2, 1, Scope::x_only, 3, [](std::span<const Symbol> w) {
        return static_cast<Symbol>((w[0] * w[2] + w[1]) % 2);
      });
  std::vector<Symbol> x(500), y(500);
  for (auto& v : x) v = static_cast<Symbol>(rng.below(3));
  for (auto& v : y) v = static_cast<Symbol>(rng.below(2));
  const auto base = evaluate(p, make_orbit(x, y, 3, 2));
  for (int trial = 0; trial < 20; ++trial) {
    for (auto& v : y) v = static_cast<Symbol>(rng.below(2));
    EXPECT_EQ(evaluate(p, make_orbit(x, y, 3, 2)), base);
  }
}

TEST(Evaluate, RejectsBadTables) {
  SlidingBlockPartition p{2, 0, Scope::x_only, 2, {0, 2}, 0};
  EXPECT_THROW(p.validate(), Error);
  p.table = {0};
  EXPECT_THROW(p.validate(), Error);
  const auto o = make_orbit({0, 1}, {0, 1}, 2, 2);
  EXPECT_THROW(evaluate(SlidingBlockPartition::coordinate(Scope::joint, 2), o), Error);
}

TEST(Distance, Examples) {
  const auto t = random_track(1000, 2, 1);
  EXPECT_EQ(partition_distance(t, t), 0.0);
  SymbolTrack comp = t;
  for (auto& v : comp.values) v = 1 - v;
  EXPECT_EQ(partition_distance(t, comp), 1.0);
  SymbolTrack flipped = t;
  for (std::size_t i = 0; i < 1000; i += 10) flipped[i] = 1 - flipped[i];
  EXPECT_DOUBLE_EQ(partition_distance(t, flipped), 0.1);
  EXPECT_THROW(partition_distance(t, random_track(999, 2, 1)), Error);
}

TEST(Distance, SymmetryAndTriangle) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto p = random_track(300, 3, 3 * s), q = random_track(300, 3, 3 * s + 1),
               r = random_track(300, 3, 3 * s + 2);
    EXPECT_EQ(partition_distance(p, q), partition_distance(q, p));
    EXPECT_LE(partition_distance(p, r),
              partition_distance(p, q) + partition_distance(q, r) + 1e-15);
  }
}

TEST(BlockEntropy, Examples) {
  EXPECT_EQ(empirical_block_entropy(SymbolTrack{std::vector<Symbol>(1000, 0), 2}, 3), 0.0);
  SymbolTrack alt{std::vector<Symbol>(1000), 2};
  for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = i % 2;
  EXPECT_NEAR(empirical_block_entropy(alt, 2), 0.0, 1e-12);
  EXPECT_NEAR(empirical_block_entropy(random_track(1000000, 2, 5), 8), 1.0, 0.01);
}

TEST(BlockEntropy, UniformOverKParts) {
  for (unsigned k : {3u, 4u}) {
    EXPECT_NEAR(empirical_block_entropy(random_track(1000000, k, 10 + k), 2),
                std::log2(k), 0.02);
  }
}

TEST(BlockEntropy, MatchesNaiveCounter) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto t = random_track(2000, 3, 100 + s);
    for (std::size_t k : {0u, 1u, 3u})
      EXPECT_NEAR(empirical_block_entropy(t, k), naive_block_entropy(t, k), 1e-9);
  }
}

TEST(BlockEntropy, MemoryCap) {
  EXPECT_THROW(empirical_block_entropy(random_track(100, 4, 1), 20), Error);
}

TEST(Admissible, Examples) {
  EXPECT_TRUE(is_admissible(std::vector<Symbol>(10, 1), 2));
  EXPECT_FALSE(is_admissible(std::vector<Symbol>{1, 0, 0, 1}, 2));
  const std::vector<Symbol> t{1, 0, 1, 0, 0, 1};
  EXPECT_TRUE(is_admissible(t, 3));
  EXPECT_FALSE(is_admissible(t, 2));
  EXPECT_THROW(is_admissible(t, 0), Error);
}

TEST(Admissible, ClosedRunIgnoresTrailingZeros) {
  const std::vector<Symbol> t{1, 0, 0, 1, 0, 0, 0, 0};
  EXPECT_EQ(longest_zero_run(t), 4u);
  EXPECT_EQ(longest_closed_zero_run(t), 2u);
}

}  // namespace
}  // namespace swgen
