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

#include "swgen/sources.hpp"

namespace swgen {
namespace {

double h2(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

// Pair chain of two independent binary Markov chains with the given flip
// probabilities; state index x * 2 + y.
Matrix independent_chains(double fx, double fy) {
  Matrix t(4, std::vector<double>(4));
  for (int s = 0; s < 4; ++s)
    for (int u = 0; u < 4; ++u) {
      const double px = (s / 2 == u / 2) ? 1 - fx : fx;
      const double py = (s % 2 == u % 2) ? 1 - fy : fy;
      t[s][u] = px * py;
    }
  return t;
}

std::vector<double> power_iteration(const Matrix& p) {
  std::vector<double> pi(p.size(), 1.0 / p.size()), next(p.size());
  for (int it = 0; it < 20000; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = 0; j < p.size(); ++j) next[j] += pi[i] * p[i][j];
    pi.swap(next);
  }
  return pi;
}

TEST(Stationary, SymmetricChain) {
  const auto pi = stationary_distribution({{0.9, 0.1}, {0.1, 0.9}});
  EXPECT_NEAR(pi[0], 0.5, 1e-12);
  EXPECT_NEAR(pi[1], 0.5, 1e-12);
}

TEST(Stationary, ReducibleChainThrows) {
  EXPECT_THROW(stationary_distribution({{1.0, 0.0}, {0.0, 1.0}}), Error);
}

TEST(Stationary, ThirdTwoThirds) {
  const Matrix p{{0.5, 0.5}, {0.25, 0.75}};
  const auto pi = stationary_distribution(p);
  const auto oracle = power_iteration(p);
  EXPECT_NEAR(oracle[0], 1.0 / 3, 1e-12);
  EXPECT_NEAR(pi[0], oracle[0], 1e-10);
  EXPECT_NEAR(pi[1], oracle[1], 1e-10);
}

TEST(Stationary, FixedPointOnRandomChains) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng.below(6);
    Matrix p(n, std::vector<double>(n));
    for (auto& row : p) {
      double s = 0;
      for (auto& v : row) s += v = 0.05 + rng.uniform();
      for (auto& v : row) v /= s;
    }
    const auto pi = stationary_distribution(p);
    double total = 0;
    for (std::size_t j = 0; j < n; ++j) {
      double v = 0;
      for (std::size_t i = 0; i < n; ++i) v += pi[i] * p[i][j];
      EXPECT_NEAR(v, pi[j], 1e-10);
      EXPECT_GE(pi[j], 0.0);
      total += pi[j];
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(JointSourceTest, RejectsBadTables) {
  EXPECT_THROW(JointSource::iid_pair(2, 2, {{0.5, 0.5}, {0.5, 0.5}}), Error);
  EXPECT_THROW(JointSource::iid_pair(1, 2, {{0.5, 0.5}}), Error);
  EXPECT_THROW(JointSource::iid_pair(2, 2, {{0.5, 0.5}}), Error);
  // Period 2: alternates between the two pair-state groups.
  Matrix flip(4, std::vector<double>(4, 0.0));
  flip[0][3] = flip[3][0] = flip[1][2] = flip[2][1] = 1.0;
  EXPECT_THROW(JointSource::joint_markov(2, 2, flip), Error);
}

TEST(RateRegionTest, PerfectlyCorrelated) {
  const auto r = rate_region(make_identical_bits(0.5));
  EXPECT_NEAR(r.h, 1.0, 1e-12);
  EXPECT_NEAR(r.h_given_x, 0.0, 1e-12);
  EXPECT_NEAR(r.h_given_y, 0.0, 1e-12);
  EXPECT_EQ(r.method, RateMethod::exact);
}

TEST(RateRegionTest, Independent) {
  const auto r = rate_region(make_independent_uniform());
  EXPECT_NEAR(r.h, 2.0, 1e-12);
  EXPECT_NEAR(r.h_given_x, 1.0, 1e-12);
  EXPECT_NEAR(r.h_given_y, 1.0, 1e-12);
}

TEST(RateRegionTest, Dsbs) {
  const auto r = rate_region(make_dsbs(0.11));
  EXPECT_NEAR(r.h, 1.0 + h2(0.11), 1e-12);
  EXPECT_NEAR(r.h, 1.4999, 1e-4);
  EXPECT_NEAR(r.h_given_x, h2(0.11), 1e-12);
  EXPECT_NEAR(r.h_given_y, h2(0.11), 1e-12);
}

TEST(RateRegionTest, ChainRuleAndBoundsOnRandomTables) {
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const unsigned kx = 2 + rng.below(3), ky = 2 + rng.below(3);
    Matrix j(kx, std::vector<double>(ky));
    double s = 0;
    for (auto& row : j)
      for (auto& v : row) s += v = rng.uniform();
    for (auto& row : j)
      for (auto& v : row) v /= s;
    const auto src = JointSource::iid_pair(kx, ky, j);
    const auto r = rate_region(src);
    double hx = 0;
    for (double p : src.marginal_x()) hx -= p * std::log2(p);
    EXPECT_NEAR(r.h, hx + r.h_given_x, 1e-12);
    EXPECT_GE(r.h_given_x, 0.0);
    EXPECT_LE(r.h_given_x, r.h);
    EXPECT_GE(r.h_given_y, 0.0);
    EXPECT_LE(r.h_given_y, r.h);
    EXPECT_LE(r.h, r.h_given_x + std::log2(kx) + 1e-12);
  }
}

TEST(RateRegionTest, MarkovIndependentChains) {
  const auto src = JointSource::joint_markov(2, 2, independent_chains(0.1, 0.2));
  const auto r = rate_region(src);
  EXPECT_EQ(r.method, RateMethod::estimated);
  EXPECT_GT(r.block_length, 0u);
  EXPECT_NEAR(r.h, h2(0.1) + h2(0.2), 1e-12);
  EXPECT_NEAR(r.h_given_x, h2(0.2), 1e-9);
  EXPECT_NEAR(r.h_given_y, h2(0.1), 1e-9);
}

TEST(RateRegionTest, MarkovEstimatesNonincreasing) {
  Rng rng(9);
  Matrix t(4, std::vector<double>(4));
  for (auto& row : t) {
    double s = 0;
    for (auto& v : row) s += v = 0.1 + rng.uniform();
    for (auto& v : row) v /= s;
  }
  const auto src = JointSource::joint_markov(2, 2, t);
  for (int coord : {0, 1}) {
    const auto rates = marginal_rate_estimates(src, coord, 10);
    for (std::size_t k = 1; k < rates.size(); ++k)
      EXPECT_LE(rates[k], rates[k - 1] + 1e-12) << "coordinate " << coord;
  }
  const auto r = rate_region(src);
  EXPECT_GE(r.h_given_x, 0.0);
  EXPECT_LE(r.h_given_x, r.h);
}

TEST(LogProb, IidAndWildcards) {
  const auto src = make_dsbs(0.11);
  const Word x{0, 1, kAny}, y{0, 0, 1};
  EXPECT_NEAR(log2_prob(src, x, y),
              std::log2(0.445) + std::log2(0.055) + std::log2(0.5), 1e-12);
}

TEST(LogProb, MarkovMatchesPathSum) {
  const Matrix t = independent_chains(0.1, 0.3);
  const auto src = JointSource::joint_markov(2, 2, t);
  const Word x{0, 1, 1}, y{1, 1, 0};
  const double p = 0.25 * t[1][3] * t[3][2];
  EXPECT_NEAR(log2_prob(src, x, y), std::log2(p), 1e-12);
  // Marginal of x alone: the x-chain path probability.
  const Word any(3, kAny);
  EXPECT_NEAR(log2_prob(src, x, any), std::log2(0.5 * 0.1 * 0.9), 1e-12);
}

TEST(Orbits, SingleSymbolAndDeterminism) {
  const auto src = make_dsbs(0.11);
  EXPECT_EQ(sample_orbit(src, 1, 3).size(), 1u);
  EXPECT_THROW(sample_orbit(src, 0, 3), Error);
  EXPECT_EQ(sample_orbit(src, 5000, 42), sample_orbit(src, 5000, 42));
  EXPECT_NE(sample_orbit(src, 5000, 42).x, sample_orbit(src, 5000, 43).x);
}

TEST(Orbits, CoupledTracksAgree) {
  const auto o = sample_orbit(make_identical_bits(0.3), 10000, 1);
  EXPECT_EQ(o.x, o.y);
}

TEST(Orbits, DsbsCrossover) {
  const auto o = sample_orbit(make_dsbs(0.11), 1000000, 2026);
  std::size_t diff = 0, ones = 0;
  for (std::size_t i = 0; i < o.size(); ++i) {
    diff += o.x[i] != o.y[i];
    ones += o.x[i];
  }
  EXPECT_NEAR(diff / 1e6, 0.11, 0.002);
  EXPECT_NEAR(ones / 1e6, 0.5, 0.002);
}

TEST(Orbits, MarkovTransitionsMatch) {
  const auto o =
      sample_orbit(JointSource::joint_markov(2, 2, independent_chains(0.1, 0.2)),
                   500000, 8);
  std::size_t fx = 0, fy = 0;
  for (std::size_t i = 1; i < o.size(); ++i) {
    fx += o.x[i] != o.x[i - 1];
    fy += o.y[i] != o.y[i - 1];
  }
  EXPECT_NEAR(fx / 499999.0, 0.1, 0.003);
  EXPECT_NEAR(fy / 499999.0, 0.2, 0.003);
}

}  // namespace
}  // namespace swgen
