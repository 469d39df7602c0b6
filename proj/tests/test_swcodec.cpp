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

#include "swgen/swcodec.hpp"

namespace swgen {
namespace {

double h2(double p) { return -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

PairParams small_params() {
  PairParams p;
  p.M_S = p.M_L = 1000;
  p.seed = 31;
  return p;
}

// Erasures and wrong symbols counted directly against the truth.
std::size_t failed_positions(const DecodeResult& d, const Orbit& o) {
  std::size_t bad = 0;
  for (std::size_t i = 0; i < o.size(); ++i)
    bad += d.x[i] != o.x[i] || d.y[i] != o.y[i];
  return bad;
}

TEST(FBound, Values) {
  EXPECT_EQ(f_bound(0, 0, 0.1, 1.5, 2, 2, 2, 2), 0.0);
  const double oracle = 2 * (2 * h2(0.1) + 0.1 + 0.1) / (2 - 0.1 - 1.5);
  EXPECT_NEAR(f_bound(0.1, 0.1, 0.1, 1.5, 2, 2, 2, 2), oracle, 1e-12);
  EXPECT_NEAR(oracle, 5.69, 0.01);
  EXPECT_THROW(f_bound(0.1, 0.1, 0.5, 1.5, 2, 2, 2, 2), Error);
  EXPECT_THROW(f_bound(0.1, 0.1, 0.6, 1.5, 2, 2, 2, 2), Error);
}

TEST(FBound, TendsToZero) {
  double prev = f_bound(0.2, 0.2, 0.1, 1.5, 2, 2, 2, 2);
  for (double e = 0.1; e > 1e-7; e /= 10) {
    const double f = f_bound(e, e, 0.1, 1.5, 2, 2, 2, 2);
    EXPECT_LT(f, prev);
    prev = f;
  }
  EXPECT_LT(prev, 1e-4);
}

TEST(Params, Validation) {
  PairParams p;
  EXPECT_NO_THROW(p.validate());
  p.M_S = p.ell;
  EXPECT_THROW(p.validate(), Error);
  p = PairParams{};
  p.coverage_L = 1.0;
  EXPECT_THROW(p.validate(), Error);
  p = PairParams{};
  p.a = 0;
  EXPECT_THROW(p.validate(), Error);
}

TEST(Region, Warnings) {
  EXPECT_TRUE(region_warnings(rate_region(make_dsbs(0.11)), 2, 2, 0.005, 0.1).empty());
  const auto w = region_warnings(rate_region(make_independent_uniform()), 2, 2, 0.005, 0.1);
  EXPECT_EQ(w.size(), 3u);
}

TEST(BuildPair, PerfectlyCorrelated) {
  const auto src = make_identical_bits(0.5);
  const auto o = sample_orbit(src, 400000, 1);
  const auto c = build_pair(o, src, small_params());
  EXPECT_TRUE(c.warnings.empty());
  for (const auto& [k, f] : c.phi0.fibers) {
    if (f.empty()) continue;
    ASSERT_EQ(f.size(), 1u);
    EXPECT_EQ(f[0], k);
  }
  const auto d = decode(c, c.p_x, c.p_y);
  const auto r = reconstruction_report(d, o);
  EXPECT_EQ(r.disagreements, 0u);
  std::size_t erased = 0;
  for (std::size_t i = 0; i < o.size(); ++i) erased += d.x[i] == kAny || d.y[i] == kAny;
  EXPECT_EQ(r.erasures, erased);
  EXPECT_DOUBLE_EQ(r.error_frac, double(erased) / o.size());
  EXPECT_GE(r.off_tower + r.phi5_failed + r.psi_failed, r.erasures + r.disagreements);
  EXPECT_LE(r.error_frac, 0.05);
}

TEST(BuildPair, IndependentBitsWarn) {
  const auto src = make_independent_uniform();
  const auto o = sample_orbit(src, 200000, 2);
  const auto c = build_pair(o, src, small_params());
  EXPECT_FALSE(c.warnings.empty());
}

TEST(BuildPair, TooShortOrbit) {
  const auto src = make_dsbs(0.11);
  EXPECT_THROW(build_pair(sample_orbit(src, 20000, 2), src, small_params()), Error);
}

TEST(Decode, AllZeroTracksEraseEverything) {
  const auto src = make_dsbs(0.11);
  const auto o = sample_orbit(src, 200000, 3);
  const auto c = build_pair(o, src, small_params());
  const SymbolTrack zx{std::vector<Symbol>(o.size(), 0), 2}, zy = zx;
  const auto r = reconstruction_report(decode(c, zx, zy), o);
  EXPECT_EQ(r.erasures, o.size());
  EXPECT_EQ(r.error_frac, 1.0);
}

TEST(Decode, PurityAndHonesty) {
  const auto src = make_dsbs(0.11);
  auto o = sample_orbit(src, 300000, 4);
  const auto c = build_pair(o, src, small_params());
  const auto d1 = decode(c, c.p_x, c.p_y);
  Rng rng(5);
  for (auto& v : o.y) v = static_cast<Symbol>(rng.below(2));
  const auto d2 = decode(c, c.p_x, c.p_y);
  EXPECT_EQ(d1.x, d2.x);
  EXPECT_EQ(d1.y, d2.y);
  const auto truth = sample_orbit(src, 300000, 4);
  const auto r = reconstruction_report(d1, truth);
  EXPECT_EQ(r.erasures + r.disagreements, failed_positions(d1, truth));
  EXPECT_LE(r.error_frac, 0.1);
  EXPECT_GE(r.error_frac, 0.0);
}

TEST(Decode, BasesRecoveredFromTracks) {
  const auto src = make_dsbs(0.11);
  const auto o = sample_orbit(src, 300000, 6);
  const auto c = build_pair(o, src, small_params());
  std::vector<std::size_t> s, l;
  for (auto b : c.tower_S->bases)
    if (b + c.tower_S->height <= o.size()) s.push_back(b);
  for (auto b : c.tower_L->bases)
    if (b + c.tower_L->height <= o.size()) l.push_back(b);
  EXPECT_EQ(recover_bases(c.p_y, c.params.ell), s);
  EXPECT_EQ(recover_bases(c.p_x, c.params.ell), l);
}

TEST(Scope, TracksDependOnTheirOwnCoordinate) {
  const auto src = make_dsbs(0.11);
  const auto o = sample_orbit(src, 200000, 7);
  const auto c = build_pair(o, src, small_params());
  Rng rng(8);
  auto ox = o, oy = o;
  for (auto& v : ox.y) v = static_cast<Symbol>(rng.below(2));
  for (auto& v : oy.x) v = static_cast<Symbol>(rng.below(2));
  EXPECT_EQ(encode(c, ox).first, c.p_x);
  EXPECT_EQ(encode(c, oy).second, c.p_y);
  EXPECT_EQ(build_pair(ox, src, small_params()).p_x, c.p_x);
  EXPECT_EQ(build_pair(oy, src, small_params()).p_y, c.p_y);
}

TEST(BuildPair, OneCellForY) {
  // X ~ Bernoulli(0.2), Y = X, b = 1: P_Y carries nothing and log b = 0 is
  // not above h(T|F_X) = 0, so y stays erased while x decodes.
  const auto src = make_identical_bits(0.2);
  const auto o = sample_orbit(src, 400000, 9);
  auto p = small_params();
  p.b = 1;
  const auto c = build_pair(o, src, p);
  EXPECT_FALSE(c.tower_S.has_value());
  EXPECT_EQ(c.p_y.values, std::vector<Symbol>(o.size(), 0));
  EXPECT_EQ(c.warnings.size(), 1u);
  const auto r = reconstruction_report(decode(c, c.p_x, c.p_y), o);
  EXPECT_LE(r.x_error_frac, 0.05);
  EXPECT_EQ(r.y_error_frac, 1.0);
}

TEST(TrainTest, HeldOutOrbit) {
  const auto src = make_dsbs(0.11);
  const auto train = sample_orbit(src, 300000, 10);
  const auto test = sample_orbit(src, 300000, 11);
  const auto row = run_cell(src, train, small_params(), &test);
  EXPECT_EQ(row.status, "ok");
  EXPECT_GT(row.error_frac, 0.5);  // names on a fresh orbit are unseen
}

TEST(Improve, DiagnosticMode) {
  const auto src = make_dsbs(0.11);
  const auto o = sample_orbit(src, 400000, 12);
  auto p = small_params();
  p.M_T = 5000;
  auto c = build_pair(o, src, p);
  const auto old = c.p_x;
  const auto r = improve_pair(c, o, 0.0);
  EXPECT_EQ(r.report.head, 0u);
  EXPECT_LE(r.report.distance, 1.0 - r.report.coverage_T);
  EXPECT_EQ(partition_distance(r.p_x, old), r.report.distance);
}

TEST(Improve, DistanceBoundAndTwoRounds) {
  const auto src = make_dsbs(0.11);
  const auto o = sample_orbit(src, 1000000, 13);
  auto p = small_params();
  p.M_T = 10000;
  auto c = build_pair(o, src, p);
  const double f1 = f_bound(0.01, 0.01, p.eps0, c.region.h, 2, 2, 2, 2);
  const auto before = c.p_x;
  const auto r1 = improve_pair(c, o, f1);
  EXPECT_LE(partition_distance(r1.p_x, before), r1.report.bound);
  EXPECT_NEAR(r1.report.bound,
              f1 + 2.0 * r1.report.ell_r / p.M_T + (1 - r1.report.coverage_T), 1e-12);
  EXPECT_LE(r1.report.error_after, r1.report.error_before + 0.02);
  const double f2 = f_bound(0.005, 0.005, p.eps0, c.region.h, 2, 2, 2, 2);
  const auto r2 = improve_pair(c, o, f2);
  EXPECT_LE(r2.report.distance, r2.report.bound);
  EXPECT_LT(f2, f1);
  EXPECT_THROW(encode(c, o), Error);
}

TEST(Improve, ZoneOverflow) {
  const auto src = make_dsbs(0.11);
  const auto o = sample_orbit(src, 400000, 14);
  auto p = small_params();
  p.M_T = 5000;
  auto c = build_pair(o, src, p);
  EXPECT_THROW(improve_pair(c, o, 1.0), Error);
}

TEST(Sweep, MonotoneAlongGrid) {
  const auto src = make_dsbs(0.11);
  const auto o = sample_orbit(src, 400000, 15);
  const std::vector<SweepCell> grid{{1, 2}, {2, 2}, {3, 2}, {2, 1}, {2, 3}};
  const auto rows = rate_region_experiment(src, o, grid, small_params(), 3);
  ASSERT_EQ(rows.size(), grid.size());
  for (const auto& r : rows) EXPECT_EQ(r.status, "ok") << r.a << "," << r.b;
  // Along a for b = 2 and along b for a = 2; 3 sigma of a binomial over
  // the orbit is far below the 0.01 slack.
  EXPECT_GE(rows[0].error_frac + 0.01, rows[1].error_frac);
  EXPECT_GE(rows[1].error_frac + 0.01, rows[2].error_frac);
  EXPECT_GE(rows[3].error_frac + 0.01, rows[1].error_frac);
  EXPECT_GE(rows[1].error_frac + 0.01, rows[4].error_frac);
  EXPECT_GT(rows[0].error_frac, 0.25);  // a = 1 is outside the region
  const auto again = rate_region_experiment(src, o, grid, small_params(), 1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto a = rows[i], b = again[i];
    a.runtime_ms = b.runtime_ms = 0;
    EXPECT_EQ(csv_line(a), csv_line(b));
  }
}

TEST(Csv, Formatting) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(1.0 / 3), "0.333333333");
  EXPECT_EQ(format_number(1234567890.0), "1.23456789e+09");
  ExperimentRow r;
  r.source_kind = "iid-pair";
  r.status = "error: a, b";
  const auto line = csv_line(r);
  EXPECT_EQ(std::count(line.begin(), line.end(), ','), 18);
  EXPECT_EQ(csv_header().substr(0, 24), "source_kind,x_alphabet,y");
  EXPECT_NE(line.find("error: a; b"), std::string::npos);
}

}  // namespace
}  // namespace swgen
