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

// Experiment orchestration behind the `swgen` binary.
//
// Seed tree (all derived with derive_seed from the master seed):
//   orbit       training orbit
//   test-orbit  held-out orbit (--train-test)
//   codec       PairParams::seed, from which the towers and painting
//               data derive their own seeds
//   verify      verify suites
// Sweep cells reseed the codec with derive_seed(codec, "cell-<a>-<b>").

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "swgen/config.hpp"
#include "swgen/io.hpp"
#include "swgen/swcodec.hpp"
#include "swgen/verify.hpp"

namespace swgen {

/// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "SWGEN_OUT_DIR";

struct RunOptions {
  std::string out_dir;  // --out, highest precedence
  unsigned threads = 1;
  std::ostream* log = &std::cout;
};

struct SeedTree {
  std::uint64_t master = 0, orbit = 0, test_orbit = 0, codec = 0, verify = 0;
};

inline SeedTree seed_tree(std::uint64_t master) {
  return {master, derive_seed(master, "orbit"), derive_seed(master, "test-orbit"),
          derive_seed(master, "codec"), derive_seed(master, "verify")};
}

inline Json to_json(const SeedTree& s) {
  return {{"master", s.master},
          {"orbit", s.orbit},
          {"test_orbit", s.test_orbit},
          {"codec", s.codec},
          {"verify", s.verify}};
}

inline std::filesystem::path resolve_out_dir(const ExperimentConfig& c,
                                             const RunOptions& o) {
  if (!o.out_dir.empty()) return o.out_dir;
  if (!c.output_dir.empty()) return c.output_dir;
  if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
  return ".";
}

inline Json to_json(const RateRegion& r) {
  return {{"h", r.h},
          {"h_given_x", r.h_given_x},
          {"h_given_y", r.h_given_y},
          {"h_x", r.h_x()},
          {"h_y", r.h_y()},
          {"method", std::string(to_string(r.method))},
          {"block_length", r.block_length}};
}

inline Json to_json(const PairDiagnostics& d) {
  return {{"coverage_S", d.coverage_S},
          {"coverage_L", d.coverage_L},
          {"s_blocks", d.s_blocks},
          {"l_blocks", d.l_blocks},
          {"n_typical_frac", d.n_typical_frac},
          {"phi0_coverage", d.phi0_coverage},
          {"phi1_frac", d.phi1_frac},
          {"phi3_coverage", d.phi3_coverage},
          {"psi_singleton_frac", d.psi_singleton_frac},
          {"phi5_singleton_frac", d.phi5_singleton_frac},
          {"log2_count_f", d.log2_count_f},
          {"log2_count_g", d.log2_count_g},
          {"log2_phi4", d.log2_phi4},
          {"h_px", d.h_px},
          {"h_py", d.h_py}};
}

inline Json to_json(const ImproveReport& r) {
  return {{"fraction", r.fraction},       {"head", r.head},
          {"ell_r", r.ell_r},             {"height", r.height},
          {"coverage_T", r.coverage_T},   {"distance", r.distance},
          {"bound", r.bound},             {"error_before", r.error_before},
          {"error_after", r.error_after}, {"t_singleton_frac", r.t_singleton_frac},
          {"h_px", r.h_px}};
}

inline const std::vector<std::string>& improve_columns() {
  static const std::vector<std::string> cols{
      "round", "eps", "delta", "fraction", "head", "ell_r", "M_T",
      "coverage_T", "distance", "bound", "error_before", "error_after",
      "t_singleton_frac", "h_px"};
  return cols;
}

inline std::string improve_line(std::size_t k, const RoundSpec& s,
                                const ImproveReport& r) {
  auto num = [](double v) { return format_number(v); };
  return std::to_string(k) + "," + num(s.eps) + "," + num(s.delta) + "," +
         num(r.fraction) + "," + std::to_string(r.head) + "," +
         std::to_string(r.ell_r) + "," + std::to_string(r.height) + "," +
         num(r.coverage_T) + "," + num(r.distance) + "," + num(r.bound) + "," +
         num(r.error_before) + "," + num(r.error_after) + "," +
         num(r.t_singleton_frac) + "," + num(r.h_px);
}

inline std::vector<SweepCell> default_grid() {
  std::vector<SweepCell> g;
  for (unsigned a : {2u, 3u, 4u})
    for (unsigned b : {1u, 2u, 3u, 4u}) g.push_back({a, b});
  return g;
}

namespace detail {

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(p.string() + ": cannot open for writing");
  out << text;
  if (!out) throw Error(p.string() + ": write failed");
}

inline std::string rows_csv(const std::vector<ExperimentRow>& rows) {
  std::string s = csv_header() + "\n";
  for (const auto& r : rows) s += csv_line(r) + "\n";
  return s;
}

}  // namespace detail

/// Everything a run produces besides files: the exit status and the
/// manifest written next to the outputs.
struct RunResult {
  int status = 0;
  Json manifest;
};

inline RunResult run_region(const ExperimentConfig& c, const RunOptions& o) {
  const auto src = c.source.build();
  const auto r = rate_region(src);
  *o.log << "h=" << format_number(r.h) << " h_given_x=" << format_number(r.h_given_x)
         << " h_given_y=" << format_number(r.h_given_y) << " (" << to_string(r.method) << ")\n";
  RunResult res;
  res.manifest["region"] = to_json(r);
  return res;
}

inline RunResult run_simulate(const ExperimentConfig& c, const RunOptions& o,
                              const std::filesystem::path& dir) {
  if (c.train_test && !c.rounds.empty())
    throw ConfigError("config field 'rounds': improvement rounds need train mode");
  const SeedTree seeds = seed_tree(c.seed);
  const auto src = c.source.build();
  PairParams p = c.params;
  p.seed = seeds.codec;
  const Orbit train = sample_orbit(src, c.orbit_length, seeds.orbit);

  const auto t0 = std::chrono::steady_clock::now();
  ExperimentRow row = make_row(src, rate_region(src), p);
  RunResult res;
  PairCodec codec = build_pair(train, src, p);
  row.coverage_S = codec.diag.coverage_S;
  row.coverage_L = codec.diag.coverage_L;
  row.psi_singleton_frac = codec.diag.psi_singleton_frac;
  row.phi5_singleton_frac = codec.diag.phi5_singleton_frac;
  Orbit test;
  const Orbit* eval = &train;
  SymbolTrack px = codec.p_x, py = codec.p_y;
  if (c.train_test) {
    test = sample_orbit(src, c.orbit_length, seeds.test_orbit);
    eval = &test;
    std::tie(px, py) = encode(codec, test);
  }
  const DecodeResult decoded = decode(codec, px, py);
  const auto report = reconstruction_report(decoded, *eval);
  row.error_frac = report.error_frac;
  row.runtime_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
  detail::write_file(dir / "results.csv", detail::rows_csv({row}));
  *o.log << "error_frac=" << format_number(report.error_frac)
         << " x_error_frac=" << format_number(report.x_error_frac)
         << " y_error_frac=" << format_number(report.y_error_frac) << "\n";

  if (c.dump) {
    save_orbit(*eval, (dir / "orbit.swob").string());
    save_track(px, (dir / "p_x.swtk").string());
    save_track(py, (dir / "p_y.swtk").string());
    save_track(SymbolTrack{decoded.x, eval->x_alphabet}, (dir / "decoded_x.swtk").string());
    save_track(SymbolTrack{decoded.y, eval->y_alphabet}, (dir / "decoded_y.swtk").string());
  }

  res.manifest["diagnostics"] = to_json(codec.diag);
  res.manifest["warnings"] = codec.warnings;
  res.manifest["reconstruction"] = {{"positions", report.positions},
                                    {"erasures", report.erasures},
                                    {"disagreements", report.disagreements},
                                    {"error_frac", report.error_frac},
                                    {"x_error_frac", report.x_error_frac},
                                    {"y_error_frac", report.y_error_frac}};

  if (!c.rounds.empty()) {
    std::string csv;
    for (std::size_t i = 0; i < improve_columns().size(); ++i)
      csv += (i ? "," : "") + improve_columns()[i];
    csv += "\n";
    Json rounds = Json::array();
    for (std::size_t k = 0; k < c.rounds.size(); ++k) {
      const RoundSpec& s = c.rounds[k];
      const RateRegion& region = codec.region;
      codec.params.improve_eps = s.eps;
      codec.params.improve_delta = s.delta;
      const double f = f_bound(s.eps, s.delta, p.eps0, region.h, p.a, p.b,
                               src.x_alphabet(), src.y_alphabet());
      const auto r = improve_pair(codec, train, std::min(f, 1.0));
      csv += improve_line(k, s, r.report) + "\n";
      rounds.push_back(to_json(r.report));
      *o.log << "round " << k << ": distance=" << format_number(r.report.distance)
             << " bound=" << format_number(r.report.bound)
             << " error_after=" << format_number(r.report.error_after) << "\n";
    }
    detail::write_file(dir / "improve.csv", csv);
    res.manifest["rounds"] = rounds;
  }
  return res;
}

inline RunResult run_sweep(const ExperimentConfig& c, const RunOptions& o,
                           const std::filesystem::path& dir) {
  const SeedTree seeds = seed_tree(c.seed);
  const auto src = c.source.build();
  PairParams p = c.params;
  p.seed = seeds.codec;
  const Orbit train = sample_orbit(src, c.orbit_length, seeds.orbit);
  Orbit test;
  if (c.train_test) test = sample_orbit(src, c.orbit_length, seeds.test_orbit);
  const auto grid = c.grid.empty() ? default_grid() : c.grid;
  const auto rows = rate_region_experiment(src, train, grid, p, o.threads,
                                           c.train_test ? &test : nullptr);
  detail::write_file(dir / "sweep.csv", detail::rows_csv(rows));
  RunResult res;
  Json cells = Json::array();
  for (const auto& r : rows) {
    *o.log << "a=" << r.a << " b=" << r.b
           << " error_frac=" << format_number(r.error_frac) << " " << r.status << "\n";
    if (r.status != "ok") res.status = 1;
    cells.push_back({{"a", r.a}, {"b", r.b}, {"status", r.status}});
  }
  res.manifest["cells"] = cells;
  return res;
}

inline RunResult run_verify(const ExperimentConfig& c, const RunOptions& o,
                            const std::filesystem::path& dir) {
  const SeedTree seeds = seed_tree(c.seed);
  std::vector<std::string> suites;
  if (c.verify == "all") {
    suites = verify_suites();
  } else {
    suites.push_back(c.verify);
  }
  RunResult res;
  for (const auto& s : suites) {
    const VerifyTable t = run_verify_suite(s, seeds.verify, o.threads);
    detail::write_file(dir / ("verify_" + s + ".csv"), t.csv());
    std::size_t failed = 0;
    for (const auto& row : t.rows) failed += row.back() != "pass";
    *o.log << s << ": " << (t.passed ? "pass" : "FAIL") << " (" << t.rows.size()
           << " cases, " << failed << " failed)\n";
    res.manifest["verify"][s] = {{"cases", t.rows.size()}, {"failed", failed}};
    if (!t.passed) res.status = 1;
  }
  return res;
}

/// Runs one experiment and writes its artifacts plus manifest.json into
/// the output directory. Returns the process exit status.
inline int run(const ExperimentConfig& c, const RunOptions& o = {}) {
  const auto dir = resolve_out_dir(c, o);
  std::filesystem::create_directories(dir);
  RunResult res;
  switch (c.experiment) {
    case ExperimentKind::region:
      res = run_region(c, o);
      break;
    case ExperimentKind::simulate:
      res = run_simulate(c, o, dir);
      break;
    case ExperimentKind::sweep:
      res = run_sweep(c, o, dir);
      break;
    case ExperimentKind::verify:
      res = run_verify(c, o, dir);
      break;
  }
  res.manifest["config"] = to_json(c);
  res.manifest["seeds"] = to_json(seed_tree(c.seed));
  res.manifest["threads"] = o.threads;
  res.manifest["status"] = res.status;
  detail::write_file(dir / "manifest.json", res.manifest.dump(2) + "\n");
  return res.status;
}

}  // namespace swgen
