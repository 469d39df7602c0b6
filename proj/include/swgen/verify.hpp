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

// Self-checks run by `swgen verify`: exact codebook counts against
// enumeration, growth rates, the binning lemma, base recovery and the
// repaint distance bound. Each suite returns CSV rows with a pass column.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "swgen/codebooks.hpp"
#include "swgen/painting.hpp"
#include "swgen/rng.hpp"
#include "swgen/swcodec.hpp"
#include "swgen/towers.hpp"

namespace swgen {

struct VerifyTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  bool passed = true;

  void add(std::vector<std::string> row, bool ok) {
    row.push_back(ok ? "pass" : "fail");
    rows.push_back(std::move(row));
    passed = passed && ok;
  }

  std::string csv() const {
    std::string s;
    for (std::size_t i = 0; i < columns.size(); ++i)
      s += (i ? "," : "") + columns[i];
    s += "\n";
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + r[i];
      s += "\n";
    }
    return s;
  }
};

/// Counts A(n, ell, a) by walking every word over {0..a-1} of length n.
inline std::uint64_t enumerate_admissible(std::size_t n, std::size_t ell,
                                          unsigned a) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= a;
  std::uint64_t count = 0;
  Word w(n);
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t rest = code;
    for (std::size_t i = n; i-- > 0;) {
      w[i] = static_cast<Symbol>(rest % a);
      rest /= a;
    }
    if (w[0] != 1) continue;
    std::size_t run = 0;
    bool ok = true;
    for (Symbol s : w) {
      run = s == 0 ? run + 1 : 0;
      if (run >= ell) {
        ok = false;
        break;
      }
    }
    count += ok;
  }
  return count;
}

inline VerifyTable verify_admissible(std::size_t max_n = 14) {
  VerifyTable t{"admissible", {"n", "ell", "a", "enumerated", "counted", "result"}, {}};
  for (unsigned a : {2u, 3u}) {
    for (std::size_t ell = 1; ell <= 4; ++ell) {
      for (std::size_t n = 1; n <= max_n; ++n) {
        const auto brute = enumerate_admissible(n, ell, a);
        const BigInt dp = count_admissible(n, ell, a);
        t.add({std::to_string(n), std::to_string(ell), std::to_string(a),
               std::to_string(brute), dp.str()},
              dp == brute);
      }
    }
  }
  return t;
}

inline VerifyTable verify_growth() {
  VerifyTable t{"growth", {"n", "ell", "a", "growth_rate", "threshold", "result"}, {}};
  struct Case {
    std::size_t n, ell;
    unsigned a;
    double threshold;
  };
  for (const Case c : {Case{1000, 10, 2, 0.99},
                       Case{500, 4, 3, std::log2(3.0) - 0.05}}) {
    const double g = growth_rate(c.n, c.ell, c.a);
    t.add({std::to_string(c.n), std::to_string(c.ell), std::to_string(c.a),
           format_number(g), format_number(c.threshold)},
          g >= c.threshold);
  }
  // Monotone in ell and in a at fixed n.
  for (std::size_t n : {50u, 200u}) {
    for (unsigned a : {2u, 3u, 4u}) {
      double prev = -1.0;
      for (std::size_t ell = 1; ell <= 12; ++ell) {
        const double g = growth_rate(n, ell, a);
        t.add({std::to_string(n), std::to_string(ell), std::to_string(a),
               format_number(g), format_number(prev)},
              g >= prev);
        prev = g;
      }
    }
  }
  return t;
}

inline double binning_threshold(double eps, std::size_t trials) {
  const double s = std::sqrt(eps);
  return 1.0 - s - 3.0 * std::sqrt(s * (1.0 - s) / static_cast<double>(trials));
}

inline VerifyTable verify_binning(std::uint64_t seed, unsigned threads = 1) {
  VerifyTable t{"binning",
                {"universe", "a", "b", "eps", "trials", "success_fraction",
                 "threshold", "result"}, {}};
  const std::size_t universe = 10000, trials = 200;
  for (double eps : {0.04, 0.25}) {
    for (std::size_t a : {10u, 100u}) {
      const std::size_t b = 1000;
      const auto r = verify_binning_lemma(
          universe, a, b, eps, trials,
          derive_seed(seed, "binning-" + std::to_string(a) + "-" +
                                format_number(eps)),
          1000, threads);
      const double thr = binning_threshold(eps, trials);
      t.add({std::to_string(universe), std::to_string(a), std::to_string(b),
             format_number(eps), std::to_string(trials),
             format_number(r.success_fraction), format_number(thr)},
            r.success_fraction >= thr);
    }
  }
  return t;
}

/// A random instance for the painting checks: a planted tower, a random
/// ell-admissible current track, and painting data for both operations.
struct PaintingInstance {
  std::size_t n = 0, height = 0, ell = 0;
  unsigned a = 2;
  double eps = 0.0;
  Tower tower;
  std::vector<BaseName> names;
  SymbolTrack current;
};

inline PaintingInstance random_painting_instance(std::uint64_t seed) {
  Rng rng(seed);
  PaintingInstance in;
  in.height = static_cast<std::size_t>(
      std::exp(std::log(50.0) + rng.uniform() * (std::log(5000.0) - std::log(50.0))));
  in.ell = 2 + rng.below(11);
  in.a = 2 + static_cast<unsigned>(rng.below(2));
  while (in.height <= 2 * in.ell + 1) ++in.height;
  const std::size_t max_head = in.height - 2 * in.ell;
  const std::size_t head = 1 + rng.below(std::min<std::size_t>(max_head, in.height / 2));
  in.eps = (static_cast<double>(head) + 0.5) / static_cast<double>(in.height);
  const std::size_t blocks = 5 + rng.below(20);
  in.n = 0;
  std::vector<std::size_t> bases;
  std::size_t pos = rng.below(in.height / 4 + 1);
  for (std::size_t k = 0; k < blocks; ++k) {
    bases.push_back(pos);
    pos += in.height + rng.below(in.height / 8 + 2);
  }
  in.n = bases.back() + in.height / 2 + rng.below(in.height) + 1;
  in.tower = Tower::from_bases(bases, in.height, Scope::x_only, in.n);
  for (auto b : bases) {
    if (b + in.height > in.n) continue;
    Word name(in.height);
    for (auto& s : name) s = static_cast<Symbol>(rng.below(2));
    in.names.emplace_back(b, std::move(name));
  }
  in.current = SymbolTrack{std::vector<Symbol>(in.n), in.a};
  std::size_t run = 0;
  for (auto& s : in.current.values) {
    s = static_cast<Symbol>(rng.below(in.a));
    if (run + 1 >= in.ell && s == 0) s = 1;
    run = s == 0 ? run + 1 : 0;
  }
  return in;
}

inline std::vector<std::size_t> complete_bases(const Tower& t) {
  std::vector<std::size_t> out;
  for (auto b : t.bases)
    if (b + t.height <= t.orbit_length) out.push_back(b);
  return out;
}

inline VerifyTable verify_base_recovery(std::uint64_t seed,
                                        std::size_t instances = 100) {
  VerifyTable t{"base-recovery",
                {"instance", "n", "M", "ell", "a", "planted", "painted_ok",
                 "repainted_ok", "result"}, {}};
  for (std::size_t k = 0; k < instances; ++k) {
    const auto in =
        random_painting_instance(derive_seed(seed, "instance-" + std::to_string(k)));
    const AdmissibleCodebook book(in.height - in.ell, in.ell, in.a);
    const PaintingData pd = make_painting_data(2, in.height, book, seed + k);
    const auto painted = paint(in.tower, in.names, pd, in.ell);
    const auto planted = complete_bases(in.tower);
    const bool p_ok = recover_bases(painted, in.ell) == planted;
    const auto z = repaint_zones(in.height, in.eps, in.ell);
    const AdmissibleCodebook head_book(z.head, in.ell, in.a);
    const PaintingData rd = make_painting_data(2, in.height, head_book, seed + k + 1);
    const auto repainted = repaint(in.tower, in.current, in.names, &rd, in.eps, in.ell);
    const bool r_ok = recover_bases_repaint(repainted, in.ell) == planted;
    t.add({std::to_string(k), std::to_string(in.n), std::to_string(in.height),
           std::to_string(in.ell), std::to_string(in.a),
           std::to_string(planted.size()), p_ok ? "1" : "0", r_ok ? "1" : "0"},
          p_ok && r_ok);
  }
  return t;
}

inline VerifyTable verify_repaint(std::uint64_t seed, std::size_t instances = 100) {
  VerifyTable t{"repaint",
                {"instance", "n", "M", "ell", "eps", "coverage", "distance",
                 "bound", "result"}, {}};
  for (std::size_t k = 0; k < instances; ++k) {
    const auto in =
        random_painting_instance(derive_seed(seed, "instance-" + std::to_string(k)));
    const auto z = repaint_zones(in.height, in.eps, in.ell);
    const AdmissibleCodebook head_book(z.head, in.ell, in.a);
    const PaintingData rd = make_painting_data(2, in.height, head_book, seed + k + 1);
    const auto repainted = repaint(in.tower, in.current, in.names, &rd, in.eps, in.ell);
    const double d = partition_distance(repainted, in.current);
    const double bound = in.eps + 2.0 * static_cast<double>(in.ell) / in.height +
                         (1.0 - in.tower.coverage);
    t.add({std::to_string(k), std::to_string(in.n), std::to_string(in.height),
           std::to_string(in.ell), format_number(in.eps),
           format_number(in.tower.coverage), format_number(d),
           format_number(bound)},
          d <= bound);
  }
  return t;
}

inline std::vector<std::string> verify_suites() {
  return {"admissible", "growth", "binning", "base-recovery", "repaint"};
}

inline VerifyTable run_verify_suite(const std::string& suite, std::uint64_t seed,
                                    unsigned threads = 1) {
  if (suite == "admissible") return verify_admissible();
  if (suite == "growth") return verify_growth();
  if (suite == "binning") return verify_binning(derive_seed(seed, "binning"), threads);
  if (suite == "base-recovery")
    return verify_base_recovery(derive_seed(seed, "painting"));
  if (suite == "repaint") return verify_repaint(derive_seed(seed, "painting"));
  throw Error("unknown verify suite '" + suite + "'");
}

}  // namespace swgen
