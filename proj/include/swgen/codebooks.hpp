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

// Admissible codebooks A(n, ell, a): words over {0..a-1} that start with 1
// and contain no run of ell zeros. Exact counting and lexicographic
// rank/unrank, seeded painting data, and the random-binning law.

#include <boost/multiprecision/cpp_int.hpp>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <memory>
#include <span>
#include <thread>
#include <vector>

#include "swgen/common.hpp"
#include "swgen/rng.hpp"

namespace swgen {

using BigInt = boost::multiprecision::cpp_int;

inline double log2_big(const BigInt& v) {
  if (v <= 0) return -std::numeric_limits<double>::infinity();
  const auto msb = static_cast<long>(boost::multiprecision::msb(v));
  if (msb < 52) return std::log2(v.convert_to<double>());
  const BigInt top = v >> static_cast<unsigned>(msb - 52);
  return static_cast<double>(msb - 52) + std::log2(top.convert_to<double>());
}

class AdmissibleCodebook {
 public:
  AdmissibleCodebook(std::size_t n, std::size_t ell, unsigned a)
      : n_(n), ell_(ell), a_(a) {
    if (n < 1) throw Error("codebook: n must be >= 1");
    if (ell < 1) throw Error("codebook: ell must be >= 1");
    if (a < 2) throw Error("codebook: a must be >= 2");
    // free_[k]: ways to fill k symbols after a nonzero symbol.
    // prefix_[k] = free_[0] + ... + free_[k].
    free_.reserve(n);
    prefix_.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
      free_.push_back(k == 0 ? BigInt(1) : completions(k, 0));
      prefix_.push_back(k == 0 ? free_[0] : prefix_[k - 1] + free_[k]);
    }
    count_ = free_[n - 1];
    log2_count_ = log2_big(count_);
  }

  std::size_t length() const { return n_; }
  std::size_t ell() const { return ell_; }
  unsigned alphabet() const { return a_; }
  const BigInt& count() const { return count_; }
  double log2_count() const { return log2_count_; }

  bool contains(std::span<const Symbol> w) const {
    if (w.size() != n_ || w[0] != 1) return false;
    std::size_t run = 0;
    for (Symbol s : w) {
      if (s >= a_) return false;
      run = s == 0 ? run + 1 : 0;
      if (run >= ell_) return false;
    }
    return true;
  }

  Word unrank(BigInt index) const {
    if (index < 0 || index >= count_)
      throw Error("unrank: index out of range");
    Word w(n_, 0);
    w[0] = 1;
    std::size_t run = 0;
    for (std::size_t i = 1; i < n_; ++i) {
      const std::size_t rem = n_ - 1 - i;
      if (run + 1 < ell_) {
        const BigInt zeros = completions(rem, run + 1);
        if (index < zeros) {
          w[i] = 0;
          ++run;
          continue;
        }
        index -= zeros;
      }
      const BigInt& per_symbol = free_[rem];
      Symbol s = 1;
      while (index >= per_symbol) {
        index -= per_symbol;
        ++s;
      }
      w[i] = s;
      run = 0;
    }
    return w;
  }

  BigInt rank(std::span<const Symbol> w) const {
    if (!contains(w)) throw Error("rank: word is not admissible");
    BigInt index = 0;
    std::size_t run = 0;
    for (std::size_t i = 1; i < n_; ++i) {
      const std::size_t rem = n_ - 1 - i;
      if (w[i] == 0) {
        ++run;
        continue;
      }
      if (run + 1 < ell_) index += completions(rem, run + 1);
      index += free_[rem] * (w[i] - 1);
      run = 0;
    }
    return index;
  }

 private:
  // Ways to fill `rem` symbols when the word currently ends in `run` zeros.
  BigInt completions(std::size_t rem, std::size_t run) const {
    if (rem == 0) return 1;
    const std::size_t slack = ell_ - 1 - run;  // zeros still allowed in a row
    BigInt total = rem <= slack ? 1 : 0;
    // t leading zeros (t <= slack, t < rem), a nonzero, then a free suffix of
    // length rem - 1 - t.
    const std::size_t tmax = std::min(rem - 1, slack);
    const std::size_t hi = rem - 1;
    BigInt sum = prefix_[hi];
    if (hi >= tmax + 1) sum -= prefix_[hi - tmax - 1];
    total += sum * (a_ - 1);
    return total;
  }

  std::size_t n_, ell_;
  unsigned a_;
  std::vector<BigInt> free_;
  std::vector<BigInt> prefix_;
  BigInt count_;
  double log2_count_ = 0.0;
};

inline BigInt count_admissible(std::size_t n, std::size_t ell, unsigned a) {
  return AdmissibleCodebook(n, ell, a).count();
}

/// (1/n) log2 |A(n, ell, a)|.
inline double growth_rate(std::size_t n, std::size_t ell, unsigned a) {
  return AdmissibleCodebook(n, ell, a).log2_count() / static_cast<double>(n);
}

/// Uniform value in [0, modulus) determined by (seed, name): the name is
/// hashed under independent salts into enough 64-bit limbs to exceed the
/// modulus by 64 bits, then reduced.
inline BigInt wide_hash_below(std::uint64_t seed, std::span<const Symbol> name,
                              const BigInt& modulus) {
  if (modulus <= 1) return 0;
  const std::size_t bits = boost::multiprecision::msb(modulus) + 1 + 64;
  const std::size_t limbs = (bits + 63) / 64;
  BigInt v = 0;
  for (std::size_t j = 0; j < limbs; ++j) {
    v <<= 64;
    v |= hash_symbols(mix64(seed + 0x9e3779b97f4a7c15ULL * (j + 1)), name);
  }
  return v % modulus;
}

/// A seeded random function from names of length `height` over
/// `source_parts` symbols into a codebook.
class PaintingData {
 public:
  PaintingData(unsigned source_parts, std::size_t height,
               std::shared_ptr<const AdmissibleCodebook> codebook,
               std::uint64_t seed)
      : source_parts_(source_parts),
        height_(height),
        codebook_(std::move(codebook)),
        seed_(seed) {
    if (!codebook_) throw Error("painting data needs a codebook");
  }

  BigInt index_of(std::span<const Symbol> name) const {
    check(name);
    return wide_hash_below(seed_, name, codebook_->count());
  }

  Word apply(std::span<const Symbol> name) const {
    return codebook_->unrank(index_of(name));
  }

  const AdmissibleCodebook& codebook() const { return *codebook_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t height() const { return height_; }
  unsigned source_parts() const { return source_parts_; }

 private:
  void check(std::span<const Symbol> name) const {
    if (name.size() != height_) throw Error("painting data: name length");
    for (Symbol s : name)
      if (s >= source_parts_) throw Error("painting data: name symbol range");
  }

  unsigned source_parts_;
  std::size_t height_;
  std::shared_ptr<const AdmissibleCodebook> codebook_;
  std::uint64_t seed_;
};

inline PaintingData make_painting_data(unsigned source_parts,
                                       std::size_t height,
                                       const AdmissibleCodebook& codebook,
                                       std::uint64_t seed) {
  return PaintingData(source_parts, height,
                      std::make_shared<const AdmissibleCodebook>(codebook),
                      seed);
}

/// Probability that a uniformly random function into 2^log2_bins values
/// sends none of 2^log2_others further names onto a given value
/// (Poisson limit exp(-others/bins)).
inline double no_collision_probability(double log2_others, double log2_bins) {
  if (log2_others == -std::numeric_limits<double>::infinity()) return 1.0;
  const double l2 = log2_others - log2_bins;
  if (l2 > 12.0) return 0.0;
  return std::exp(-std::exp2(l2));
}

struct BinningResult {
  double success_fraction = 0.0;
  double mean_measure = 0.0;  // average measure of the good set
  double fiber_bound = 0.0;   // 1 + (a/b)/eps
  std::size_t trials = 0;
};

/// Monte Carlo check of the random binning lemma on a synthetic instance:
/// `points` equally weighted points z, phi(z) uniform in a universe,
/// Phi(z) a uniform a-subset containing phi(z), psi uniform into b bins
/// (all redrawn per trial). A trial succeeds when the set of z with
/// |psi^{-1}(psi(phi(z))) cap Phi(z)| < 1 + (a/b)/eps has measure
/// > 1 - sqrt(eps).
inline BinningResult verify_binning_lemma(std::size_t universe,
                                          std::size_t fiber_bound_a,
                                          std::size_t bins, double eps,
                                          std::size_t trials,
                                          std::uint64_t seed,
                                          std::size_t points = 1000,
                                          unsigned threads = 1) {
  if (fiber_bound_a < 1 || fiber_bound_a > universe)
    throw Error("binning: need 1 <= a <= universe");
  if (bins < 1) throw Error("binning: need b >= 1");
  if (!(eps > 0.0 && eps <= 1.0)) throw Error("binning: eps must be in (0,1]");
  const double bound =
      1.0 + static_cast<double>(fiber_bound_a) / static_cast<double>(bins) / eps;
  const double needed = 1.0 - std::sqrt(eps);

  auto run_trial = [&](std::size_t trial) -> double {
    Rng rng(derive_seed(seed, "binning-trial-" + std::to_string(trial)));
    std::vector<std::uint32_t> psi(universe);
    for (auto& v : psi) v = static_cast<std::uint32_t>(rng.below(bins));
    std::vector<std::uint32_t> marks(universe, 0);
    std::uint32_t stamp = 0;
    std::size_t good = 0;
    for (std::size_t z = 0; z < points; ++z) {
      const std::size_t center = rng.below(universe);
      ++stamp;
      marks[center] = stamp;
      std::size_t in_bin = 1;
      for (std::size_t drawn = 1; drawn < fiber_bound_a;) {
        const std::size_t w = rng.below(universe);
        if (marks[w] == stamp) continue;
        marks[w] = stamp;
        ++drawn;
        in_bin += psi[w] == psi[center];
      }
      good += static_cast<double>(in_bin) < bound;
    }
    return static_cast<double>(good) / static_cast<double>(points);
  };

  std::vector<double> measures(trials);
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, 64));
  std::vector<std::future<void>> jobs;
  for (unsigned w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t t = w; t < trials; t += workers)
        measures[t] = run_trial(t);
    }));
  }
  for (auto& j : jobs) j.get();

  BinningResult r;
  r.trials = trials;
  r.fiber_bound = bound;
  std::size_t ok = 0;
  for (double m : measures) {
    ok += m > needed;
    r.mean_measure += m;
  }
  if (trials) {
    r.success_fraction = static_cast<double>(ok) / static_cast<double>(trials);
    r.mean_measure /= static_cast<double>(trials);
  }
  return r;
}

}  // namespace swgen
