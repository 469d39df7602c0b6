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

// Shannon-McMillan machinery over towers: typical name sets, conditional
// name maps, Hamming-ball maps and the reverse entropy bound.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <span>
#include <unordered_map>
#include <vector>

#include "swgen/common.hpp"
#include "swgen/partitions.hpp"
#include "swgen/rng.hpp"
#include "swgen/sources.hpp"
#include "swgen/towers.hpp"

namespace swgen {

/// H(x) = -x log2 x - (1-x) log2 (1-x).
inline double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0))
    throw Error("binary_entropy: argument outside [0,1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

/// h + H(eps) + 2 eps log2 k: the entropy ceiling certified by a measurable
/// list map whose lists have fewer than 2^{hM} names and miss at most an
/// eps fraction of the base.
inline double reverse_sm_bound(double h, double eps, unsigned parts) {
  return h + binary_entropy(eps) + 2.0 * eps * std::log2(double(parts));
}

/// log2 of a name probability; an empty function selects empirical
/// frequencies over the tower's bases.
using NameModel = std::function<double(std::span<const Symbol>)>;

struct NameEntry {
  Word name;
  double log2_prob = 0.0;
  std::size_t count = 0;  // bases carrying this name
};

struct NameSet {
  std::size_t height = 0;
  unsigned parts = 0;
  bool exact = false;
  std::vector<NameEntry> members;
  double captured_fraction = 0.0;
  std::size_t bases = 0;

  std::size_t size() const { return members.size(); }
  bool contains(const Word& w) const {
    return std::any_of(members.begin(), members.end(),
                       [&](const NameEntry& e) { return e.name == w; });
  }
};

/// Observed names whose probability lies strictly between 2^{-(h+eps)M} and
/// 2^{-(h-eps)M}.
inline NameSet typical_names(const Tower& tower, const SymbolTrack& track,
                             const NameModel& model, double h, double eps) {
  const auto names = names_along_tower(tower, track);
  std::map<Word, std::size_t> counts;
  for (const auto& [base, w] : names.names) ++counts[w];

  NameSet set;
  set.height = tower.height;
  set.parts = track.parts;
  set.exact = static_cast<bool>(model);
  set.bases = names.names.size();
  const auto M = static_cast<double>(tower.height);
  std::size_t captured = 0;
  for (const auto& [w, c] : counts) {
    const double lp =
        model ? model(w)
              : std::log2(static_cast<double>(c) / static_cast<double>(set.bases));
    const double rate = -lp / M;
    if (rate > h - eps && rate < h + eps) {
      set.members.push_back({w, lp, c});
      captured += c;
    }
  }
  set.captured_fraction =
      set.bases ? static_cast<double>(captured) / static_cast<double>(set.bases)
                : 0.0;
  if (set.exact && !set.members.empty() &&
      std::log2(static_cast<double>(set.size())) > (h + eps) * M + 1e-9)
    throw Error("typical_names: more names than 2^{(h+eps)M}");
  return set;
}

/// A finite map Phi from names to sets of names; unknown keys map to the
/// empty set.
struct NameMap {
  std::unordered_map<Word, std::vector<Word>, WordHash> fibers;
  double log2_bound = std::numeric_limits<double>::infinity();
  std::size_t truncated = 0;  // keys whose fiber exceeded the bound

  const std::vector<Word>& lookup(const Word& key) const {
    static const std::vector<Word> kEmpty;
    const auto it = fibers.find(key);
    return it == fibers.end() ? kEmpty : it->second;
  }

  bool contains(const Word& key, const Word& value) const {
    const auto& f = lookup(key);
    return std::find(f.begin(), f.end(), value) != f.end();
  }

  std::size_t max_fiber() const {
    std::size_t m = 0;
    for (const auto& [k, f] : fibers) m = std::max(m, f.size());
    return m;
  }

  /// histogram[s] = number of keys with fiber size s.
  std::vector<std::size_t> fiber_histogram() const {
    std::vector<std::size_t> h(max_fiber() + 1, 0);
    for (const auto& [k, f] : fibers) ++h[f.size()];
    return h;
  }
};

namespace detail {
inline void add_unique(std::vector<Word>& v, const Word& w) {
  if (std::find(v.begin(), v.end(), w) == v.end()) v.push_back(w);
}
inline void truncate_oversized(NameMap& map) {
  for (auto& [key, fiber] : map.fibers) {
    if (std::log2(static_cast<double>(fiber.size())) > map.log2_bound) {
      fiber.clear();
      ++map.truncated;
    }
  }
}
}  // namespace detail

/// Co-occurrence map: key i maps to every value observed with it. Fibers
/// larger than 2^log2_bound are emptied and counted.
inline NameMap observed_name_map(std::span<const Word> keys,
                                 std::span<const Word> values,
                                 double log2_bound) {
  if (keys.size() != values.size())
    throw Error("observed_name_map: keys and values differ in length");
  NameMap map;
  map.log2_bound = log2_bound;
  for (std::size_t i = 0; i < keys.size(); ++i)
    detail::add_unique(map.fibers[keys[i]], values[i]);
  detail::truncate_oversized(map);
  return map;
}

/// Probabilities of P-names and of joint (P, Q)-names, with the entropy
/// rates h(P) and h(P v Q) the typical bands are centred on.
struct JointNameModel {
  NameModel p_model;  // empty: empirical
  std::function<double(std::span<const Symbol>, std::span<const Symbol>)>
      joint_model;  // empty: empirical
  double h_p = 0.0;
  double h_pq = 0.0;

  double h_cond() const { return h_pq - h_p; }
};

/// P = one coordinate of the source, Q = the other (p_coordinate 0 means
/// P reads x).
inline JointNameModel coordinate_pair_model(const JointSource& src,
                                            const RateRegion& region,
                                            int p_coordinate) {
  JointNameModel m;
  m.h_pq = region.h;
  if (p_coordinate == 0) {
    m.h_p = region.h_x();
    m.p_model = [&src](std::span<const Symbol> w) {
      const Word any(w.size(), kAny);
      return log2_prob(src, w, any);
    };
    m.joint_model = [&src](std::span<const Symbol> p,
                           std::span<const Symbol> q) {
      return log2_prob(src, p, q);
    };
  } else {
    m.h_p = region.h_y();
    m.p_model = [&src](std::span<const Symbol> w) {
      const Word any(w.size(), kAny);
      return log2_prob(src, any, w);
    };
    m.joint_model = [&src](std::span<const Symbol> p,
                           std::span<const Symbol> q) {
      return log2_prob(src, q, p);
    };
  }
  return m;
}

struct ConditionalMap {
  NameMap map;
  double coverage = 0.0;  // bases z with nu_Q(z) in Phi(nu_P(z))
  std::size_t bases = 0;
  std::size_t p_typical = 0;      // bases whose P-name is in N
  std::size_t joint_typical = 0;  // bases whose joint name is in M
};

/// Phi(n) = pi_2(pi_1^{-1}(n) cap M) for n in N, empty otherwise, where
/// N = {P-names with probability < 2^{-M(h_p - eps)}} and
/// M = {joint names with probability > 2^{-M(h_pq + eps)}}, collected over
/// the observed names. Fibers above 2^{M(h_cond + 2 eps)} are emptied.
inline ConditionalMap conditional_name_map(const Tower& tower,
                                           const SymbolTrack& p_track,
                                           const SymbolTrack& q_track,
                                           const JointNameModel& model,
                                           double eps) {
  const auto pn = names_along_tower(tower, p_track).names;
  const auto qn = names_along_tower(tower, q_track).names;
  const auto M = static_cast<double>(tower.height);
  ConditionalMap out;
  out.bases = pn.size();
  out.map.log2_bound = M * (model.h_cond() + 2.0 * eps);

  std::unordered_map<Word, std::size_t, WordHash> p_counts;
  std::map<std::pair<Word, Word>, std::size_t> joint_counts;
  if (!model.p_model || !model.joint_model) {
    for (std::size_t i = 0; i < pn.size(); ++i) {
      ++p_counts[pn[i].second];
      ++joint_counts[{pn[i].second, qn[i].second}];
    }
  }
  const auto total = static_cast<double>(out.bases);
  auto lp_p = [&](const Word& w) {
    return model.p_model ? model.p_model(w)
                         : std::log2(p_counts[w] / total);
  };
  auto lp_joint = [&](const Word& p, const Word& q) {
    return model.joint_model ? model.joint_model(p, q)
                             : std::log2(joint_counts[{p, q}] / total);
  };

  std::vector<bool> in_joint(pn.size(), false);
  for (std::size_t i = 0; i < pn.size(); ++i) {
    const Word& p = pn[i].second;
    const Word& q = qn[i].second;
    const bool p_ok = -lp_p(p) > M * (model.h_p - eps);
    const bool j_ok = -lp_joint(p, q) < M * (model.h_pq + eps);
    out.p_typical += p_ok;
    out.joint_typical += j_ok;
    if (p_ok && j_ok) {
      detail::add_unique(out.map.fibers[p], q);
      in_joint[i] = true;
    }
  }
  detail::truncate_oversized(out.map);
  std::size_t hit = 0;
  for (std::size_t i = 0; i < pn.size(); ++i)
    hit += in_joint[i] && out.map.contains(pn[i].second, qn[i].second);
  out.coverage = out.bases ? hit / total : 0.0;
  return out;
}

/// log2 of the number of words of length M over k symbols within Hamming
/// distance strictly less than `radius` of a fixed word.
inline double log2_hamming_ball_size(std::size_t M, double radius,
                                     unsigned parts) {
  double acc = -std::numeric_limits<double>::infinity();
  const double lk1 = parts > 1 ? std::log2(double(parts - 1)) : 0.0;
  for (std::size_t d = 0; d <= M && static_cast<double>(d) < radius; ++d) {
    if (d > 0 && parts == 1) break;
    const double term =
        (std::lgamma(M + 1.0) - std::lgamma(d + 1.0) - std::lgamma(M - d + 1.0)) /
            std::log(2.0) +
        static_cast<double>(d) * lk1;
    const double hi = std::max(acc, term), lo = std::min(acc, term);
    acc = hi + std::log2(1.0 + std::exp2(lo - hi));
  }
  return acc;
}

inline std::size_t hamming_distance(std::span<const Symbol> a,
                                    std::span<const Symbol> b) {
  if (a.size() != b.size()) throw Error("hamming_distance: length mismatch");
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

/// Phi((q_i)) = words within Hamming distance < r M of psi((q_i)), where psi
/// applies a windowed code on interior positions and writes 0 within the
/// code radius of either block edge.
class HammingBallMap {
 public:
  HammingBallMap(SlidingBlockPartition center_code, double radius_fraction)
      : code_(std::move(center_code)), r_(radius_fraction) {
    if (!(r_ >= 0.0 && r_ <= 0.5))
      throw Error("hamming_ball_map: radius fraction must be in [0, 1/2]");
    code_.validate();
  }

  Word center(std::span<const Symbol> q) const {
    const std::size_t M = q.size(), N = code_.radius;
    Word psi(M, 0);
    for (std::size_t j = N; j + N < M; ++j)
      psi[j] = code_.code(q.subspan(j - N, 2 * N + 1));
    return psi;
  }

  bool contains(std::span<const Symbol> q, std::span<const Symbol> w) const {
    return static_cast<double>(hamming_distance(w, center(q))) <
           r_ * static_cast<double>(q.size());
  }

  /// M (H(r) + r log2 k), the size bound in bits.
  double log2_size_bound(std::size_t M) const {
    return static_cast<double>(M) *
           (binary_entropy(r_) + r_ * std::log2(double(code_.parts)));
  }

  double log2_size(std::size_t M) const {
    return log2_hamming_ball_size(M, r_ * static_cast<double>(M), code_.parts);
  }

  double radius_fraction() const { return r_; }
  unsigned parts() const { return code_.parts; }

 private:
  SlidingBlockPartition code_;
  double r_;
};

}  // namespace swgen
