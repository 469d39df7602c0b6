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

// Distributed coding of a correlated pair: P_Y is painted on a y-only tower
// S, P_X on an x-only tower L, and the joint decoder reconstructs the
// generator tracks (x, y) from (P_X, P_Y) alone.
//
// Decoder stages:
//   L blocks:  g-codeword + P_Y name  -> x name   (Phi5 = g^-1(n) cap Phi4(m))
//   S blocks:  f-codeword + x name    -> y name   (Psi  = f^-1(m) cap Phi0(n))
// Candidate sets are the names observed along the training orbit, filtered
// by codeword. A candidate is a member of Phi4 / Phi0 when its conditional
// cost -log2 p(name | side) is below the typical threshold. Members that
// were never observed are accounted for by the random-function law: the
// chance that none of 2^k further members shares the codeword is
// exp(-2^k / |codebook|), realized by a seeded uniform draw per lookup.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swgen/codebooks.hpp"
#include "swgen/common.hpp"
#include "swgen/painting.hpp"
#include "swgen/partitions.hpp"
#include "swgen/rng.hpp"
#include "swgen/sources.hpp"
#include "swgen/towers.hpp"
#include "swgen/typicality.hpp"

namespace swgen {

struct PairParams {
  unsigned a = 2;
  unsigned b = 2;
  std::size_t ell = 10;
  double eta = 0.005;
  std::size_t M_S = 2000;
  std::size_t M_L = 2000;
  double coverage_S = 0.99;
  double coverage_L = 0.99;
  std::uint64_t seed = 1;
  double eps0 = 0.1;
  double typ_slack = 0.06;  // per-symbol slack of the typical thresholds
  std::size_t marker_window = 16;
  std::size_t min_blocks = 50;
  // improvement rounds
  std::size_t M_T = 10000;
  double coverage_T = 0.99;
  double improve_eps = 0.01;
  double improve_delta = 0.01;

  void validate() const {
    if (a < 1 || a > 255 || b < 1 || b > 255)
      throw Error("params: a and b must be in [1, 255]");
    if (ell < 1) throw Error("params: ell must be >= 1");
    if (M_S <= ell || M_L <= ell || M_T <= ell)
      throw Error("params: tower heights must exceed ell");
    if (!(eta > 0.0 && eta < 0.5)) throw Error("params: eta must be in (0, 0.5)");
    if (!(typ_slack > 0.0)) throw Error("params: typ_slack must be positive");
    for (double c : {coverage_S, coverage_L, coverage_T})
      if (!(c > 0.0 && c < 1.0)) throw Error("params: coverage must be in (0,1)");
    if (marker_window < 1) throw Error("params: marker_window must be >= 1");
    if (!(improve_eps >= 0.0 && improve_delta >= 0.0))
      throw Error("params: improvement eps/delta must be >= 0");
  }

  friend bool operator==(const PairParams&, const PairParams&) = default;
};

/// Scaled repaint fraction 2(H(eps)+H(delta)+eps log kx+delta log ky) /
/// (log a + log b - eps0 - h).
inline double f_bound(double eps, double delta, double eps0, double h,
                      unsigned a, unsigned b, unsigned kx, unsigned ky) {
  const double den = std::log2(a) + std::log2(b) - eps0 - h;
  if (!(den > 0.0)) throw Error("f_bound: nonpositive denominator");
  const double num = binary_entropy(eps) + binary_entropy(delta) +
                     eps * std::log2(kx) + delta * std::log2(ky);
  return 2.0 * num / den;
}

/// Warnings for (a, b) outside the achievable region with the given margin.
inline std::vector<std::string> region_warnings(const RateRegion& r, unsigned a,
                                                unsigned b, double margin,
                                                double eps0) {
  std::vector<std::string> w;
  const double la = std::log2(a), lb = std::log2(b);
  if (!(la > r.h_given_y + margin))
    w.push_back("log a <= h(T|F_Y) + margin: x cannot be recovered");
  if (!(lb > r.h_given_x + margin))
    w.push_back("log b <= h(T|F_X) + margin: y cannot be recovered");
  if (!(la + lb > r.h + eps0))
    w.push_back("log a + log b <= h(T) + eps0: sum rate too small");
  return w;
}

/// -log2 p(target | given) with kAny wildcards on either side.
class CostModel {
 public:
  explicit CostModel(std::shared_ptr<const JointSource> src)
      : src_(std::move(src)) {
    if (src_->kind() != SourceKind::iid_pair) return;
    const unsigned kx = src_->x_alphabet(), ky = src_->y_alphabet();
    const auto px = src_->marginal_x(), py = src_->marginal_y();
    const auto& pp = src_->pair_probs();
    auto cost = [](double num, double den) {
      return num > 0.0 ? -std::log2(num / den)
                       : std::numeric_limits<double>::infinity();
    };
    x_given_y_.assign((kx + 1) * (ky + 1), 0.0);
    y_given_x_.assign((kx + 1) * (ky + 1), 0.0);
    for (unsigned x = 0; x < kx; ++x) {
      for (unsigned y = 0; y <= ky; ++y) {
        x_given_y_[x * (ky + 1) + y] =
            y == ky ? cost(px[x], 1.0) : cost(pp[x * ky + y], py[y]);
      }
    }
    for (unsigned y = 0; y < ky; ++y) {
      for (unsigned x = 0; x <= kx; ++x) {
        y_given_x_[y * (kx + 1) + x] =
            x == kx ? cost(py[y], 1.0) : cost(pp[x * ky + y], px[x]);
      }
    }
  }

  /// Stops early once the running cost exceeds `limit` (iid sources).
  double x_given_y(std::span<const Symbol> xs, std::span<const Symbol> ys,
                   double limit) const {
    if (src_->kind() != SourceKind::iid_pair) return markov(xs, ys, 1);
    const unsigned ky = src_->y_alphabet();
    double c = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (xs[i] == kAny) continue;
      const unsigned y = ys[i] == kAny ? ky : ys[i];
      c += x_given_y_[xs[i] * (ky + 1) + y];
      if (c > limit) return c;
    }
    return c;
  }

  double y_given_x(std::span<const Symbol> ys, std::span<const Symbol> xs,
                   double limit) const {
    if (src_->kind() != SourceKind::iid_pair) return markov(xs, ys, 0);
    const unsigned kx = src_->x_alphabet();
    double c = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
      if (ys[i] == kAny) continue;
      const unsigned x = xs[i] == kAny ? kx : xs[i];
      c += y_given_x_[ys[i] * (kx + 1) + x];
      if (c > limit) return c;
    }
    return c;
  }

  const JointSource& source() const { return *src_; }

 private:
  // given == 1: condition on ys; given == 0: condition on xs.
  double markov(std::span<const Symbol> xs, std::span<const Symbol> ys,
                int given) const {
    const Word any(xs.size(), kAny);
    const double joint = log2_prob(*src_, xs, ys);
    const double side =
        given == 1 ? log2_prob(*src_, any, ys) : log2_prob(*src_, xs, any);
    if (joint == -std::numeric_limits<double>::infinity())
      return std::numeric_limits<double>::infinity();
    return side - joint;
  }

  std::shared_ptr<const JointSource> src_;
  std::vector<double> x_given_y_, y_given_x_;
};

using CodewordPool = std::map<BigInt, std::vector<Word>>;

/// One repainting round on an x-only tower T.
struct ImproveRound {
  double fraction = 0.0;
  std::size_t head = 0;
  std::size_t ell_r = 0;
  double radius = 0.0;  // Hamming radius fraction against the old estimate
  Tower tower;
  std::shared_ptr<const AdmissibleCodebook> codebook;  // null when head == 0
  std::uint64_t seed = 0;
  CodewordPool pool;  // x names on T blocks by head-codeword index
  NameMap phi2;       // P_Y name over a T block -> y names
};

struct PairDiagnostics {
  double coverage_S = 0.0;
  double coverage_L = 0.0;
  std::size_t s_blocks = 0;
  std::size_t l_blocks = 0;
  double n_typical_frac = 0.0;  // S-bases whose y name is in N
  double phi0_coverage = 0.0;
  double phi1_frac = 0.0;
  double phi3_coverage = 0.0;
  double psi_singleton_frac = 0.0;
  double phi5_singleton_frac = 0.0;
  double log2_count_f = 0.0;
  double log2_count_g = 0.0;
  double log2_phi4 = 0.0;
  double h_px = 0.0;  // empirical entropy rates of the tracks
  double h_py = 0.0;
};

struct PairCodec {
  PairParams params;
  std::shared_ptr<const JointSource> source;
  RateRegion region;
  std::optional<Tower> tower_S;  // absent when b == 1
  std::optional<Tower> tower_L;  // absent when a == 1
  std::shared_ptr<const AdmissibleCodebook> codebook_f, codebook_g;
  std::optional<PaintingData> f, g;
  SymbolTrack p_x, p_y;
  CodewordPool pool_S, pool_L;
  NameMap phi0, phi2, phi3;
  std::vector<ImproveRound> rounds;
  PairDiagnostics diag;
  std::vector<std::string> warnings;

  double typ() const { return params.typ_slack; }
};

namespace detail {

inline void pool_add(CodewordPool& pool, const BigInt& idx, const Word& name) {
  auto& v = pool[idx];
  if (std::find(v.begin(), v.end(), name) == v.end()) v.push_back(name);
}

inline Word concat(std::span<const Symbol> a, std::span<const Symbol> b) {
  Word w(a.begin(), a.end());
  w.insert(w.end(), b.begin(), b.end());
  return w;
}

inline std::size_t entropy_block_length(unsigned parts) {
  if (parts <= 1) return 1;
  std::size_t k = 1;
  double size = static_cast<double>(parts) * parts;
  while (k < 12 && size * parts <= double(1 << 20)) {
    ++k;
    size *= parts;
  }
  return k;
}

inline double track_entropy(const SymbolTrack& t) {
  if (t.parts <= 1 || t.size() < 64) return 0.0;
  return empirical_block_entropy(t, entropy_block_length(t.parts));
}

/// A fresh unit draw deciding whether unobserved members collide.
inline bool no_spurious(std::uint64_t seed, std::string_view stage,
                        std::span<const Symbol> a, std::span<const Symbol> b,
                        double log2_others, double log2_bins) {
  const double u = hash_uniform(derive_seed(seed, stage), concat(a, b));
  return u < no_collision_probability(log2_others, log2_bins);
}

}  // namespace detail

struct StageOutcome {
  bool singleton = false;
  Word value;
  std::size_t members = 0;  // observed members of the fiber
  double log2_fiber = 0.0;  // size bound of the candidate set
};

/// Psi on one S block: the unique y name with f-index `idx` that is
/// conditionally typical given the (partially erased) x name.
inline StageOutcome psi_stage(const PairCodec& c, const CostModel& cost,
                              const BigInt& idx,
                              std::span<const Symbol> codeword,
                              std::span<const Symbol> x_key) {
  StageOutcome out;
  std::size_t known = 0;
  for (Symbol s : x_key) known += s != kAny;
  const double erased = static_cast<double>(x_key.size() - known);
  const double t0 =
      static_cast<double>(known) * (c.region.h_given_x + 2.0 * c.typ()) +
      erased * (c.region.h_y() + 2.0 * c.typ());
  out.log2_fiber = t0;
  const auto it = c.pool_S.find(idx);
  if (it != c.pool_S.end()) {
    for (const Word& w : it->second) {
      if (cost.y_given_x(w, x_key, t0) < t0) {
        ++out.members;
        out.value = w;
      }
    }
  }
  out.singleton = out.members == 1 &&
                  detail::no_spurious(c.params.seed, "collision-psi", codeword,
                                      x_key, t0, c.codebook_f->log2_count());
  if (!out.singleton) out.value.clear();
  return out;
}

/// Phi5 on one L block: the unique x name with g-index `idx` that is
/// conditionally typical given some y name compatible with the P_Y name.
inline StageOutcome phi5_stage(const PairCodec& c, const CostModel& cost,
                               const BigInt& idx,
                               std::span<const Symbol> codeword,
                               std::span<const Symbol> py_name) {
  StageOutcome out;
  const double M = static_cast<double>(c.params.M_L);
  const double t3 = M * (c.region.h_given_y + 2.0 * c.typ());
  out.log2_fiber = c.diag.log2_phi4;
  const auto it = c.pool_L.find(idx);
  if (it != c.pool_L.end()) {
    const auto& ys = c.phi2.lookup(Word(py_name.begin(), py_name.end()));
    for (const Word& w : it->second) {
      for (const Word& y : ys) {
        if (cost.x_given_y(w, y, t3) < t3) {
          ++out.members;
          out.value = w;
          break;
        }
      }
    }
  }
  out.singleton = out.members == 1 &&
                  detail::no_spurious(c.params.seed, "collision-phi5",
                                      codeword, py_name, out.log2_fiber,
                                      c.codebook_g->log2_count());
  if (!out.singleton) out.value.clear();
  return out;
}

/// The repainted-tower stage of a round: the unique x name with head index
/// `idx` that is Hamming-close to the previous estimate where it exists and
/// conditionally typical given a compatible y name elsewhere.
inline StageOutcome round_stage(const PairCodec& c, const ImproveRound& r,
                                const CostModel& cost, const BigInt& idx,
                                std::span<const Symbol> head,
                                std::span<const Symbol> py_name,
                                std::span<const Symbol> x_old) {
  StageOutcome out;
  const std::size_t M = x_old.size();
  std::size_t known = 0;
  for (Symbol s : x_old) known += s != kAny;
  const double U = static_cast<double>(M - known);
  const double radius = r.radius;
  const double tu = U * (c.region.h_given_y + 2.0 * c.typ());
  const double ball =
      known == 0 ? 0.0
                 : log2_hamming_ball_size(known, radius * known,
                                          c.source->x_alphabet());
  out.log2_fiber =
      ball + tu +
      std::max(0.0, c.region.h_y() - std::log2(c.params.b) + c.params.eps0 +
                        c.params.eta) *
          U;
  const auto it = r.pool.find(idx);
  if (it != r.pool.end()) {
    const auto& ys = r.phi2.lookup(Word(py_name.begin(), py_name.end()));
    Word w_u;
    for (const Word& w : it->second) {
      if (known > 0) {
        std::size_t d = 0;
        for (std::size_t i = 0; i < M; ++i)
          d += x_old[i] != kAny && x_old[i] != w[i];
        if (!(static_cast<double>(d) < radius * known)) continue;
      }
      w_u = w;
      for (std::size_t i = 0; i < M; ++i)
        if (x_old[i] != kAny) w_u[i] = kAny;
      for (const Word& y : ys) {
        if (cost.x_given_y(w_u, y, tu) < tu || (U == 0.0)) {
          ++out.members;
          out.value = w;
          break;
        }
      }
    }
  }
  out.singleton =
      out.members == 1 &&
      detail::no_spurious(r.seed, "collision-round", head, py_name,
                          out.log2_fiber, r.codebook->log2_count());
  if (!out.singleton) out.value.clear();
  return out;
}

struct DecodeStats {
  std::size_t l_blocks = 0, l_singletons = 0;
  std::size_t s_blocks = 0, s_singletons = 0;
  std::vector<std::size_t> t_blocks, t_singletons;  // per round
};

struct DecodeResult {
  Word x, y;  // kAny marks an erasure
  std::vector<std::uint8_t> x_attempted, y_attempted;
  DecodeStats stats;
};

namespace detail {

struct XEstimate {
  Word x;
  std::vector<std::uint8_t> attempted;
};

inline XEstimate decode_x(const PairCodec& c, const CostModel& cost,
                          std::span<const Symbol> px,
                          std::span<const Symbol> py, std::size_t rounds,
                          DecodeStats& stats) {
  const std::size_t n = px.size();
  XEstimate est{Word(n, kAny), std::vector<std::uint8_t>(n, 0)};
  if (rounds == 0) {
    if (!c.tower_L) return est;
    const std::size_t M = c.params.M_L, ell = c.params.ell;
    for (auto base : recover_bases(px, ell)) {
      if (base + M > n) continue;
      ++stats.l_blocks;
      std::fill_n(est.attempted.begin() + base, M, 1);
      const auto cw = px.subspan(base, M - ell);
      if (!c.codebook_g->contains(cw)) continue;
      const auto out = phi5_stage(c, cost, c.codebook_g->rank(cw), cw,
                                  py.subspan(base, M));
      if (!out.singleton) continue;
      ++stats.l_singletons;
      std::copy(out.value.begin(), out.value.end(), est.x.begin() + base);
    }
    return est;
  }
  XEstimate old = decode_x(c, cost, px, py, rounds - 1, stats);
  const ImproveRound& r = c.rounds[rounds - 1];
  if (r.head == 0) return old;
  const std::size_t M = r.tower.height;
  XEstimate est_t{old.x, old.attempted};
  std::size_t blocks = 0, singles = 0;
  for (auto base : recover_bases_repaint(px, r.ell_r)) {
    if (base + M > n) continue;
    ++blocks;
    std::fill_n(est_t.attempted.begin() + base, M, 1);
    const auto head = px.subspan(base, r.head);
    if (!r.codebook->contains(head)) continue;
    const auto out =
        round_stage(c, r, cost, r.codebook->rank(head), head,
                    py.subspan(base, M),
                    std::span<const Symbol>(old.x).subspan(base, M));
    if (!out.singleton) continue;
    ++singles;
    std::copy(out.value.begin(), out.value.end(), est_t.x.begin() + base);
  }
  stats.t_blocks.push_back(blocks);
  stats.t_singletons.push_back(singles);
  return est_t;
}

}  // namespace detail

/// Reconstructs (x, y) from the two coded tracks and the codec's maps.
/// Reads nothing else; failures are erasures.
inline DecodeResult decode(const PairCodec& c, const SymbolTrack& p_x,
                           const SymbolTrack& p_y) {
  if (p_x.size() != p_y.size()) throw Error("decode: track lengths differ");
  const CostModel cost(c.source);
  const std::span<const Symbol> px(p_x.values), py(p_y.values);
  const std::size_t n = px.size();
  DecodeResult res;
  auto xe = detail::decode_x(c, cost, px, py, c.rounds.size(), res.stats);
  res.x = std::move(xe.x);
  res.x_attempted = std::move(xe.attempted);
  res.y.assign(n, kAny);
  res.y_attempted.assign(n, 0);
  if (c.tower_S) {
    const std::size_t M = c.params.M_S, ell = c.params.ell;
    for (auto base : recover_bases(py, ell)) {
      if (base + M > n) continue;
      ++res.stats.s_blocks;
      std::fill_n(res.y_attempted.begin() + base, M, 1);
      const auto cw = py.subspan(base, M - ell);
      if (!c.codebook_f->contains(cw)) continue;
      const auto out =
          psi_stage(c, cost, c.codebook_f->rank(cw), cw,
                    std::span<const Symbol>(res.x).subspan(base, M));
      if (!out.singleton) continue;
      ++res.stats.s_singletons;
      std::copy(out.value.begin(), out.value.end(), res.y.begin() + base);
    }
  }
  return res;
}

struct ReconstructionReport {
  std::size_t positions = 0;
  std::size_t erasures = 0;       // positions with an erased coordinate
  std::size_t disagreements = 0;  // other positions with a wrong coordinate
  double error_frac = 0.0;
  double x_error_frac = 0.0;
  double y_error_frac = 0.0;
  std::size_t off_tower = 0;    // failed outside every recovered block
  std::size_t phi5_failed = 0;  // x failed inside an L / T block
  std::size_t psi_failed = 0;   // y failed inside an S block
  DecodeStats stats;
};

inline ReconstructionReport reconstruction_report(const DecodeResult& d,
                                                  const Orbit& truth) {
  if (d.x.size() != truth.size()) throw Error("report: length mismatch");
  ReconstructionReport r;
  r.positions = truth.size();
  r.stats = d.stats;
  std::size_t xbad = 0, ybad = 0;
  for (std::size_t i = 0; i < r.positions; ++i) {
    const bool xe = d.x[i] == kAny, ye = d.y[i] == kAny;
    const bool xw = !xe && d.x[i] != truth.x[i];
    const bool yw = !ye && d.y[i] != truth.y[i];
    const bool xf = xe || xw, yf = ye || yw;
    xbad += xf;
    ybad += yf;
    if (xe || ye) {
      ++r.erasures;
    } else if (xw || yw) {
      ++r.disagreements;
    }
    if ((xf && !d.x_attempted[i]) || (yf && !d.y_attempted[i])) ++r.off_tower;
    if (xf && d.x_attempted[i]) ++r.phi5_failed;
    if (yf && d.y_attempted[i]) ++r.psi_failed;
  }
  if (r.positions) {
    const auto n = static_cast<double>(r.positions);
    r.error_frac = static_cast<double>(r.erasures + r.disagreements) / n;
    r.x_error_frac = static_cast<double>(xbad) / n;
    r.y_error_frac = static_cast<double>(ybad) / n;
  }
  return r;
}

/// Builds the pair (P_X, P_Y) and the decoder maps along a training orbit.
inline PairCodec build_pair(const Orbit& orbit, const JointSource& source,
                            const PairParams& params) {
  params.validate();
  if (orbit.x_alphabet != source.x_alphabet() ||
      orbit.y_alphabet != source.y_alphabet())
    throw Error("build_pair: orbit alphabets do not match the source");
  PairCodec c;
  c.params = params;
  c.source = std::make_shared<const JointSource>(source);
  c.region = rate_region(source);
  c.warnings = region_warnings(c.region, params.a, params.b, params.eta,
                               params.eps0);
  const CostModel cost(c.source);
  const std::size_t n = orbit.size();
  const unsigned kx = source.x_alphabet(), ky = source.y_alphabet();
  const SymbolTrack xt{orbit.x, kx}, yt{orbit.y, ky};
  const double typ = params.typ_slack, eta = params.eta;
  auto& d = c.diag;

  auto make_tower = [&](Scope scope, std::size_t M, double cov,
                        std::string_view label) {
    Tower t = build_tower(orbit, scope, M, params.marker_window, cov,
                          derive_seed(params.seed, label));
    const auto blocks = t.complete_blocks();
    if (blocks == 0) throw Error("build_pair: tower has no complete blocks");
    if (blocks < params.min_blocks)
      throw Error("build_pair: orbit too short for the minimum block count");
    return t;
  };

  // Tower S and P_Y.
  c.p_y = SymbolTrack{std::vector<Symbol>(n, 0), params.b};
  if (params.b >= 2) {
    const std::size_t M = params.M_S;
    c.tower_S = make_tower(Scope::y_only, M, params.coverage_S, "tower-S");
    const Tower& S = *c.tower_S;
    d.coverage_S = S.coverage;
    const auto yn = names_along_tower(S, yt).names;
    const auto xn = names_along_tower(S, xt).names;
    d.s_blocks = yn.size();

    c.codebook_f =
        std::make_shared<const AdmissibleCodebook>(M - params.ell, params.ell, params.b);
    c.f.emplace(ky, M, c.codebook_f, derive_seed(params.seed, "paint-f"));
    d.log2_count_f = c.codebook_f->log2_count();

    std::vector<BigInt> idx(yn.size());
    std::vector<BaseName> words;
    for (std::size_t k = 0; k < yn.size(); ++k) {
      idx[k] = c.f->index_of(yn[k].second);
      words.emplace_back(yn[k].first, c.codebook_f->unrank(idx[k]));
      detail::pool_add(c.pool_S, idx[k], yn[k].second);
    }
    c.p_y = paint_codewords(S, words, params.ell, params.b);

    const double Md = static_cast<double>(M);
    const auto model_y = coordinate_pair_model(*c.source, c.region, 1);
    std::size_t typical = 0, phi1 = 0;
    const double log2_n = Md * (c.region.h_y() + eta);
    const double phi1_bound =
        Md * (c.region.h_y() - std::log2(params.b) + 2.0 * eta);
    for (std::size_t k = 0; k < yn.size(); ++k) {
      const bool in_n = -model_y.p_model(yn[k].second) < Md * (c.region.h_y() + typ);
      typical += in_n;
      if (!in_n) continue;
      const double others =
          std::exp2(std::min(1000.0, log2_n - d.log2_count_f));
      phi1 += static_cast<double>(c.pool_S[idx[k]].size()) + others <
              std::exp2(std::min(1000.0, phi1_bound));
    }
    d.n_typical_frac = yn.empty() ? 0.0 : double(typical) / yn.size();
    d.phi1_frac = yn.empty() ? 0.0 : double(phi1) / yn.size();

    const auto model_x = coordinate_pair_model(*c.source, c.region, 0);
    auto cm = conditional_name_map(S, xt, yt, model_x, typ);
    d.phi0_coverage = cm.coverage;
    c.phi0 = std::move(cm.map);

    std::size_t ok = 0;
    for (std::size_t k = 0; k < yn.size(); ++k) {
      const auto cw = std::span<const Symbol>(words[k].second);
      const auto out = psi_stage(c, cost, idx[k], cw, xn[k].second);
      ok += out.singleton && out.value == yn[k].second;
    }
    d.psi_singleton_frac = yn.empty() ? 0.0 : double(ok) / yn.size();
  }

  // Tower L and P_X.
  c.p_x = SymbolTrack{std::vector<Symbol>(n, 0), params.a};
  if (params.a >= 2) {
    const std::size_t M = params.M_L;
    const double Md = static_cast<double>(M);
    c.tower_L = make_tower(Scope::x_only, M, params.coverage_L, "tower-L");
    const Tower& L = *c.tower_L;
    d.coverage_L = L.coverage;
    const auto xn = names_along_tower(L, xt).names;
    const auto yn = names_along_tower(L, yt).names;
    const auto pn = names_along_tower(L, c.p_y).names;
    d.l_blocks = xn.size();

    const double log2_phi2 =
        Md * std::max(0.0, c.region.h_y() - std::log2(params.b) +
                               2.0 * eta * (std::log2(ky) + 2.0) +
                               binary_entropy(eta));
    std::vector<Word> keys, values;
    for (std::size_t k = 0; k < pn.size(); ++k) {
      keys.push_back(pn[k].second);
      values.push_back(yn[k].second);
    }
    c.phi2 = observed_name_map(keys, values, log2_phi2);
    d.log2_phi4 = log2_phi2 + Md * (c.region.h_given_y + 2.0 * typ);

    const auto model_y = coordinate_pair_model(*c.source, c.region, 1);
    auto cm = conditional_name_map(L, yt, xt, model_y, typ);
    d.phi3_coverage = cm.coverage;
    c.phi3 = std::move(cm.map);

    c.codebook_g =
        std::make_shared<const AdmissibleCodebook>(M - params.ell, params.ell, params.a);
    c.g.emplace(kx, M, c.codebook_g, derive_seed(params.seed, "paint-g"));
    d.log2_count_g = c.codebook_g->log2_count();

    std::vector<BigInt> idx(xn.size());
    std::vector<BaseName> words;
    for (std::size_t k = 0; k < xn.size(); ++k) {
      idx[k] = c.g->index_of(xn[k].second);
      words.emplace_back(xn[k].first, c.codebook_g->unrank(idx[k]));
      detail::pool_add(c.pool_L, idx[k], xn[k].second);
    }
    c.p_x = paint_codewords(L, words, params.ell, params.a);

    std::size_t ok = 0;
    for (std::size_t k = 0; k < xn.size(); ++k) {
      const auto out =
          phi5_stage(c, cost, idx[k], words[k].second, pn[k].second);
      ok += out.singleton && out.value == xn[k].second;
    }
    d.phi5_singleton_frac = xn.empty() ? 0.0 : double(ok) / xn.size();
  }

  d.h_px = detail::track_entropy(c.p_x);
  d.h_py = detail::track_entropy(c.p_y);
  return c;
}

/// Codes a fresh orbit with a trained codec: same marker rules, same
/// painting data. Improvement rounds are not replayed.
inline std::pair<SymbolTrack, SymbolTrack> encode(const PairCodec& c,
                                                  const Orbit& orbit) {
  if (!c.rounds.empty())
    throw Error("encode: codecs with improvement rounds cannot be replayed");
  const std::size_t n = orbit.size();
  SymbolTrack px{std::vector<Symbol>(n, 0), c.params.a};
  SymbolTrack py{std::vector<Symbol>(n, 0), c.params.b};
  if (c.tower_S) {
    const Tower S = apply_marker_rule(orbit, c.tower_S->rule);
    py = paint(S, names_along_tower(S, SymbolTrack{orbit.y, orbit.y_alphabet}),
               *c.f, c.params.ell);
  }
  if (c.tower_L) {
    const Tower L = apply_marker_rule(orbit, c.tower_L->rule);
    px = paint(L, names_along_tower(L, SymbolTrack{orbit.x, orbit.x_alphabet}),
               *c.g, c.params.ell);
  }
  return {std::move(px), std::move(py)};
}

struct ImproveReport {
  double fraction = 0.0;
  std::size_t head = 0;
  std::size_t ell_r = 0;
  std::size_t height = 0;
  double coverage_T = 0.0;
  double distance = 0.0;
  double bound = 0.0;  // fraction + 2 ell_r / M + (1 - coverage)
  double error_before = 0.0;
  double error_after = 0.0;
  double t_singleton_frac = 0.0;
  double h_px = 0.0;
};

struct ImproveResult {
  SymbolTrack p_x;
  ImproveReport report;
};

/// One repainting round: repaints the first floor(fraction M_T) levels of a
/// fresh x-only tower T, keeps P_X on the middle zone and zeroes a 2 ell_r
/// tail, where ell_r exceeds the longest closed zero run of the current P_X. The
/// codec is updated in place (new P_X, round appended to the decoder).
/// fraction == 0 is the diagnostic mode: no tails, no new decoder stage.
inline ImproveResult improve_pair(PairCodec& c, const Orbit& orbit,
                                  double fraction) {
  if (!c.tower_L || c.params.a < 2)
    throw Error("improve_pair: needs a painted P_X (a >= 2)");
  if (orbit.size() != c.p_x.size())
    throw Error("improve_pair: orbit length differs from the codec tracks");
  if (!(fraction >= 0.0 && fraction <= 1.0))
    throw Error("improve_pair: fraction must be in [0, 1]");
  const auto& p = c.params;
  const std::size_t M = p.M_T;
  const std::size_t round_no = c.rounds.size();
  const std::uint64_t seed =
      derive_seed(p.seed, "round-" + std::to_string(round_no));
  const bool diagnostic = fraction == 0.0;
  const std::size_t ell_r =
      diagnostic ? 0 : std::max(p.ell, longest_closed_zero_run(c.p_x.values) + 1);
  const RepaintZones z = repaint_zones(M, fraction, ell_r);

  ImproveResult res;
  auto& rep = res.report;
  rep.fraction = fraction;
  rep.head = z.head;
  rep.ell_r = ell_r;
  rep.height = M;
  rep.error_before =
      reconstruction_report(decode(c, c.p_x, c.p_y), orbit).error_frac;

  ImproveRound r;
  r.fraction = fraction;
  r.head = z.head;
  r.ell_r = ell_r;
  r.radius = p.improve_eps + p.eta;
  r.seed = seed;
  r.tower = build_tower(orbit, Scope::x_only, M, p.marker_window, p.coverage_T,
                        derive_seed(seed, "tower-T"));
  if (r.tower.complete_blocks() == 0)
    throw Error("improve_pair: tower has no complete blocks");
  rep.coverage_T = r.tower.coverage;
  const SymbolTrack xt{orbit.x, orbit.x_alphabet};
  const SymbolTrack yt{orbit.y, orbit.y_alphabet};
  const auto xn = names_along_tower(r.tower, xt).names;

  if (z.head > 0) {
    r.codebook =
        std::make_shared<const AdmissibleCodebook>(z.head, ell_r, p.a);
    const PaintingData psi(orbit.x_alphabet, M, r.codebook,
                           derive_seed(seed, "paint-psi"));
    std::vector<BaseName> heads;
    for (const auto& [base, name] : xn) {
      const BigInt idx = psi.index_of(name);
      heads.emplace_back(base, r.codebook->unrank(idx));
      detail::pool_add(r.pool, idx, name);
    }
    res.p_x = repaint_codewords(r.tower, c.p_x, heads, fraction, ell_r, p.a);
    const auto yn = names_along_tower(r.tower, yt).names;
    const auto pn = names_along_tower(r.tower, c.p_y).names;
    std::vector<Word> keys, values;
    for (std::size_t k = 0; k < pn.size(); ++k) {
      keys.push_back(pn[k].second);
      values.push_back(yn[k].second);
    }
    const double Md = static_cast<double>(M);
    r.phi2 = observed_name_map(
        keys, values,
        Md * std::max(0.0, c.region.h_y() - std::log2(p.b) + p.eps0 + p.eta));
  } else {
    res.p_x = repaint(r.tower, c.p_x, xn, nullptr, 0.0, 0);
  }

  rep.distance = partition_distance(res.p_x, c.p_x);
  rep.bound = fraction + 2.0 * static_cast<double>(ell_r) / M +
              (1.0 - rep.coverage_T);
  c.rounds.push_back(std::move(r));
  c.p_x = res.p_x;
  const auto after = reconstruction_report(decode(c, c.p_x, c.p_y), orbit);
  rep.error_after = after.error_frac;
  if (!after.stats.t_blocks.empty() && after.stats.t_blocks.back() > 0)
    rep.t_singleton_frac = double(after.stats.t_singletons.back()) /
                           after.stats.t_blocks.back();
  rep.h_px = detail::track_entropy(c.p_x);
  return res;
}

/// One CSV row of a simulation or sweep cell.
struct ExperimentRow {
  std::string source_kind;
  unsigned x_alphabet = 0, y_alphabet = 0;
  double h = 0.0, h_given_x = 0.0, h_given_y = 0.0;
  unsigned a = 0, b = 0;
  std::size_t M_S = 0, M_L = 0, ell = 0;
  double eta = 0.0;
  double coverage_S = 0.0, coverage_L = 0.0;
  double psi_singleton_frac = 0.0, phi5_singleton_frac = 0.0;
  double error_frac = 1.0;
  double runtime_ms = 0.0;
  std::string status = "ok";
};

inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols{
      "source_kind", "x_alphabet", "y_alphabet", "h", "h_given_x",
      "h_given_y", "a", "b", "M_S", "M_L", "ell", "eta", "coverage_S",
      "coverage_L", "psi_singleton_frac", "phi5_singleton_frac", "error_frac",
      "runtime_ms", "status"};
  return cols;
}

inline std::string csv_header() {
  std::string s;
  for (const auto& c : csv_columns()) s += (s.empty() ? "" : ",") + c;
  return s;
}

inline std::string csv_line(const ExperimentRow& r) {
  auto num = [](double v) { return format_number(v); };
  std::string status = r.status;
  std::replace(status.begin(), status.end(), ',', ';');
  return r.source_kind + "," + std::to_string(r.x_alphabet) + "," +
         std::to_string(r.y_alphabet) + "," + num(r.h) + "," +
         num(r.h_given_x) + "," + num(r.h_given_y) + "," +
         std::to_string(r.a) + "," + std::to_string(r.b) + "," +
         std::to_string(r.M_S) + "," + std::to_string(r.M_L) + "," +
         std::to_string(r.ell) + "," + num(r.eta) + "," + num(r.coverage_S) +
         "," + num(r.coverage_L) + "," + num(r.psi_singleton_frac) + "," +
         num(r.phi5_singleton_frac) + "," + num(r.error_frac) + "," +
         num(r.runtime_ms) + "," + status;
}

inline ExperimentRow make_row(const JointSource& src, const RateRegion& region,
                              const PairParams& p) {
  ExperimentRow r;
  r.source_kind = std::string(to_string(src.kind()));
  r.x_alphabet = src.x_alphabet();
  r.y_alphabet = src.y_alphabet();
  r.h = region.h;
  r.h_given_x = region.h_given_x;
  r.h_given_y = region.h_given_y;
  r.a = p.a;
  r.b = p.b;
  r.M_S = p.M_S;
  r.M_L = p.M_L;
  r.ell = p.ell;
  r.eta = p.eta;
  return r;
}

/// build_pair + decode on the training orbit (or on `test` when given).
inline ExperimentRow run_cell(const JointSource& src, const Orbit& train,
                              const PairParams& p,
                              const Orbit* test = nullptr) {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentRow row = make_row(src, rate_region(src), p);
  try {
    const PairCodec c = build_pair(train, src, p);
    row.coverage_S = c.diag.coverage_S;
    row.coverage_L = c.diag.coverage_L;
    row.psi_singleton_frac = c.diag.psi_singleton_frac;
    row.phi5_singleton_frac = c.diag.phi5_singleton_frac;
    if (test) {
      const auto [px, py] = encode(c, *test);
      row.error_frac =
          reconstruction_report(decode(c, px, py), *test).error_frac;
    } else {
      row.error_frac =
          reconstruction_report(decode(c, c.p_x, c.p_y), train).error_frac;
    }
  } catch (const std::exception& e) {
    row.status = std::string("error: ") + e.what();
  }
  row.runtime_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
  return row;
}

struct SweepCell {
  unsigned a = 2;
  unsigned b = 2;
};

/// Runs one cell per (a, b) on a shared orbit. Cell seeds are derived from
/// the master seed and the cell; failures are recorded in the status column.
inline std::vector<ExperimentRow> rate_region_experiment(
    const JointSource& src, const Orbit& orbit,
    const std::vector<SweepCell>& grid, const PairParams& base,
    unsigned threads = 1, const Orbit* test = nullptr) {
  std::vector<ExperimentRow> rows(grid.size());
  const unsigned workers = std::max(1u, threads);
  std::vector<std::future<void>> jobs;
  for (unsigned w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < grid.size(); i += workers) {
        PairParams p = base;
        p.a = grid[i].a;
        p.b = grid[i].b;
        p.seed = derive_seed(base.seed, "cell-" + std::to_string(p.a) + "-" +
                                            std::to_string(p.b));
        rows[i] = run_cell(src, orbit, p, test);
      }
    }));
  }
  for (auto& j : jobs) j.get();
  return rows;
}

}  // namespace swgen
