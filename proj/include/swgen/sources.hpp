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

// Stationary correlated pair sources over finite alphabets, their entropy
// rates, exact name probabilities and orbit sampling.
//
// A pair state is indexed s = x * y_alphabet + y throughout.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "swgen/common.hpp"
#include "swgen/rng.hpp"

namespace swgen {

using Matrix = std::vector<std::vector<double>>;

enum class SourceKind { iid_pair, joint_markov };

inline std::string_view to_string(SourceKind k) {
  return k == SourceKind::iid_pair ? "iid-pair" : "joint-markov";
}

namespace detail {

inline void check_distribution_row(std::span<const double> row,
                                   const std::string& what) {
  double sum = 0.0;
  for (double p : row) {
    if (!(p >= 0.0) || p > 1.0)
      throw Error(what + ": probability outside [0,1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw Error(what + ": probabilities sum to " + std::to_string(sum) +
                ", expected 1");
}

// States reachable from `from` along positive-probability transitions.
inline std::vector<bool> reachable(const Matrix& p, std::size_t from) {
  std::vector<bool> seen(p.size(), false);
  std::vector<std::size_t> stack{from};
  seen[from] = true;
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    for (std::size_t v = 0; v < p.size(); ++v) {
      if (p[u][v] > 0.0 && !seen[v]) {
        seen[v] = true;
        stack.push_back(v);
      }
    }
  }
  return seen;
}

inline bool is_irreducible(const Matrix& p) {
  for (std::size_t s = 0; s < p.size(); ++s) {
    const auto seen = reachable(p, s);
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) return false;
  }
  return true;
}

// Period of an irreducible chain: gcd of level differences along edges of a
// BFS tree.
inline std::size_t period(const Matrix& p) {
  const std::size_t n = p.size();
  std::vector<long> level(n, -1);
  std::vector<std::size_t> queue{0};
  level[0] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t u = queue[head];
    for (std::size_t v = 0; v < n; ++v) {
      if (p[u][v] > 0.0 && level[v] < 0) {
        level[v] = level[u] + 1;
        queue.push_back(v);
      }
    }
  }
  long g = 0;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      if (p[u][v] > 0.0) g = std::gcd(g, std::abs(level[u] + 1 - level[v]));
  return static_cast<std::size_t>(g);
}

inline double xlog2x(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

}  // namespace detail

/// Unique stationary distribution of an irreducible transition matrix.
/// Throws Error("no unique stationary distribution") for reducible chains.
inline std::vector<double> stationary_distribution(const Matrix& p) {
  const std::size_t n = p.size();
  if (n == 0) throw Error("empty transition matrix");
  for (std::size_t i = 0; i < n; ++i) {
    if (p[i].size() != n) throw Error("transition matrix is not square");
    detail::check_distribution_row(p[i], "transition row " + std::to_string(i));
  }
  if (!detail::is_irreducible(p))
    throw Error("no unique stationary distribution (reducible chain)");

  // (P^T - I) pi = 0 with the last equation replaced by sum(pi) = 1.
  Eigen::MatrixXd a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          p[j][i] - (i == j ? 1.0 : 0.0);
  a.row(static_cast<Eigen::Index>(n - 1)).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  rhs(static_cast<Eigen::Index>(n - 1)) = 1.0;
  const Eigen::VectorXd sol = a.fullPivLu().solve(rhs);

  std::vector<double> pi(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    pi[i] = std::max(0.0, sol(static_cast<Eigen::Index>(i)));
    sum += pi[i];
  }
  for (double& v : pi) v /= sum;
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += pi[i] * p[i][j];
    if (std::abs(s - pi[j]) > 1e-10)
      throw Error("stationary solve did not converge");
  }
  return pi;
}

/// A stationary pair process (X_i, Y_i) over alphabets [0,kx) x [0,ky).
class JointSource {
 public:
  static JointSource iid_pair(unsigned kx, unsigned ky, const Matrix& joint) {
    check_alphabets(kx, ky);
    if (joint.size() != kx) throw Error("joint table: expected kx rows");
    JointSource s(SourceKind::iid_pair, kx, ky);
    s.pair_probs_.reserve(kx * ky);
    for (const auto& row : joint) {
      if (row.size() != ky) throw Error("joint table: expected ky columns");
      s.pair_probs_.insert(s.pair_probs_.end(), row.begin(), row.end());
    }
    detail::check_distribution_row(s.pair_probs_, "joint table");
    s.stationary_ = s.pair_probs_;
    return s;
  }

  static JointSource joint_markov(unsigned kx, unsigned ky,
                                  const Matrix& transition) {
    check_alphabets(kx, ky);
    if (transition.size() != static_cast<std::size_t>(kx) * ky)
      throw Error("transition matrix must be (kx*ky) x (kx*ky)");
    JointSource s(SourceKind::joint_markov, kx, ky);
    s.transition_ = transition;
    s.stationary_ = stationary_distribution(transition);
    if (detail::period(transition) != 1)
      throw Error("joint-markov chain must be aperiodic");
    return s;
  }

  SourceKind kind() const { return kind_; }
  unsigned x_alphabet() const { return kx_; }
  unsigned y_alphabet() const { return ky_; }
  std::size_t states() const { return static_cast<std::size_t>(kx_) * ky_; }
  std::size_t state(Symbol x, Symbol y) const {
    return static_cast<std::size_t>(x) * ky_ + y;
  }

  /// Pair probabilities (iid-pair only), row-major in x.
  const std::vector<double>& pair_probs() const { return pair_probs_; }
  const Matrix& transition() const { return transition_; }
  /// Stationary law of a single pair symbol.
  const std::vector<double>& stationary() const { return stationary_; }

  std::vector<double> marginal_x() const {
    std::vector<double> m(kx_, 0.0);
    for (std::size_t s = 0; s < states(); ++s) m[s / ky_] += stationary_[s];
    return m;
  }
  std::vector<double> marginal_y() const {
    std::vector<double> m(ky_, 0.0);
    for (std::size_t s = 0; s < states(); ++s) m[s % ky_] += stationary_[s];
    return m;
  }

 private:
  JointSource(SourceKind kind, unsigned kx, unsigned ky)
      : kind_(kind), kx_(kx), ky_(ky) {}

  static void check_alphabets(unsigned kx, unsigned ky) {
    if (kx < 2 || ky < 2) throw Error("alphabet sizes must be >= 2");
    if (kx > 64 || ky > 64) throw Error("alphabet sizes above 64 unsupported");
  }

  SourceKind kind_;
  unsigned kx_;
  unsigned ky_;
  std::vector<double> pair_probs_;
  Matrix transition_;
  std::vector<double> stationary_;
};

/// X uniform bit, Y = X xor Bernoulli(crossover).
inline JointSource make_dsbs(double crossover) {
  const double same = (1.0 - crossover) / 2.0, diff = crossover / 2.0;
  return JointSource::iid_pair(2, 2, {{same, diff}, {diff, same}});
}

inline JointSource make_independent_uniform(unsigned kx = 2, unsigned ky = 2) {
  const double p = 1.0 / (kx * ky);
  return JointSource::iid_pair(kx, ky, Matrix(kx, std::vector<double>(ky, p)));
}

/// X ~ Bernoulli(p_one) and Y = X.
inline JointSource make_identical_bits(double p_one) {
  return JointSource::iid_pair(2, 2, {{1.0 - p_one, 0.0}, {0.0, p_one}});
}

enum class RateMethod { exact, estimated };

inline std::string_view to_string(RateMethod m) {
  return m == RateMethod::exact ? "exact" : "estimated";
}

/// The three rates that delimit the achievable region: h(T), h(T|F_X) and
/// h(T|F_Y), in bits per symbol.
struct RateRegion {
  double h = 0.0;
  double h_given_x = 0.0;
  double h_given_y = 0.0;
  RateMethod method = RateMethod::exact;
  unsigned block_length = 0;  // block length k behind estimated entries

  /// Entropy rate of the X process alone.
  double h_x() const { return h - h_given_x; }
  double h_y() const { return h - h_given_y; }
};

/// Block entropies H(X_1..X_k) (coordinate 0) or H(Y_1..Y_k) (coordinate 1)
/// for k = 0..kmax, computed exactly by enumerating words with the forward
/// recursion of the pair chain.
inline std::vector<double> marginal_block_entropies(const JointSource& src,
                                                    int coordinate,
                                                    unsigned kmax) {
  const std::size_t S = src.states();
  const unsigned alphabet =
      coordinate == 0 ? src.x_alphabet() : src.y_alphabet();
  auto symbol_of = [&](std::size_t s) -> unsigned {
    return coordinate == 0 ? static_cast<unsigned>(s / src.y_alphabet())
                           : static_cast<unsigned>(s % src.y_alphabet());
  };
  std::vector<double> h(kmax + 1, 0.0);
  const bool markov = src.kind() == SourceKind::joint_markov;

  // Depth-first over prefixes; alpha[d] holds the forward vector at depth d.
  std::vector<std::vector<double>> alpha(kmax + 1, std::vector<double>(S));
  std::vector<unsigned> next_symbol(kmax + 1, 0);
  std::size_t depth = 0;  // alpha[depth] is valid for the current prefix
  alpha[0] = src.stationary();
  while (true) {
    if (depth == kmax || next_symbol[depth] == alphabet) {
      if (depth == 0) break;
      --depth;
      continue;
    }
    const unsigned sym = next_symbol[depth]++;
    auto& out = alpha[depth + 1];
    const auto& in = alpha[depth];
    double prev_mass = 0.0;
    for (double v : in) prev_mass += v;
    double mass = 0.0;
    for (std::size_t t = 0; t < S; ++t) {
      double v = 0.0;
      if (symbol_of(t) == sym) {
        if (depth == 0) {
          v = src.stationary()[t];
        } else if (!markov) {
          v = prev_mass * src.stationary()[t];
        } else {
          for (std::size_t s = 0; s < S; ++s)
            v += in[s] * src.transition()[s][t];
        }
      }
      out[t] = v;
      mass += v;
    }
    if (mass <= 0.0) continue;
    h[depth + 1] -= detail::xlog2x(mass);
    ++depth;
    next_symbol[depth] = 0;
  }
  return h;
}

/// Largest block length k <= cap whose (k+1)-blocks can be enumerated within
/// a budget of 2^22 words.
inline unsigned feasible_block_length(unsigned alphabet, unsigned cap) {
  unsigned k = 0;
  double words = alphabet;  // alphabet^(k+1)
  while (k < cap && words * alphabet <= double(1u << 22)) {
    ++k;
    words *= alphabet;
  }
  return k;
}

/// Conditional-entropy estimates h_k = H(k+1) - H(k), k = 0..kmax.
inline std::vector<double> marginal_rate_estimates(const JointSource& src,
                                                   int coordinate,
                                                   unsigned kmax) {
  const auto blocks = marginal_block_entropies(src, coordinate, kmax + 1);
  std::vector<double> rates(kmax + 1);
  for (unsigned k = 0; k <= kmax; ++k) rates[k] = blocks[k + 1] - blocks[k];
  return rates;
}

inline RateRegion rate_region(const JointSource& src, unsigned block_cap = 12) {
  RateRegion r;
  if (src.kind() == SourceKind::iid_pair) {
    double hxy = 0.0, hx = 0.0, hy = 0.0;
    for (double p : src.pair_probs()) hxy -= detail::xlog2x(p);
    for (double p : src.marginal_x()) hx -= detail::xlog2x(p);
    for (double p : src.marginal_y()) hy -= detail::xlog2x(p);
    r.h = hxy;
    r.h_given_x = hxy - hx;
    r.h_given_y = hxy - hy;
    r.method = RateMethod::exact;
    return r;
  }
  const auto& pi = src.stationary();
  const auto& p = src.transition();
  for (std::size_t i = 0; i < pi.size(); ++i)
    for (double pij : p[i]) r.h -= pi[i] * detail::xlog2x(pij);

  const unsigned kx = feasible_block_length(src.x_alphabet(), block_cap);
  const unsigned ky = feasible_block_length(src.y_alphabet(), block_cap);
  const double hx = marginal_rate_estimates(src, 0, kx).back();
  const double hy = marginal_rate_estimates(src, 1, ky).back();
  r.h_given_x = std::clamp(r.h - hx, 0.0, r.h);
  r.h_given_y = std::clamp(r.h - hy, 0.0, r.h);
  r.method = RateMethod::estimated;
  r.block_length = std::min(kx, ky);
  return r;
}

/// log2 of the probability that a stationary run of the source shows the
/// given x and y words (same length; kAny entries are unconstrained).
inline double log2_prob(const JointSource& src, std::span<const Symbol> xs,
                        std::span<const Symbol> ys) {
  if (xs.size() != ys.size()) throw Error("log2_prob: word length mismatch");
  const unsigned ky = src.y_alphabet();
  const std::size_t S = src.states();
  auto allowed = [&](std::size_t i, std::size_t s) {
    return (xs[i] == kAny || xs[i] == s / ky) &&
           (ys[i] == kAny || ys[i] == s % ky);
  };

  if (src.kind() == SourceKind::iid_pair) {
    double lp = 0.0;
    const auto& probs = src.pair_probs();
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (xs[i] == kAny && ys[i] == kAny) continue;
      double p = 0.0;
      for (std::size_t s = 0; s < S; ++s)
        if (allowed(i, s)) p += probs[s];
      if (p <= 0.0) return -std::numeric_limits<double>::infinity();
      lp += std::log2(p);
    }
    return lp;
  }

  // Scaled forward recursion over pair states.
  std::vector<double> alpha(S), next(S);
  double lp = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double mass = 0.0;
    for (std::size_t t = 0; t < S; ++t) {
      double v = 0.0;
      if (allowed(i, t)) {
        if (i == 0) {
          v = src.stationary()[t];
        } else {
          for (std::size_t s = 0; s < S; ++s)
            v += alpha[s] * src.transition()[s][t];
        }
      }
      next[t] = v;
      mass += v;
    }
    if (mass <= 0.0) return -std::numeric_limits<double>::infinity();
    lp += std::log2(mass);
    for (std::size_t t = 0; t < S; ++t) alpha[t] = next[t] / mass;
  }
  return lp;
}

/// One sampled trajectory; the finite stand-in for the measure space.
struct Orbit {
  unsigned x_alphabet = 2;
  unsigned y_alphabet = 2;
  std::uint64_t seed = 0;
  std::vector<Symbol> x;
  std::vector<Symbol> y;

  std::size_t size() const { return x.size(); }
  friend bool operator==(const Orbit&, const Orbit&) = default;
};

namespace detail {
inline std::size_t draw(Rng& rng, std::span<const double> cumulative) {
  const double u = rng.uniform();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  const auto idx = static_cast<std::size_t>(it - cumulative.begin());
  // Guard against rounding in the last cumulative entry.
  std::size_t i = std::min(idx, cumulative.size() - 1);
  while (i > 0 && cumulative[i] == cumulative[i - 1]) --i;
  return i;
}
inline std::vector<double> cumulative(std::span<const double> p) {
  std::vector<double> c(p.size());
  std::partial_sum(p.begin(), p.end(), c.begin());
  c.back() = 1.0;
  return c;
}
}  // namespace detail

inline Orbit sample_orbit(const JointSource& src, std::size_t n,
                          std::uint64_t seed) {
  if (n < 1) throw Error("sample_orbit: n must be >= 1");
  Orbit o;
  o.x_alphabet = src.x_alphabet();
  o.y_alphabet = src.y_alphabet();
  o.seed = seed;
  o.x.resize(n);
  o.y.resize(n);
  Rng rng(seed);
  const unsigned ky = src.y_alphabet();
  const auto start = detail::cumulative(src.stationary());
  std::vector<std::vector<double>> rows;
  if (src.kind() == SourceKind::joint_markov) {
    for (const auto& row : src.transition())
      rows.push_back(detail::cumulative(row));
  }
  std::size_t s = detail::draw(rng, start);
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0)
      s = src.kind() == SourceKind::iid_pair ? detail::draw(rng, start)
                                             : detail::draw(rng, rows[s]);
    o.x[i] = static_cast<Symbol>(s / ky);
    o.y[i] = static_cast<Symbol>(s % ky);
  }
  return o;
}

}  // namespace swgen
