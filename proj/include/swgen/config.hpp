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

// JSON configuration: sources, partitions, towers, pair parameters and
// whole experiment configs. Parsing is strict: unknown fields and wrong
// types are errors naming the offending field.

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "json.hpp"
#include "swgen/common.hpp"
#include "swgen/partitions.hpp"
#include "swgen/sources.hpp"
#include "swgen/swcodec.hpp"
#include "swgen/towers.hpp"

namespace swgen {

using Json = nlohmann::json;

class ConfigError : public Error {
 public:
  using Error::Error;
};

namespace detail {

class JsonReader {
 public:
  JsonReader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where("") + ": expected an object");
  }

  void only(std::initializer_list<const char*> allowed) const {
    for (const auto& item : j_.items()) {
      bool ok = false;
      for (const char* k : allowed) ok = ok || item.key() == k;
      if (!ok) throw ConfigError(where(item.key()) + ": unknown field");
    }
  }

  bool has(const char* key) const { return j_.contains(key); }

  const Json& raw(const char* key) const {
    if (!j_.contains(key)) throw ConfigError(where(key) + ": missing field");
    return j_.at(key);
  }

  JsonReader object(const char* key) const { return {raw(key), where(key)}; }

  template <class T>
  T get(const char* key) const {
    return convert<T>(raw(key), where(key));
  }

  template <class T>
  T get_or(const char* key, T fallback) const {
    return has(key) ? get<T>(key) : fallback;
  }

  std::string where(const std::string& key) const {
    if (key.empty()) return "config field '" + path_ + "'";
    return "config field '" + (path_.empty() ? key : path_ + "." + key) + "'";
  }

  template <class T>
  static T convert(const Json& v, const std::string& where) {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError(where + ": expected a boolean");
      return v.get<bool>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError(where + ": expected a string");
      return v.get<std::string>();
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError(where + ": expected a number");
      return v.get<T>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_unsigned())
        throw ConfigError(where + ": expected a nonnegative integer");
      return static_cast<T>(v.get<std::uint64_t>());
    } else if constexpr (std::is_same_v<T, Matrix>) {
      if (!v.is_array()) throw ConfigError(where + ": expected an array of rows");
      Matrix m;
      for (const auto& row : v) {
        if (!row.is_array()) throw ConfigError(where + ": expected an array of rows");
        std::vector<double> r;
        for (const auto& x : row) {
          if (!x.is_number()) throw ConfigError(where + ": expected numbers");
          r.push_back(x.get<double>());
        }
        m.push_back(std::move(r));
      }
      return m;
    } else {
      static_assert(sizeof(T) == 0, "unsupported config type");
    }
  }

 private:
  const Json& j_;
  std::string path_;
};

}  // namespace detail

/// A source as written in a config file.
struct SourceSpec {
  SourceKind kind = SourceKind::iid_pair;
  unsigned x_alphabet = 2;
  unsigned y_alphabet = 2;
  Matrix joint{{0.445, 0.055}, {0.055, 0.445}};  // iid-pair: kx rows of ky
  Matrix transition;  // joint-markov: over pair states x * y_alphabet + y

  JointSource build() const {
    return kind == SourceKind::iid_pair
               ? JointSource::iid_pair(x_alphabet, y_alphabet, joint)
               : JointSource::joint_markov(x_alphabet, y_alphabet, transition);
  }

  friend bool operator==(const SourceSpec&, const SourceSpec&) = default;
};

inline Json to_json(const SourceSpec& s) {
  Json j;
  j["kind"] = std::string(to_string(s.kind));
  j["x_alphabet"] = s.x_alphabet;
  j["y_alphabet"] = s.y_alphabet;
  if (s.kind == SourceKind::iid_pair)
    j["joint"] = s.joint;
  else
    j["transition"] = s.transition;
  return j;
}

inline SourceSpec source_from_json(const Json& j, const std::string& path = "source") {
  const detail::JsonReader r(j, path);
  r.only({"kind", "x_alphabet", "y_alphabet", "joint", "transition"});
  SourceSpec s;
  const auto kind = r.get<std::string>("kind");
  if (kind == "iid-pair") {
    s.kind = SourceKind::iid_pair;
  } else if (kind == "joint-markov") {
    s.kind = SourceKind::joint_markov;
  } else {
    throw ConfigError(r.where("kind") + ": expected iid-pair or joint-markov");
  }
  s.x_alphabet = r.get<unsigned>("x_alphabet");
  s.y_alphabet = r.get<unsigned>("y_alphabet");
  if (s.kind == SourceKind::iid_pair) {
    if (r.has("transition"))
      throw ConfigError(r.where("transition") + ": not allowed for iid-pair");
    s.joint = r.get<Matrix>("joint");
  } else {
    if (r.has("joint"))
      throw ConfigError(r.where("joint") + ": not allowed for joint-markov");
    s.transition = r.get<Matrix>("transition");
  }
  try {
    (void)s.build();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(r.where("") + ": " + e.what());
  }
  return s;
}

inline Json to_json(const SlidingBlockPartition& p) {
  Json j;
  j["radius"] = p.radius;
  j["scope"] = std::string(to_string(p.scope));
  j["parts"] = p.parts;
  j["input_alphabet"] = p.input_alphabet;
  j["table"] = p.table;
  j["fill"] = p.fill;
  return j;
}

inline SlidingBlockPartition partition_from_json(const Json& j,
                                                 const std::string& path = "partition") {
  const detail::JsonReader r(j, path);
  r.only({"radius", "scope", "parts", "input_alphabet", "table", "fill"});
  SlidingBlockPartition p;
  p.radius = r.get<unsigned>("radius");
  p.scope = scope_from_string(r.get<std::string>("scope"));
  p.parts = r.get<unsigned>("parts");
  p.input_alphabet = r.get<unsigned>("input_alphabet");
  p.fill = static_cast<Symbol>(r.get_or<unsigned>("fill", 0));
  const Json& t = r.raw("table");
  if (!t.is_array()) throw ConfigError(r.where("table") + ": expected an array");
  for (const auto& v : t)
    p.table.push_back(static_cast<Symbol>(
        detail::JsonReader::convert<unsigned>(v, r.where("table"))));
  try {
    p.validate();
  } catch (const Error& e) {
    throw ConfigError(r.where("") + ": " + e.what());
  }
  return p;
}

inline Json to_json(const Tower& t) {
  Json j;
  j["height"] = t.height;
  j["scope"] = std::string(to_string(t.scope));
  j["orbit_length"] = t.orbit_length;
  j["bases"] = t.bases;
  return j;
}

inline Tower tower_from_json(const Json& j, const std::string& path = "tower") {
  const detail::JsonReader r(j, path);
  r.only({"height", "scope", "orbit_length", "bases"});
  std::vector<std::size_t> bases;
  const Json& b = r.raw("bases");
  if (!b.is_array()) throw ConfigError(r.where("bases") + ": expected an array");
  for (const auto& v : b)
    bases.push_back(detail::JsonReader::convert<std::size_t>(v, r.where("bases")));
  try {
    return Tower::from_bases(std::move(bases), r.get<std::size_t>("height"),
                             scope_from_string(r.get<std::string>("scope")),
                             r.get<std::size_t>("orbit_length"));
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(r.where("") + ": " + e.what());
  }
}

/// All pair parameters except the seed, which comes from the seed tree.
inline Json to_json(const PairParams& p) {
  Json j;
  j["a"] = p.a;
  j["b"] = p.b;
  j["ell"] = p.ell;
  j["eta"] = p.eta;
  j["M_S"] = p.M_S;
  j["M_L"] = p.M_L;
  j["coverage_S"] = p.coverage_S;
  j["coverage_L"] = p.coverage_L;
  j["eps0"] = p.eps0;
  j["typ_slack"] = p.typ_slack;
  j["marker_window"] = p.marker_window;
  j["min_blocks"] = p.min_blocks;
  j["M_T"] = p.M_T;
  j["coverage_T"] = p.coverage_T;
  j["improve_eps"] = p.improve_eps;
  j["improve_delta"] = p.improve_delta;
  return j;
}

inline PairParams params_from_json(const Json& j, const std::string& path = "params") {
  const detail::JsonReader r(j, path);
  r.only({"a", "b", "ell", "eta", "M_S", "M_L", "coverage_S", "coverage_L",
          "eps0", "typ_slack", "marker_window", "min_blocks", "M_T",
          "coverage_T", "improve_eps", "improve_delta"});
  PairParams p;
  p.a = r.get_or("a", p.a);
  p.b = r.get_or("b", p.b);
  p.ell = r.get_or("ell", p.ell);
  p.eta = r.get_or("eta", p.eta);
  p.M_S = r.get_or("M_S", p.M_S);
  p.M_L = r.get_or("M_L", p.M_L);
  p.coverage_S = r.get_or("coverage_S", p.coverage_S);
  p.coverage_L = r.get_or("coverage_L", p.coverage_L);
  p.eps0 = r.get_or("eps0", p.eps0);
  p.typ_slack = r.get_or("typ_slack", p.typ_slack);
  p.marker_window = r.get_or("marker_window", p.marker_window);
  p.min_blocks = r.get_or("min_blocks", p.min_blocks);
  p.M_T = r.get_or("M_T", p.M_T);
  p.coverage_T = r.get_or("coverage_T", p.coverage_T);
  p.improve_eps = r.get_or("improve_eps", p.improve_eps);
  p.improve_delta = r.get_or("improve_delta", p.improve_delta);
  try {
    p.validate();
  } catch (const Error& e) {
    throw ConfigError(r.where("") + ": " + e.what());
  }
  return p;
}

struct RoundSpec {
  double eps = 0.01;
  double delta = 0.01;
  friend bool operator==(const RoundSpec&, const RoundSpec&) = default;
};

enum class ExperimentKind { region, simulate, sweep, verify };

inline std::string_view to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::region:
      return "region";
    case ExperimentKind::simulate:
      return "simulate";
    case ExperimentKind::sweep:
      return "sweep";
    case ExperimentKind::verify:
      return "verify";
  }
  return "?";
}

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::simulate;
  std::uint64_t seed = 1;
  std::size_t orbit_length = 2000000;
  SourceSpec source;
  PairParams params;
  std::vector<SweepCell> grid;    // sweep cells
  std::vector<RoundSpec> rounds;  // improvement rounds after simulate
  std::string verify = "all";     // verify suite
  std::string output_dir;         // empty: --out / environment / "."
  bool train_test = false;
  bool dump = false;              // write coded and decoded tracks

  friend bool operator==(const ExperimentConfig& l, const ExperimentConfig& r) {
    auto cells = [](const std::vector<SweepCell>& g) {
      std::vector<std::pair<unsigned, unsigned>> v;
      for (const auto& c : g) v.emplace_back(c.a, c.b);
      return v;
    };
    return l.experiment == r.experiment && l.seed == r.seed &&
           l.orbit_length == r.orbit_length && l.source == r.source &&
           l.params == r.params && cells(l.grid) == cells(r.grid) &&
           l.rounds == r.rounds && l.verify == r.verify &&
           l.output_dir == r.output_dir && l.train_test == r.train_test &&
           l.dump == r.dump;
  }
};

inline Json to_json(const ExperimentConfig& c) {
  Json j;
  j["experiment"] = std::string(to_string(c.experiment));
  j["seed"] = c.seed;
  j["orbit_length"] = c.orbit_length;
  j["source"] = to_json(c.source);
  j["params"] = to_json(c.params);
  Json grid = Json::array();
  for (const auto& cell : c.grid) grid.push_back({cell.a, cell.b});
  j["grid"] = grid;
  Json rounds = Json::array();
  for (const auto& r : c.rounds) rounds.push_back({{"eps", r.eps}, {"delta", r.delta}});
  j["rounds"] = rounds;
  j["verify"] = c.verify;
  j["output_dir"] = c.output_dir;
  j["train_test"] = c.train_test;
  j["dump"] = c.dump;
  return j;
}

inline ExperimentConfig config_from_json(const Json& j) {
  const detail::JsonReader r(j, "");
  r.only({"experiment", "seed", "orbit_length", "source", "params", "grid",
          "rounds", "verify", "output_dir", "train_test", "dump"});
  ExperimentConfig c;
  const auto kind = r.get_or<std::string>("experiment", "simulate");
  if (kind == "region") {
    c.experiment = ExperimentKind::region;
  } else if (kind == "simulate") {
    c.experiment = ExperimentKind::simulate;
  } else if (kind == "sweep") {
    c.experiment = ExperimentKind::sweep;
  } else if (kind == "verify") {
    c.experiment = ExperimentKind::verify;
  } else {
    throw ConfigError(r.where("experiment") +
                      ": expected region, simulate, sweep or verify");
  }
  c.seed = r.get_or("seed", c.seed);
  c.orbit_length = r.get_or("orbit_length", c.orbit_length);
  if (c.experiment != ExperimentKind::verify || r.has("source"))
    c.source = source_from_json(r.raw("source"));
  if (r.has("params")) c.params = params_from_json(r.raw("params"));
  if (r.has("grid")) {
    const Json& g = r.raw("grid");
    if (!g.is_array()) throw ConfigError(r.where("grid") + ": expected an array");
    for (const auto& cell : g) {
      if (!cell.is_array() || cell.size() != 2)
        throw ConfigError(r.where("grid") + ": each cell must be [a, b]");
      c.grid.push_back(
          {detail::JsonReader::convert<unsigned>(cell[0], r.where("grid")),
           detail::JsonReader::convert<unsigned>(cell[1], r.where("grid"))});
    }
  }
  if (r.has("rounds")) {
    const Json& rs = r.raw("rounds");
    if (!rs.is_array()) throw ConfigError(r.where("rounds") + ": expected an array");
    for (std::size_t i = 0; i < rs.size(); ++i) {
      const detail::JsonReader rr(rs[i], "rounds[" + std::to_string(i) + "]");
      rr.only({"eps", "delta"});
      c.rounds.push_back({rr.get<double>("eps"), rr.get<double>("delta")});
    }
  }
  c.verify = r.get_or<std::string>("verify", c.verify);
  c.output_dir = r.get_or<std::string>("output_dir", c.output_dir);
  c.train_test = r.get_or("train_test", c.train_test);
  c.dump = r.get_or("dump", c.dump);
  return c;
}

inline ExperimentConfig parse_config(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(j);
}

inline std::string serialize_config(const ExperimentConfig& c) {
  return to_json(c).dump(2) + "\n";
}

}  // namespace swgen
