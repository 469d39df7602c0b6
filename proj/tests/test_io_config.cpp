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

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "swgen/config.hpp"
#include "swgen/io.hpp"
#include "swgen/towers.hpp"

namespace swgen {
namespace {

namespace fs = std::filesystem;

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("swgen_io_" + std::string(::testing::UnitTest::GetInstance()
                                          ->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const char* name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

std::string read_bytes(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void write_bytes(const std::string& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  out << s;
}

using Files = TempDir;

TEST_F(Files, OrbitRoundTrip) {
  const auto o = sample_orbit(JointSource::iid_pair(3, 2, {{0.1, 0.2}, {0.3, 0.1}, {0.2, 0.1}}),
                              5000, 1);
  save_orbit(o, path("o.swob"));
  const auto bytes = read_bytes(path("o.swob"));
  ASSERT_EQ(bytes.size(), 16u + 2 * 5000);
  EXPECT_EQ(bytes.substr(0, 4), "SWOB");
  EXPECT_EQ(bytes[4], 1);
  EXPECT_EQ(bytes[6], 3);
  EXPECT_EQ(bytes[7], 2);
  EXPECT_EQ(static_cast<unsigned char>(bytes[8]), 5000 & 0xFF);
  EXPECT_EQ(static_cast<unsigned char>(bytes[9]), 5000 >> 8);
  EXPECT_EQ(bytes[16], static_cast<char>(o.x[0]));
  EXPECT_EQ(bytes[17], static_cast<char>(o.y[0]));
  const auto back = load_orbit(path("o.swob"));
  EXPECT_EQ(back.x, o.x);
  EXPECT_EQ(back.y, o.y);
  EXPECT_EQ(back.x_alphabet, 3u);
  EXPECT_EQ(back.y_alphabet, 2u);
}

TEST_F(Files, TrackRoundTripKeepsErasures) {
  SymbolTrack t{{0, 1, 2, kAny, 1, 0}, 3};
  save_track(t, path("t.swtk"));
  EXPECT_EQ(read_bytes(path("t.swtk")).size(), 22u);
  const auto back = load_track(path("t.swtk"));
  EXPECT_EQ(back.values, t.values);
  EXPECT_EQ(back.parts, 3u);
}

TEST_F(Files, RejectsBadFiles) {
  const auto o = sample_orbit(make_dsbs(0.11), 100, 2);
  save_orbit(o, path("o.swob"));
  auto bytes = read_bytes(path("o.swob"));

  auto bad = bytes;
  bad[0] = 'X';
  write_bytes(path("magic.swob"), bad);
  EXPECT_THROW(load_orbit(path("magic.swob")), Error);

  bad = bytes;
  bad[4] = 2;
  write_bytes(path("version.swob"), bad);
  EXPECT_THROW(load_orbit(path("version.swob")), Error);

  write_bytes(path("short.swob"), bytes.substr(0, 100));
  EXPECT_THROW(load_orbit(path("short.swob")), Error);
  write_bytes(path("header.swob"), bytes.substr(0, 10));
  EXPECT_THROW(load_orbit(path("header.swob")), Error);

  bad = bytes;
  bad[16] = 7;
  write_bytes(path("symbol.swob"), bad);
  EXPECT_THROW(load_orbit(path("symbol.swob")), Error);

  EXPECT_THROW(load_track(path("o.swob")), Error);
  EXPECT_THROW(load_orbit(path("missing.swob")), Error);
}

ExperimentConfig sample_config() {
  ExperimentConfig c;
  c.experiment = ExperimentKind::sweep;
  c.seed = 42;
  c.orbit_length = 123456;
  c.source.kind = SourceKind::joint_markov;
  c.source.transition = {{0.9, 0.1, 0, 0}, {0, 0.9, 0.1, 0}, {0, 0, 0.9, 0.1},
                         {0.1, 0, 0, 0.9}};
  c.params.a = 3;
  c.params.M_S = 1500;
  c.params.eta = 0.02;
  c.grid = {{2, 2}, {3, 4}};
  c.rounds = {{0.01, 0.02}};
  c.verify = "growth";
  c.output_dir = "out";
  c.train_test = true;
  c.dump = true;
  return c;
}

TEST(Config, RoundTrip) {
  const auto c = sample_config();
  EXPECT_EQ(parse_config(serialize_config(c)), c);
  const ExperimentConfig d;
  EXPECT_EQ(parse_config(serialize_config(d)), d);
}

TEST(Config, Defaults) {
  const auto c = parse_config(R"({"source": {"kind": "iid-pair", "x_alphabet": 2,
      "y_alphabet": 2, "joint": [[0.25, 0.25], [0.25, 0.25]]}})");
  EXPECT_EQ(c.experiment, ExperimentKind::simulate);
  EXPECT_EQ(c.params, PairParams{});
  EXPECT_EQ(c.orbit_length, 2000000u);
}

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(Config, Errors) {
  EXPECT_NE(error_of(R"({"sed": 1, "experiment": "verify"})").find("sed"), std::string::npos);
  EXPECT_NE(error_of(R"({"experiment": "simulate"})").find("source"), std::string::npos);
  EXPECT_NE(error_of(R"({"source": {"kind": "iid-pair", "x_alphabet": 2, "y_alphabet": 2}})")
                .find("source.joint"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"source": {"kind": "iid-pair", "x_alphabet": 2, "y_alphabet": 2,
      "joint": [[0.5, 0.5], [0.5, 0.5]]}})"),
            "");
  EXPECT_NE(error_of(R"({"experiment": "verify", "params": {"a": "two"}})").find("params.a"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"experiment": "verify", "params": {"M_S": 3}})"), "");
  EXPECT_NE(error_of(R"({"experiment": "verify", "grid": [[2]]})").find("grid"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"experiment": "verify", "rounds": [{"eps": 0.1}]})").find("delta"),
            std::string::npos);
  EXPECT_NE(error_of("{not json"), "");
  EXPECT_NE(error_of(R"({"experiment": "plot"})"), "");
}

TEST(Json, PartitionRoundTrip) {
  const auto p = SlidingBlockPartition::from_function(
      2, 1, Scope::y_only, 3, [](std::span<const Symbol> w) {
        return static_cast<Symbol>((w[0] + w[2]) % 2);
      });
  EXPECT_EQ(partition_from_json(to_json(p)), p);
  auto j = to_json(p);
  j["table"][0] = 5;
  EXPECT_THROW(partition_from_json(j), ConfigError);
  j = to_json(p);
  j["extra"] = 1;
  EXPECT_THROW(partition_from_json(j), ConfigError);
}

TEST(Json, TowerRoundTrip) {
  const auto t = Tower::from_bases({3, 20, 40}, 15, Scope::x_only, 50);
  const auto back = tower_from_json(to_json(t));
  EXPECT_EQ(back.bases, t.bases);
  EXPECT_EQ(back.height, 15u);
  EXPECT_EQ(back.scope, Scope::x_only);
  EXPECT_EQ(back.orbit_length, 50u);
  EXPECT_DOUBLE_EQ(back.coverage, t.coverage);
  auto j = to_json(t);
  j["bases"] = {3, 10};
  EXPECT_THROW(tower_from_json(j), ConfigError);
}

TEST(Json, ParamsRoundTrip) {
  PairParams p;
  p.b = 4;
  p.coverage_T = 0.97;
  p.improve_eps = 0.003;
  EXPECT_EQ(params_from_json(to_json(p)), p);
}

}  // namespace
}  // namespace swgen
