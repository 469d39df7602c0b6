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

// swgen: command-line front end.
//
//   swgen region   --config cfg.json
//   swgen simulate --config cfg.json [--seed N] [--out DIR] [--train-test]
//   swgen sweep    --config cfg.json [--threads N]
//   swgen verify   [admissible|growth|binning|base-recovery|repaint|all]
//
// Outputs go to --out, else the config's output_dir, else $SWGEN_OUT_DIR,
// else the current directory.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "swgen/runner.hpp"

namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw swgen::Error(path + ": cannot open config");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zero-error Slepian-Wolf generator simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir, suite = "all";
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  bool train_test = false;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* opt = sub->add_option("--config", config_path, "experiment config (JSON)");
    if (needs_config) opt->required();
    sub->add_option("--seed", seed, "master seed (overrides the config)");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--threads", threads, "worker thread cap")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--train-test", train_test, "evaluate on a held-out orbit");
  };
  auto* region = app.add_subcommand("region", "print the rate region of a source");
  auto* simulate = app.add_subcommand("simulate", "build, encode and decode one pair");
  auto* sweep = app.add_subcommand("sweep", "run a grid of (a, b) cells");
  auto* verify = app.add_subcommand("verify", "run lemma verification suites");
  add_common(region, true);
  add_common(simulate, true);
  add_common(sweep, true);
  add_common(verify, false);
  verify->add_option("suite", suite, "admissible, growth, binning, base-recovery, repaint or all");

  CLI11_PARSE(app, argc, argv);

  try {
    swgen::ExperimentConfig config;
    if (!config_path.empty()) config = swgen::parse_config(read_text(config_path));
    if (*region) config.experiment = swgen::ExperimentKind::region;
    if (*simulate) config.experiment = swgen::ExperimentKind::simulate;
    if (*sweep) config.experiment = swgen::ExperimentKind::sweep;
    if (*verify) {
      config.experiment = swgen::ExperimentKind::verify;
      config.verify = suite;
    }
    if (seed) config.seed = *seed;
    if (train_test) config.train_test = true;
    swgen::RunOptions options;
    options.out_dir = out_dir;
    options.threads = threads;
    return swgen::run(config, options);
  } catch (const std::exception& e) {
    std::cerr << "swgen: " << e.what() << "\n";
    return 2;
  }
}
