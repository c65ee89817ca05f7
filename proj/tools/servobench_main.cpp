// Copyright 2026 The servobench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/// @file
///
/// servobench command-line entry point.
///
/// Exit status: 0 success (or converged), 1 ran but did not converge,
/// 2 usage or configuration error, 3 estimator failure.

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "servobench/cli/commands.hpp"
#include "servobench/cli/config.hpp"
#include "servobench/loss.hpp"

int main(int argc, char** argv) {
  namespace cli = servobench::cli;

  CLI::App app{"Visual servoing simulation and benchmarking toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::string preset;
  int trials = 10;
  std::uint64_t seed = 0;
  double beta = servobench::kDefaultBeta;
  std::string manifest_path;
  std::string predictions_path;

  auto* dataset = app.add_subcommand("dataset", "Export a pose-pair dataset");
  dataset->add_option("--config", config_path, "JSON config file");
  dataset->add_option("--out", out_dir, "Output directory");

  auto* run = app.add_subcommand("run", "Run one servoing episode");
  run->add_option("--config", config_path, "JSON config file");
  run->add_option("--preset", preset, "Named preset (overrides config default)");
  run->add_option("--out", out_dir, "Output directory");

  auto* bench = app.add_subcommand("bench", "Run a batch benchmark");
  bench->add_option("--preset", preset, "Named preset")->required();
  bench->add_option("--trials", trials, "Number of trials");
  bench->add_option("--seed", seed, "Benchmark seed");
  bench->add_option("--out", out_dir, "Output directory");

  auto* eval = app.add_subcommand("eval-loss", "Score predictions offline");
  eval->add_option("--manifest", manifest_path, "Ground-truth manifest.jsonl")
      ->required();
  eval->add_option("--predictions", predictions_path, "Predictions .jsonl")
      ->required();
  eval->add_option("--beta", beta, "Rotation weight");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kExitUsage;
  }

  std::optional<std::string> estimator_override;
  if (const char* env = std::getenv(cli::kEstimatorEnvVar)) {
    estimator_override = env;
  }
  const cli::CommandContext ctx{std::cout, std::cerr, estimator_override};
  auto optional_path = [](const std::string& s) {
    return s.empty() ? std::nullopt
                     : std::optional<std::filesystem::path>(s);
  };

  if (dataset->parsed()) {
    return cli::CmdDataset(ctx, optional_path(config_path), out_dir);
  }
  if (run->parsed()) {
    return cli::CmdRun(ctx, optional_path(config_path),
                       preset.empty() ? std::nullopt
                                      : std::optional<std::string>(preset),
                       out_dir);
  }
  if (bench->parsed()) {
    return cli::CmdBench(ctx, preset, trials, seed, out_dir);
  }
  return cli::CmdEvalLoss(ctx, manifest_path, predictions_path, beta);
}
