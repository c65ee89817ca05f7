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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace servobench::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitNotConverged = 1,
  kExitUsage = 2,
  kExitEstimator = 3,
};

struct CommandContext {
  std::ostream& out;
  std::ostream& err;
  /// Value of SERVOBENCH_ESTIMATOR, if set.
  std::optional<std::string> estimator_override;
};

int CmdDataset(const CommandContext& ctx,
               const std::optional<std::filesystem::path>& config_path,
               const std::filesystem::path& out_dir);

int CmdRun(const CommandContext& ctx,
           const std::optional<std::filesystem::path>& config_path,
           const std::optional<std::string>& preset,
           const std::filesystem::path& out_dir);

int CmdBench(const CommandContext& ctx, const std::string& preset, int trials,
             std::uint64_t seed, const std::filesystem::path& out_dir);

int CmdEvalLoss(const CommandContext& ctx,
                const std::filesystem::path& manifest_path,
                const std::filesystem::path& predictions_path, double beta);

}  // namespace servobench::cli
