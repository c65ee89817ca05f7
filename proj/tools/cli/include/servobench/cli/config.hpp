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
/// The JSON configuration shared by every command. All keys are optional;
/// anything absent takes the value of the selected preset (default
/// "paper-reference-noisefree") or the documented dataset defaults. Unknown keys
/// are rejected.

#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>

#include "servobench/dataset.hpp"
#include "servobench/servo.hpp"

namespace servobench::cli {

/// Raised for anything that should exit with the usage/config status.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DatasetOptions {
  int window = 10;
  std::optional<std::filesystem::path> trajectory_dir;
  SyntheticTrajectoryConfig synthetic;
};

struct RunManifest {
  std::string preset;
  ServoConfig servo;
  DatasetOptions dataset;
  std::filesystem::path out_dir;
  /// Fully resolved configuration, echoed to disk before execution.
  nlohmann::ordered_json resolved;
};

inline constexpr const char* kEstimatorEnvVar = "SERVOBENCH_ESTIMATOR";
inline constexpr const char* kResolvedConfigName = "config.resolved.json";

/// Parses `config` on top of its preset. `estimator_override` replaces the
/// external estimator command line when present. Throws ConfigError.
RunManifest ResolveConfig(const nlohmann::json& config,
                          const std::optional<std::string>& estimator_override);

/// Reads a config file (throws ConfigError "config not found").
nlohmann::json ReadConfigFile(const std::filesystem::path& path);

/// Re-serializes a manifest; ResolveConfig(ToJson(m)) reproduces m.
nlohmann::ordered_json ToJson(const RunManifest& manifest);

}  // namespace servobench::cli
