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

#include "servobench/cli/config.hpp"

#include <cstdint>
#include <fstream>
#include <set>

#include "servobench/error.hpp"

namespace servobench::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr const char* kDefaultPreset = "paper-reference-noisefree";

void RejectUnknownKeys(const json& obj, const std::set<std::string>& allowed,
                       const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

double Number(const json& obj, const char* key, double fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number()) {
    throw ConfigError(std::string("'") + key + "' must be a number");
  }
  return it->get<double>();
}

std::optional<double> OptionalNumber(const json& obj, const char* key,
                                     std::optional<double> fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (it->is_null()) return std::nullopt;
  if (!it->is_number()) {
    throw ConfigError(std::string("'") + key + "' must be a number or null");
  }
  return it->get<double>();
}

int Integer(const json& obj, const char* key, int fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_integer()) {
    throw ConfigError(std::string("'") + key + "' must be an integer");
  }
  return it->get<int>();
}

std::uint64_t Seed(const json& obj, const char* key, std::uint64_t fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  const bool non_negative =
      it->is_number_unsigned() ||
      (it->is_number_integer() && it->get<std::int64_t>() >= 0);
  if (!non_negative) {
    throw ConfigError(std::string("'") + key +
                      "' must be a non-negative integer");
  }
  return it->get<std::uint64_t>();
}

std::string String(const json& obj, const char* key,
                   const std::string& fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_string()) {
    throw ConfigError(std::string("'") + key + "' must be a string");
  }
  return it->get<std::string>();
}

template <int N>
Eigen::Matrix<double, N, 1> Array(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_array() || it->size() != N) {
    throw ConfigError(std::string("'") + key + "' must be an array of " +
                      std::to_string(N) + " numbers");
  }
  Eigen::Matrix<double, N, 1> out;
  for (int i = 0; i < N; ++i) {
    if (!(*it)[i].is_number()) {
      throw ConfigError(std::string("'") + key + "' must contain numbers");
    }
    out[i] = (*it)[i].get<double>();
  }
  return out;
}

PoseSE3 ParsePose(const json& obj, const std::string& where) {
  RejectUnknownKeys(obj, {"t", "q"}, where);
  try {
    return {UnitQuaternion::FromRaw(Array<4>(obj, "q")), Array<3>(obj, "t")};
  } catch (const Error& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

ordered_json PoseJson(const PoseSE3& pose) {
  const Vec3& t = pose.translation;
  const UnitQuaternion& q = pose.rotation;
  ordered_json j;
  j["t"] = {t.x(), t.y(), t.z()};
  j["q"] = {q.w(), q.x(), q.y(), q.z()};
  return j;
}

ordered_json OptionalJson(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

}  // namespace

json ReadConfigFile(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config not found: " + path.string());
  json config = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (config.is_discarded()) {
    throw ConfigError("config is not valid JSON: " + path.string());
  }
  return config;
}

RunManifest ResolveConfig(const json& config,
                          const std::optional<std::string>& estimator_override) {
  RejectUnknownKeys(config,
                    {"preset", "initial", "desired", "offset", "control", "dt",
                     "max_iters", "tol_t_mm", "tol_r_deg", "estimator",
                     "scene", "camera", "dataset"},
                    "config");
  RunManifest m;
  m.preset = String(config, "preset", kDefaultPreset);
  const Preset* preset = FindPreset(m.preset);
  if (preset == nullptr) throw ConfigError("unknown preset '" + m.preset + "'");
  ServoConfig& s = m.servo;
  s = preset->base;

  const PoseSE3 preset_offset =
      Relative(preset->base.initial_pose, preset->base.desired_pose);
  if (config.contains("initial")) {
    s.initial_pose = ParsePose(config["initial"], "initial");
  }
  if (config.contains("desired") && config.contains("offset")) {
    throw ConfigError("give either 'desired' or 'offset', not both");
  }
  if (config.contains("desired")) {
    s.desired_pose = ParsePose(config["desired"], "desired");
  } else if (config.contains("offset")) {
    const json& off = config["offset"];
    RejectUnknownKeys(off, {"t_mm", "euler_xyz_deg"}, "offset");
    s.desired_pose = Compose(
        s.initial_pose, OffsetPose(Array<3>(off, "t_mm"),
                                   Array<3>(off, "euler_xyz_deg")));
  } else {
    s.desired_pose = Compose(s.initial_pose, preset_offset);
  }

  if (config.contains("control")) {
    const json& c = config["control"];
    RejectUnknownKeys(c, {"lambda", "dof", "max_linear_speed",
                          "max_angular_speed"},
                      "control");
    s.control.lambda = Number(c, "lambda", s.control.lambda);
    const std::string dof = String(
        c, "dof", s.control.dof_mode == DofMode::kFour ? "four" : "six");
    if (dof == "six") {
      s.control.dof_mode = DofMode::kSix;
    } else if (dof == "four") {
      s.control.dof_mode = DofMode::kFour;
    } else {
      throw ConfigError("control.dof must be \"six\" or \"four\"");
    }
    s.control.max_linear_speed =
        OptionalNumber(c, "max_linear_speed", s.control.max_linear_speed);
    s.control.max_angular_speed =
        OptionalNumber(c, "max_angular_speed", s.control.max_angular_speed);
  }
  s.dt = Number(config, "dt", s.dt);
  s.max_iters = Integer(config, "max_iters", s.max_iters);
  s.tol_t_mm = Number(config, "tol_t_mm", s.tol_t_mm);
  s.tol_r_deg = Number(config, "tol_r_deg", s.tol_r_deg);

  if (config.contains("estimator")) {
    const json& e = config["estimator"];
    RejectUnknownKeys(e, {"kind", "rel_sigma_t", "rel_sigma_r", "seed",
                          "command", "timeout_s"},
                      "estimator");
    const std::string kind = String(
        e, "kind",
        s.estimator.kind == EstimatorKind::kExternal ? "external" : "oracle");
    if (kind == "oracle") {
      s.estimator.kind = EstimatorKind::kOracle;
    } else if (kind == "external") {
      s.estimator.kind = EstimatorKind::kExternal;
    } else {
      throw ConfigError("estimator.kind must be \"oracle\" or \"external\"");
    }
    s.estimator.noise.rel_sigma_t =
        Number(e, "rel_sigma_t", s.estimator.noise.rel_sigma_t);
    s.estimator.noise.rel_sigma_r =
        Number(e, "rel_sigma_r", s.estimator.noise.rel_sigma_r);
    s.estimator.noise.seed = Seed(e, "seed", s.estimator.noise.seed);
    s.estimator.external.command =
        String(e, "command", s.estimator.external.command);
    s.estimator.external.timeout_s =
        Number(e, "timeout_s", s.estimator.external.timeout_s);
  }
  if (estimator_override) s.estimator.external.command = *estimator_override;

  if (config.contains("scene")) {
    const json& sc = config["scene"];
    RejectUnknownKeys(sc, {"seed", "n_points", "extent", "splat_radius"},
                      "scene");
    s.scene.seed = Seed(sc, "seed", s.scene.seed);
    s.scene.n_points = Integer(sc, "n_points", s.scene.n_points);
    s.scene.extent = Number(sc, "extent", s.scene.extent);
    s.scene.splat_radius = Integer(sc, "splat_radius", s.scene.splat_radius);
  }
  if (config.contains("camera")) {
    const json& k = config["camera"];
    RejectUnknownKeys(k, {"width", "height", "fx", "fy", "cx", "cy"},
                      "camera");
    s.intrinsics.width = Integer(k, "width", s.intrinsics.width);
    s.intrinsics.height = Integer(k, "height", s.intrinsics.height);
    s.intrinsics.fx = Number(k, "fx", s.intrinsics.fx);
    s.intrinsics.fy = Number(k, "fy", s.intrinsics.fy);
    s.intrinsics.cx = Number(k, "cx", s.intrinsics.cx);
    s.intrinsics.cy = Number(k, "cy", s.intrinsics.cy);
  }

  if (config.contains("dataset")) {
    const json& d = config["dataset"];
    RejectUnknownKeys(d, {"window", "trajectory_dir", "frames", "seed",
                          "distance", "step_mm", "step_deg"},
                      "dataset");
    DatasetOptions& ds = m.dataset;
    ds.window = Integer(d, "window", ds.window);
    if (const auto it = d.find("trajectory_dir");
        it != d.end() && !it->is_null()) {
      if (!it->is_string()) {
        throw ConfigError("'trajectory_dir' must be a string or null");
      }
      ds.trajectory_dir = fs::path(it->get<std::string>());
    }
    ds.synthetic.frames = Integer(d, "frames", ds.synthetic.frames);
    ds.synthetic.seed = Seed(d, "seed", ds.synthetic.seed);
    ds.synthetic.distance = Number(d, "distance", ds.synthetic.distance);
    ds.synthetic.step_mm = Number(d, "step_mm", ds.synthetic.step_mm);
    ds.synthetic.step_deg = Number(d, "step_deg", ds.synthetic.step_deg);
  }

  try {
    s.Validate();
    s.intrinsics.Validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (s.scene.n_points < 1 || !(s.scene.extent > 0.0) ||
      s.scene.splat_radius < 0) {
    throw ConfigError("scene needs n_points >= 1, extent > 0, splat_radius >= 0");
  }
  if (m.dataset.window < 1) {
    throw ConfigError("dataset.window must be >= 1 (got " +
                      std::to_string(m.dataset.window) + ")");
  }
  if (m.dataset.synthetic.frames < 1) {
    throw ConfigError("dataset.frames must be >= 1");
  }

  m.resolved = ToJson(m);
  return m;
}

ordered_json ToJson(const RunManifest& m) {
  const ServoConfig& s = m.servo;
  ordered_json j;
  j["preset"] = m.preset;
  j["initial"] = PoseJson(s.initial_pose);
  j["desired"] = PoseJson(s.desired_pose);
  j["control"]["lambda"] = s.control.lambda;
  j["control"]["dof"] = s.control.dof_mode == DofMode::kFour ? "four" : "six";
  j["control"]["max_linear_speed"] = OptionalJson(s.control.max_linear_speed);
  j["control"]["max_angular_speed"] = OptionalJson(s.control.max_angular_speed);
  j["dt"] = s.dt;
  j["max_iters"] = s.max_iters;
  j["tol_t_mm"] = s.tol_t_mm;
  j["tol_r_deg"] = s.tol_r_deg;
  j["estimator"]["kind"] =
      s.estimator.kind == EstimatorKind::kExternal ? "external" : "oracle";
  j["estimator"]["rel_sigma_t"] = s.estimator.noise.rel_sigma_t;
  j["estimator"]["rel_sigma_r"] = s.estimator.noise.rel_sigma_r;
  j["estimator"]["seed"] = s.estimator.noise.seed;
  j["estimator"]["command"] = s.estimator.external.command;
  j["estimator"]["timeout_s"] = s.estimator.external.timeout_s;
  j["scene"]["seed"] = s.scene.seed;
  j["scene"]["n_points"] = s.scene.n_points;
  j["scene"]["extent"] = s.scene.extent;
  j["scene"]["splat_radius"] = s.scene.splat_radius;
  j["camera"]["width"] = s.intrinsics.width;
  j["camera"]["height"] = s.intrinsics.height;
  j["camera"]["fx"] = s.intrinsics.fx;
  j["camera"]["fy"] = s.intrinsics.fy;
  j["camera"]["cx"] = s.intrinsics.cx;
  j["camera"]["cy"] = s.intrinsics.cy;
  const DatasetOptions& d = m.dataset;
  j["dataset"]["window"] = d.window;
  j["dataset"]["trajectory_dir"] =
      d.trajectory_dir ? ordered_json(d.trajectory_dir->string())
                       : ordered_json(nullptr);
  j["dataset"]["frames"] = d.synthetic.frames;
  j["dataset"]["seed"] = d.synthetic.seed;
  j["dataset"]["distance"] = d.synthetic.distance;
  j["dataset"]["step_mm"] = d.synthetic.step_mm;
  j["dataset"]["step_deg"] = d.synthetic.step_deg;
  return j;
}

}  // namespace servobench::cli
