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

#include "servobench/cli/commands.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <vector>

#include "servobench/cli/config.hpp"
#include "servobench/dataset.hpp"
#include "servobench/error.hpp"
#include "servobench/loss.hpp"
#include "servobench/servo.hpp"

namespace servobench::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
}

void PrepareOutDir(const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (!fs::is_directory(out_dir)) {
    throw Error(ErrorCode::kIoError,
                "cannot create output directory " + out_dir.string());
  }
}

RunManifest LoadManifest(const CommandContext& ctx,
                         const std::optional<fs::path>& config_path,
                         const std::optional<std::string>& preset,
                         const fs::path& out_dir) {
  json config = config_path ? ReadConfigFile(*config_path) : json::object();
  if (preset) {
    if (config.contains("preset") && config["preset"] != *preset) {
      throw ConfigError("--preset conflicts with the config's preset");
    }
    config["preset"] = *preset;
  }
  RunManifest m = ResolveConfig(config, ctx.estimator_override);
  m.out_dir = out_dir;
  PrepareOutDir(out_dir);
  WriteText(out_dir / kResolvedConfigName, m.resolved.dump(2) + "\n");
  return m;
}

std::string Fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

struct JsonlRecord {
  std::string cur;
  std::string des;
  Vec3 x;
  Vec4 q;
};

std::vector<JsonlRecord> ReadJsonl(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::vector<JsonlRecord> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const json j = json::parse(line, nullptr, false);
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (j.is_discarded() || !j.is_object()) {
      throw ConfigError(where + ": not a JSON object");
    }
    JsonlRecord r;
    try {
      r.cur = j.at("cur").get<std::string>();
      r.des = j.at("des").get<std::string>();
      const auto x = j.at("x").get<std::vector<double>>();
      const auto q = j.at("q").get<std::vector<double>>();
      if (x.size() != 3 || q.size() != 4) throw ConfigError("wrong arity");
      r.x = Vec3(x[0], x[1], x[2]);
      r.q = Vec4(q[0], q[1], q[2], q[3]);
    } catch (const std::exception& e) {
      throw ConfigError(where + ": record needs cur, des, x[3], q[4]");
    }
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace

int CmdDataset(const CommandContext& ctx,
               const std::optional<fs::path>& config_path,
               const fs::path& out_dir) {
  try {
    const RunManifest m = LoadManifest(ctx, config_path, std::nullopt, out_dir);
    const Trajectory traj = m.dataset.trajectory_dir
                                ? LoadTrajectory(*m.dataset.trajectory_dir)
                                : SyntheticTrajectory(m.dataset.synthetic);
    const SceneSpec& sc = m.servo.scene;
    const ExportManifest result = ExportDataset(
        traj, GenerateScene(sc.seed, sc.n_points, sc.extent),
        m.servo.intrinsics, m.dataset.window, out_dir, sc.splat_radius);
    ctx.out << "frames " << traj.frames.size() << "\n"
            << "pairs " << result.pair_count << "\n"
            << "manifest " << result.manifest_path.string() << "\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    ctx.err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    ctx.err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int CmdRun(const CommandContext& ctx,
           const std::optional<fs::path>& config_path,
           const std::optional<std::string>& preset, const fs::path& out_dir) {
  RunManifest m;
  try {
    m = LoadManifest(ctx, config_path, preset, out_dir);
  } catch (const ConfigError& e) {
    ctx.err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    ctx.err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  ServoRun run;
  try {
    run = Run(m.servo);
  } catch (const EstimatorFailure& e) {
    ctx.err << "estimator failure: " << e.what() << "\n";
    return kExitEstimator;
  } catch (const Error& e) {
    ctx.err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  const ServoRecord& last = run.final_record();
  ordered_json summary;
  summary["converged"] = run.converged;
  summary["iters_used"] = run.iters_used;
  summary["final_iter"] = last.iter;
  summary["final_t_err_mm"] = last.t_err_mm;
  summary["final_r_err_deg"] = last.r_err_deg;
  summary["final_tilt_err_deg"] = TiltErrorDeg(last.pose, m.servo.desired_pose);
  const PoseSE3 residual = Relative(m.servo.desired_pose, last.pose);
  const Vec3 t_mm = residual.translation * 1000.0;
  const Vec3 euler = EulerXyzIntrinsic(residual.rotation) * kRadToDeg;
  summary["final_residual"] = {
      {"t_mm", {t_mm.x(), t_mm.y(), t_mm.z()}},
      {"euler_xyz_deg", {euler.x(), euler.y(), euler.z()}},
  };
  try {
    summary["straightness_deg"] = Straightness(run, m.servo.desired_pose);
  } catch (const Error&) {
    summary["straightness_deg"] = nullptr;
  }
  try {
    WriteText(out_dir / "run.csv", RunCsv(run));
    WriteText(out_dir / "summary.json", summary.dump(2) + "\n");
  } catch (const Error& e) {
    ctx.err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  ctx.out << (run.converged ? "converged" : "not converged") << " after "
          << last.iter << " iterations: t_err " << Fixed(last.t_err_mm, 4)
          << " mm, r_err " << Fixed(last.r_err_deg, 4) << " deg\n";
  return run.converged ? kExitOk : kExitNotConverged;
}

int CmdBench(const CommandContext& ctx, const std::string& preset_name,
             int trials, std::uint64_t seed, const fs::path& out_dir) {
  const Preset* preset = FindPreset(preset_name);
  if (preset == nullptr) {
    ctx.err << "error: unknown preset '" << preset_name << "'; known:";
    for (const Preset& p : Presets()) ctx.err << " " << p.name;
    ctx.err << "\n";
    return kExitUsage;
  }
  if (trials < 1) {
    ctx.err << "error: --trials must be >= 1\n";
    return kExitUsage;
  }
  try {
    PrepareOutDir(out_dir);
    ordered_json echo;
    echo["preset"] = preset_name;
    echo["trials"] = trials;
    echo["seed"] = seed;
    WriteText(out_dir / kResolvedConfigName, echo.dump(2) + "\n");

    const BenchmarkSummary s = Benchmark(*preset, trials, seed);
    const std::string text = SummaryJson(s).dump(2) + "\n";
    WriteText(out_dir / "bench.json", text);
    ctx.out << text;
  } catch (const EstimatorFailure& e) {
    ctx.err << "estimator failure: " << e.what() << "\n";
    return kExitEstimator;
  } catch (const Error& e) {
    ctx.err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

int CmdEvalLoss(const CommandContext& ctx, const fs::path& manifest_path,
                const fs::path& predictions_path, double beta) {
  try {
    if (!(beta > 0.0)) throw ConfigError("--beta must be > 0");
    const std::vector<JsonlRecord> truth = ReadJsonl(manifest_path);
    const std::vector<JsonlRecord> pred = ReadJsonl(predictions_path);
    if (truth.size() != pred.size()) {
      throw ConfigError("record count mismatch: manifest has " +
                        std::to_string(truth.size()) + ", predictions have " +
                        std::to_string(pred.size()));
    }
    if (truth.empty()) throw ConfigError("manifest has no records");
    double loss = 0.0, t_err = 0.0, r_err = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      const JsonlRecord& g = truth[i];
      const JsonlRecord& p = pred[i];
      if (g.cur != p.cur || g.des != p.des) {
        throw ConfigError("record " + std::to_string(i + 1) +
                          " is misaligned: (" + p.cur + ", " + p.des +
                          ") vs (" + g.cur + ", " + g.des + ")");
      }
      loss += PoseLoss(p.x, p.q, g.x, g.q, LossConfig{beta});
      const PoseVector pv{p.x, UnitQuaternion::FromRaw(p.q)};
      const PoseVector gv{g.x, UnitQuaternion::FromRaw(g.q)};
      t_err += TranslationErrorMm(pv, gv);
      r_err += RotationErrorDeg(pv, gv);
    }
    const double n = static_cast<double>(truth.size());
    ctx.out << "pairs " << truth.size() << "\n"
            << "mean_loss " << Fixed(loss / n, 9) << "\n"
            << "mean_t_err_mm " << Fixed(t_err / n, 9) << "\n"
            << "mean_r_err_deg " << Fixed(r_err / n, 9) << "\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    ctx.err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    ctx.err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace servobench::cli
