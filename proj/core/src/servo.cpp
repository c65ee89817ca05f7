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

#include "servobench/servo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <thread>

#include "servobench/error.hpp"
#include "servobench/rng.hpp"

namespace servobench {

void ServoConfig::Validate() const {
  control.Validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorCode::kInvalidArgument, "dt must be > 0");
  }
  if (max_iters < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_iters must be >= 1");
  }
  if (!(tol_t_mm > 0.0) || !(tol_r_deg > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "tolerances must be > 0");
  }
  if (!(control.lambda * dt < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "lambda * dt must be < 1");
  }
  if (estimator.kind == EstimatorKind::kOracle) {
    estimator.noise.Validate();
  } else {
    estimator.external.Validate();
    intrinsics.Validate();
  }
}

PoseSE3 IntegrateStep(const PoseSE3& pose, const Twist& t, double dt) {
  if (!(dt > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "dt must be > 0");
  }
  return {pose.rotation * Exp(t.w * dt),
          pose.translation + pose.rotation.Rotate(t.v * dt)};
}

std::unique_ptr<PoseEstimator> MakeEstimator(const ServoConfig& cfg) {
  if (cfg.estimator.kind == EstimatorKind::kOracle) {
    return std::make_unique<OracleEstimator>(cfg.estimator.noise);
  }
  auto client = std::make_unique<ExternalClient>(cfg.estimator.external);
  return std::make_unique<ImageEstimator>(
      std::move(client),
      GenerateScene(cfg.scene.seed, cfg.scene.n_points, cfg.scene.extent),
      cfg.intrinsics, cfg.scene.splat_radius);
}

ServoRun Run(const ServoConfig& cfg) {
  cfg.Validate();
  std::unique_ptr<PoseEstimator> estimator;
  try {
    estimator = MakeEstimator(cfg);
  } catch (const Error& e) {
    throw EstimatorFailure(e.code(), 0, e.what());
  }
  return Run(cfg, *estimator);
}

ServoRun Run(const ServoConfig& cfg, PoseEstimator& estimator) {
  cfg.Validate();
  ServoRun run;
  run.tol_t_mm = cfg.tol_t_mm;
  run.tol_r_deg = cfg.tol_r_deg;
  run.records.reserve(static_cast<std::size_t>(cfg.max_iters));

  PoseSE3 pose = cfg.initial_pose;
  for (int k = 0; k < cfg.max_iters; ++k) {
    const PoseVector truth =
        PoseVector::FromPose(Relative(pose, cfg.desired_pose));
    ServoRecord record;
    record.iter = k;
    record.pose = pose;
    record.t_err_mm = 1000.0 * truth.x.norm();
    record.r_err_deg = RotationAngle(truth.q) * kRadToDeg;

    PoseVector estimate;
    try {
      estimate = estimator.Estimate(pose, cfg.desired_pose);
    } catch (const EstimatorFailure&) {
      throw;
    } catch (const Error& e) {
      throw EstimatorFailure(e.code(), k, e.what());
    }
    record.twist = Command(estimate, cfg.control);
    run.records.push_back(record);

    if (record.t_err_mm <= cfg.tol_t_mm && record.r_err_deg <= cfg.tol_r_deg) {
      run.converged = true;
      break;
    }
    pose = IntegrateStep(pose, record.twist, cfg.dt);
  }
  run.iters_used = static_cast<int>(run.records.size());
  return run;
}

namespace {

double AngleBetween(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

double Median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2]
                    : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

Vec3 RandomUnitVector(Xorshift64Star& rng) {
  Vec3 v;
  do {
    v = Vec3(rng.Gaussian(), rng.Gaussian(), rng.Gaussian());
  } while (v.norm() < 1e-12);
  return v.normalized();
}

}  // namespace

double Straightness(const ServoRun& run, const PoseSE3& desired) {
  if (run.records.empty() || run.records.front().t_err_mm <= run.tol_t_mm) {
    throw Error(ErrorCode::kDegenerateTrajectory,
                "run starts within translation tolerance");
  }
  const Vec3 initial = Relative(desired, run.records.front().pose).translation;
  double worst = 0.0;
  int counted = 0;
  for (const ServoRecord& r : run.records) {
    if (r.t_err_mm <= run.tol_t_mm) continue;
    ++counted;
    worst = std::max(worst,
                     AngleBetween(initial, Relative(desired, r.pose).translation));
  }
  if (counted < 2) {
    throw Error(ErrorCode::kDegenerateTrajectory,
                "fewer than two iterations outside tolerance");
  }
  return worst * kRadToDeg;
}

double TiltErrorDeg(const PoseSE3& current, const PoseSE3& desired) {
  const Vec3 z = Relative(current, desired).rotation.Rotate(Vec3::UnitZ());
  return AngleBetween(Vec3::UnitZ(), z) * kRadToDeg;
}

PoseSE3 OffsetPose(const Vec3& translation_mm, const Vec3& euler_xyz_deg) {
  const Vec3 e = euler_xyz_deg * kDegToRad;
  return {UnitQuaternion::FromEulerXyzIntrinsic(e.x(), e.y(), e.z()),
          translation_mm / 1000.0};
}

PoseSE3 DefaultInitialPose() { return PoseSE3::Translation(0.0, 0.0, -3.0); }

namespace {

Preset MakePreset(std::string name, const PoseSE3& offset, DofMode mode,
                  NoiseModel noise) {
  Preset p;
  p.name = std::move(name);
  p.base.initial_pose = DefaultInitialPose();
  p.base.desired_pose = Compose(p.base.initial_pose, offset);
  p.base.control.lambda = 1.0;
  p.base.control.dof_mode = mode;
  p.base.dt = 0.05;
  p.base.estimator.kind = EstimatorKind::kOracle;
  p.base.estimator.noise = noise;
  return p;
}

std::vector<Preset> BuildPresets() {
  std::vector<Preset> presets;
  const PoseSE3 reference = OffsetPose(kReferenceOffsetMm, kReferenceOffsetEulerDeg);
  presets.push_back(
      MakePreset("paper-reference-noisefree", reference, DofMode::kSix, NoiseModel{}));
  presets.push_back(MakePreset("paper-reference-noisy", reference, DofMode::kSix,
                               NoiseModel{0.05, 0.05, 0}));

  Preset quad = MakePreset("quadrotor-4dof",
                           OffsetPose(kReferenceOffsetMm, Vec3(0.0, 0.0, -5.0)),
                           DofMode::kFour, NoiseModel{});
  quad.yaw_only = true;
  presets.push_back(quad);

  Preset tilted = MakePreset(
      "quadrotor-4dof-tilted",
      PoseSE3::Rotation(UnitQuaternion::RotZ(-5.0 * kDegToRad) *
                        UnitQuaternion::RotX(5.0 * kDegToRad)) *
          PoseSE3::Translation(kReferenceOffsetMm.x() / 1000.0,
                               kReferenceOffsetMm.y() / 1000.0,
                               kReferenceOffsetMm.z() / 1000.0),
      DofMode::kFour, NoiseModel{});
  tilted.yaw_only = true;
  tilted.fixed_tilt_deg = 5.0;
  presets.push_back(tilted);
  return presets;
}

}  // namespace

const std::vector<Preset>& Presets() {
  static const std::vector<Preset> presets = BuildPresets();
  return presets;
}

const Preset* FindPreset(std::string_view name) {
  for (const Preset& p : Presets()) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

PoseSE3 SampleTrialOffset(const Preset& preset, std::uint64_t seed,
                          int trial) {
  Xorshift64Star rng(seed ^ SplitMix64(static_cast<std::uint64_t>(trial)));
  const Vec3 dir = RandomUnitVector(rng);
  const double t_mag = rng.Uniform() * preset.max_offset_mm / 1000.0;
  UnitQuaternion rot;
  if (preset.yaw_only) {
    const double yaw = (2.0 * rng.Uniform() - 1.0) * preset.max_offset_deg;
    rot = UnitQuaternion::RotZ(yaw * kDegToRad);
  } else {
    const Vec3 axis = RandomUnitVector(rng);
    const double angle = rng.Uniform() * preset.max_offset_deg * kDegToRad;
    rot = UnitQuaternion::FromAxisAngle(axis, angle);
  }
  if (preset.fixed_tilt_deg != 0.0) {
    rot = rot * UnitQuaternion::RotX(preset.fixed_tilt_deg * kDegToRad);
  }
  return {rot, t_mag * dir};
}

BenchmarkSummary Benchmark(const Preset& preset, int n_trials,
                           std::uint64_t seed, int threads) {
  if (n_trials < 1) {
    throw Error(ErrorCode::kInvalidArgument, "n_trials must be >= 1");
  }
  std::vector<ServoRun> runs(static_cast<std::size_t>(n_trials));
  auto run_trial = [&](int i) {
    ServoConfig cfg = preset.base;
    cfg.desired_pose =
        Compose(cfg.initial_pose, SampleTrialOffset(preset, seed, i));
    cfg.estimator.noise.seed =
        SplitMix64(seed + static_cast<std::uint64_t>(i));
    runs[static_cast<std::size_t>(i)] = Run(cfg);
  };

  int workers = threads > 0 ? threads
                            : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, n_trials);
  if (workers == 1) {
    for (int i = 0; i < n_trials; ++i) run_trial(i);
  } else {
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int i = w; i < n_trials; i += workers) run_trial(i);
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
    pool.clear();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  BenchmarkSummary s;
  s.trials = n_trials;
  std::vector<double> t_err, r_err, iters;
  for (const ServoRun& r : runs) {
    if (r.converged) ++s.converged;
    t_err.push_back(r.final_record().t_err_mm);
    r_err.push_back(r.final_record().r_err_deg);
    iters.push_back(r.iters_used);
  }
  s.rate = static_cast<double>(s.converged) / n_trials;
  s.med_t_err_mm = Median(t_err);
  s.med_r_err_deg = Median(r_err);
  s.med_iters = Median(iters);
  return s;
}

std::string RunCsv(const ServoRun& run) {
  std::string out = kRunCsvHeader;
  out += '\n';
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof(buf), ",%.17g", v);
    out += buf;
  };
  for (const ServoRecord& r : run.records) {
    out += std::to_string(r.iter);
    const Vec3& t = r.pose.translation;
    const UnitQuaternion& q = r.pose.rotation;
    for (double v : {t.x(), t.y(), t.z(), q.w(), q.x(), q.y(), q.z(),
                     r.twist.v.x(), r.twist.v.y(), r.twist.v.z(),
                     r.twist.w.x(), r.twist.w.y(), r.twist.w.z(), r.t_err_mm,
                     r.r_err_deg}) {
      put(v);
    }
    out += '\n';
  }
  return out;
}

nlohmann::ordered_json SummaryJson(const BenchmarkSummary& summary) {
  nlohmann::ordered_json j;
  j["trials"] = summary.trials;
  j["converged"] = summary.converged;
  j["rate"] = summary.rate;
  j["med_t_err_mm"] = summary.med_t_err_mm;
  j["med_r_err_deg"] = summary.med_r_err_deg;
  j["med_iters"] = summary.med_iters;
  return j;
}

}  // namespace servobench
