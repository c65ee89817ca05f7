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

#include "servobench/estimator.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <mutex>
#include <nlohmann/json.hpp>
#include <thread>
#include <vector>

#include "servobench/error.hpp"
#include "servobench/rng.hpp"

namespace servobench {

namespace fs = std::filesystem;
using json = nlohmann::json;

void NoiseModel::Validate() const {
  if (!(rel_sigma_t >= 0.0) || !(rel_sigma_r >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "noise sigmas must be >= 0");
  }
}

PoseVector OracleEstimate(const PoseSE3& current, const PoseSE3& desired,
                          const NoiseModel& noise, std::uint64_t call_index) {
  PoseVector rel = PoseVector::FromPose(Relative(current, desired));
  if (noise.IsZero()) return rel;

  Xorshift64Star rng(noise.seed ^ SplitMix64(call_index));
  const double t_sigma = noise.rel_sigma_t * rel.x.norm();
  const Vec3 dt(rng.Gaussian(), rng.Gaussian(), rng.Gaussian());
  Vec3 axis(rng.Gaussian(), rng.Gaussian(), rng.Gaussian());
  const double angle =
      noise.rel_sigma_r * RotationAngle(rel.q) * rng.Gaussian();

  if (t_sigma > 0.0) rel.x += t_sigma * dt;
  const double axis_norm = axis.norm();
  if (angle != 0.0 && axis_norm > 0.0) {
    rel.q = rel.q * Exp((angle / axis_norm) * axis);
  }
  return rel;
}

void ExternalEstimatorConfig::Validate() const {
  if (command.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "estimator command is empty");
  }
  if (!(timeout_s > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "estimator timeout must be > 0");
  }
}

std::string FormatEstimateRequest(const fs::path& cur, const fs::path& des) {
  nlohmann::ordered_json request;
  request["v"] = 1;
  request["cur"] = cur.string();
  request["des"] = des.string();
  return request.dump();
}

namespace {

std::vector<double> FiniteArray(const json& msg, const char* key,
                                std::size_t size) {
  const auto it = msg.find(key);
  if (it == msg.end() || !it->is_array() || it->size() != size) {
    throw Error(ErrorCode::kProtocolError,
                std::string("field '") + key + "' must be an array of " +
                    std::to_string(size) + " numbers");
  }
  std::vector<double> out;
  for (const json& v : *it) {
    if (!v.is_number() || !std::isfinite(v.get<double>())) {
      throw Error(ErrorCode::kProtocolError,
                  std::string("field '") + key + "' has a non-finite entry");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

void CheckVersion(const json& msg) {
  const auto v = msg.find("v");
  if (v == msg.end() || !v->is_number_integer() || v->get<int>() != 1) {
    throw Error(ErrorCode::kProtocolError, "missing or unsupported \"v\"");
  }
}

}  // namespace

PoseVector ParseEstimateResponse(std::string_view line) {
  const json msg = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (msg.is_discarded() || !msg.is_object()) {
    throw Error(ErrorCode::kProtocolError,
                "response is not a JSON object: " + std::string(line));
  }
  CheckVersion(msg);
  if (const auto err = msg.find("error"); err != msg.end()) {
    throw Error(ErrorCode::kProtocolError,
                "estimator reported: " +
                    (err->is_string() ? err->get<std::string>() : err->dump()));
  }
  const std::vector<double> x = FiniteArray(msg, "x", 3);
  const std::vector<double> q = FiniteArray(msg, "q", 4);
  PoseVector pv;
  pv.x = Vec3(x[0], x[1], x[2]);
  try {
    pv.q = UnitQuaternion::FromRaw(q[0], q[1], q[2], q[3]);
  } catch (const Error& e) {
    throw Error(ErrorCode::kProtocolError, e.what());
  }
  return pv;
}

ExternalClient::ExternalClient(ExternalEstimatorConfig cfg)
    : cfg_(std::move(cfg)) {
  cfg_.Validate();
  // A dead child must surface as EPIPE, not kill the parent.
  static std::once_flag sigpipe_once;
  std::call_once(sigpipe_once, [] { ::signal(SIGPIPE, SIG_IGN); });

  std::string tmpl = (fs::temp_directory_path() / "servobench-XXXXXX").string();
  if (::mkdtemp(tmpl.data()) == nullptr) {
    throw Error(ErrorCode::kIoError, "cannot create estimator workspace");
  }
  workspace_ = tmpl;

  int in_pipe[2];
  int out_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) {
    throw Error(ErrorCode::kProcessDead, std::strerror(errno));
  }
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw Error(ErrorCode::kProcessDead, std::strerror(errno));
  }
  const pid_t pid = ::fork();
  if (pid < 0) {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) {
      ::close(fd);
    }
    throw Error(ErrorCode::kProcessDead,
                std::string("fork failed: ") + std::strerror(errno));
  }
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::execl("/bin/sh", "sh", "-c", cfg_.command.c_str(),
            static_cast<char*>(nullptr));
    ::_exit(127);
  }
  pid_ = pid;
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];

  try {
    const auto deadline =
        Clock::now() + std::chrono::duration_cast<Clock::duration>(
                           std::chrono::duration<double>(cfg_.timeout_s));
    const std::string line = ReadLine(deadline);
    const json hello = json::parse(line, nullptr, false);
    if (hello.is_discarded() || !hello.is_object()) {
      throw Error(ErrorCode::kProtocolError, "bad handshake: " + line);
    }
    CheckVersion(hello);
    const auto ready = hello.find("ready");
    if (ready == hello.end() || *ready != true) {
      throw Error(ErrorCode::kProtocolError, "bad handshake: " + line);
    }
  } catch (...) {
    Terminate();
    throw;
  }
}

ExternalClient::~ExternalClient() { Terminate(); }

void ExternalClient::Terminate() {
  if (to_child_ >= 0) ::close(to_child_);
  to_child_ = -1;
  if (pid_ > 0) {
    // Closing stdin asks the child to exit; give it a moment, then kill.
    int status = 0;
    bool reaped = false;
    for (int i = 0; i < 20 && !reaped; ++i) {
      reaped = ::waitpid(pid_, &status, WNOHANG) == pid_;
      if (!reaped) std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    if (!reaped) {
      ::kill(-pid_, SIGKILL);
      ::kill(pid_, SIGKILL);
      ::waitpid(pid_, &status, 0);
    }
    pid_ = -1;
  }
  if (from_child_ >= 0) ::close(from_child_);
  from_child_ = -1;
  if (!workspace_.empty()) {
    std::error_code ec;
    fs::remove_all(workspace_, ec);
    workspace_.clear();
  }
}

std::string ExternalClient::ReadLine(Clock::time_point deadline) {
  for (;;) {
    if (const auto nl = buffer_.find('\n'); nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - Clock::now());
    if (remaining.count() <= 0) {
      throw Error(ErrorCode::kTimeout,
                  "no response within " + std::to_string(cfg_.timeout_s) + " s");
    }
    pollfd pfd{from_child_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, static_cast<int>(remaining.count()));
    if (ready < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::kProcessDead, std::strerror(errno));
    }
    if (ready == 0) continue;  // deadline re-checked above
    char chunk[4096];
    const ssize_t n = ::read(from_child_, chunk, sizeof(chunk));
    if (n < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      throw Error(ErrorCode::kProcessDead, std::strerror(errno));
    }
    if (n == 0) {
      throw Error(ErrorCode::kProcessDead, "estimator closed its output");
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

void ExternalClient::WriteLine(const std::string& line) {
  const std::string data = line + "\n";
  std::size_t written = 0;
  while (written < data.size()) {
    const ssize_t n =
        ::write(to_child_, data.data() + written, data.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::kProcessDead,
                  std::string("write to estimator failed: ") +
                      std::strerror(errno));
    }
    written += static_cast<std::size_t>(n);
  }
}

PoseVector ExternalClient::Estimate(const Image& current,
                                    const Image& desired) {
  if (!alive()) {
    throw Error(ErrorCode::kProcessDead, "estimator session is closed");
  }
  char stem[32];
  std::snprintf(stem, sizeof(stem), "req-%06llu",
                static_cast<unsigned long long>(requests_++));
  const fs::path cur = workspace_ / (std::string(stem) + "-cur.ppm");
  const fs::path des = workspace_ / (std::string(stem) + "-des.ppm");
  WritePpm(current, cur);
  WritePpm(desired, des);

  try {
    WriteLine(FormatEstimateRequest(cur, des));
    const auto deadline =
        Clock::now() + std::chrono::duration_cast<Clock::duration>(
                           std::chrono::duration<double>(cfg_.timeout_s));
    PoseVector pv = ParseEstimateResponse(ReadLine(deadline));
    std::error_code ec;
    fs::remove(cur, ec);
    fs::remove(des, ec);
    return pv;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kProtocolError) Terminate();
    throw;
  }
}

ImageEstimator::ImageEstimator(std::unique_ptr<ExternalClient> client,
                               PointScene scene, CameraIntrinsics k,
                               int splat_radius)
    : client_(std::move(client)),
      scene_(std::move(scene)),
      k_(k),
      splat_radius_(splat_radius) {
  k_.Validate();
}

PoseVector ImageEstimator::Estimate(const PoseSE3& current,
                                    const PoseSE3& desired) {
  return client_->Estimate(Render(scene_, current, k_, splat_radius_),
                           Render(scene_, desired, k_, splat_radius_));
}

}  // namespace servobench
