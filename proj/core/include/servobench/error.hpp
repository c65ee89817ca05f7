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

#include <stdexcept>
#include <string>
#include <string_view>

namespace servobench {

enum class ErrorCode {
  kInvalidArgument,
  kZeroQuaternion,
  kParseError,
  kNonRigidPose,
  kEmptyTrajectory,
  kMissingFrame,
  kIoError,
  kTimeout,
  kProtocolError,
  kProcessDead,
  kDegenerateTrajectory,
};

std::string_view ToString(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ToString(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// An estimator failure observed inside the servo loop.
class EstimatorFailure : public Error {
 public:
  EstimatorFailure(ErrorCode code, int iteration, const std::string& message)
      : Error(code, "iteration " + std::to_string(iteration) + ": " + message),
        iteration_(iteration) {}

  int iteration() const noexcept { return iteration_; }

 private:
  int iteration_;
};

}  // namespace servobench
