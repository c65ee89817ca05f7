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

#include <cmath>
#include <cstdint>
#include <numbers>

namespace servobench {

/// SplitMix64 finalizer. Used to expand a user seed into generator state.
constexpr std::uint64_t SplitMix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Xorshift64* (Vigna 2014), shifts (12, 25, 27), multiplier
/// 0x2545F4914F6CDD1D. State is SplitMix64(seed), replaced by a fixed
/// constant in the (impossible in practice) zero case. Versioned as
/// "xs64star-v1"; every derived quantity below is specified bit for bit so
/// scenes and noise sequences reproduce across implementations.
class Xorshift64Star {
 public:
  static constexpr const char* kAlgorithm = "xs64star-v1";

  explicit constexpr Xorshift64Star(std::uint64_t seed) noexcept
      : state_(SplitMix64(seed)) {
    if (state_ == 0) state_ = 0x9E3779B97F4A7C15ULL;
  }

  constexpr std::uint64_t Next() noexcept {
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545F4914F6CDD1DULL;
  }

  /// Uniform in [0, 1) from the top 53 bits.
  double Uniform() noexcept {
    return static_cast<double>(Next() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller, cosine branch only; consumes exactly
  /// two draws per call.
  double Gaussian() noexcept {
    const double u1 = 1.0 - Uniform();  // (0, 1]
    const double u2 = Uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t state_;
};

}  // namespace servobench
