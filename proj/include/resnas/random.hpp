// Copyright 2026 The resnas Authors.
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
#include <random>

namespace resnas {

/// Source of randomness injected into every stochastic operation.
///
/// All sampling in the engine is expressed through these two primitives, so a
/// scripted implementation can force any draw sequence in tests.
class RandomSource {
 public:
  virtual ~RandomSource() = default;

  /// Uniform real in [0, 1).
  virtual double uniform01() = 0;

  /// Uniform integer in the inclusive range [lo, hi]. Requires lo <= hi.
  virtual std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) = 0;
};

/// Seeded 64-bit Mersenne Twister with implementation-independent mapping of
/// raw draws to reals and integers (std distributions are not portable).
class SeededRandom final : public RandomSource {
 public:
  explicit SeededRandom(std::uint64_t seed) : engine_(seed) {}

  double uniform01() override;
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) override;

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Derives an independent stream seed from a master seed and two coordinates
/// (e.g. generation and offspring index).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b);

}  // namespace resnas
