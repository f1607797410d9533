// Copyright 2026 The tomolab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

#include "tomolab/types.hpp"

namespace tomolab {

/// Seedable random stream with a platform-stable output sequence.
///
/// The engine is mt19937_64, whose sequence is fixed by the C++ standard.
/// Uniform and normal variates are derived here rather than through the
/// <random> distributions, whose algorithms are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream for a path of indices under a master seed, e.g.
  /// (master, povm_key, state_index). Equal paths give equal streams.
  static Rng stream(std::uint64_t master, std::initializer_list<std::uint64_t> path);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller; consumes exactly two engine outputs.
  double normal();

  /// Complex normal with E|z|^2 = 1.
  cplx complex_normal();

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; used to combine seeds and stream indices.
std::uint64_t mix64(std::uint64_t x);

/// Stable 64-bit FNV-1a hash of a string (stream keys derived from names).
std::uint64_t stable_hash(std::string_view text);

}  // namespace tomolab
