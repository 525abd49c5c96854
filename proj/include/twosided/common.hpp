// Copyright 2026 The twosided Authors.
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

#ifndef TWOSIDED_COMMON_HPP_
#define TWOSIDED_COMMON_HPP_

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace twosided {

// Dense indices: players in [0, N), arms in [0, K).
using PlayerId = int;
using ArmId = int;

// Marks "no partner" in assignment vectors.
inline constexpr int kUnmatched = -1;

// Every stochastic component draws from one engine per episode.
using Rng = std::mt19937_64;

// Bad argument values: out-of-range ids, malformed matrices, violated
// preconditions.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Inconsistent or malformed experiment/episode configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Filesystem and parse failures for persisted artifacts.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const char* library_version() noexcept;

}  // namespace twosided

#endif  // TWOSIDED_COMMON_HPP_
