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

// Seeded preference generators. Every generated row is a permutation of
// {1, ..., K} (players) or {1, ..., N} (arms) with the top choice receiving
// the largest mean, so consecutive ranks are one reward unit apart.
//
// Draw order, for reproducibility across implementations:
//  * uniform: player rows 0..N-1, then arm rows 0..K-1, each one shuffle;
//  * beta_heterogeneous: x_0..x_{K-1}, then for each player the K logistic
//    draws (the row is redrawn on an exact tie), then the arm rows as in
//    uniform;
//  * edge_correlated: weights w[p][a] in row-major order (all redrawn on any
//    tie within a player row or arm column).

#ifndef TWOSIDED_PREF_GEN_HPP_
#define TWOSIDED_PREF_GEN_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "twosided/market.hpp"

namespace twosided {

enum class GeneratorKind { kUniform, kBetaHeterogeneous, kEdgeCorrelated };

std::string_view to_string(GeneratorKind kind);
GeneratorKind parse_generator_kind(std::string_view name);

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::kUniform;
  int n_players = 1;
  int n_arms = 1;
  double beta = 0.0;  // only read by kBetaHeterogeneous
  std::uint64_t seed = 0;

  void validate() const;

  bool operator==(const GeneratorSpec&) const = default;
};

PreferenceProfile gen_uniform(int n_players, int n_arms, std::uint64_t seed);

// Shared arm quality x_j ~ U[0,1] scaled by beta plus Logistic(0,1) noise per
// (player, arm); player means are the within-row ranks. Arm rows are uniform.
PreferenceProfile gen_beta_heterogeneous(int n_players, int n_arms, double beta,
                                         std::uint64_t seed);

// One weight per (player, arm) edge drawn from U[0,1]; both endpoints rank
// their partners by that weight.
PreferenceProfile gen_edge_correlated(int n_players, int n_arms, std::uint64_t seed);

// The deterministic half of gen_edge_correlated. `weights` is n_players x
// n_arms row-major and must have distinct entries within each row and column.
PreferenceProfile profile_from_edge_weights(int n_players, int n_arms,
                                            std::span<const double> weights);

PreferenceProfile generate(const GeneratorSpec& spec);

// rank[j] = #{k : scores[k] <= scores[j]}; nullopt when two scores are equal.
std::optional<std::vector<double>> rank_scores(std::span<const double> scores);

}  // namespace twosided

#endif  // TWOSIDED_PREF_GEN_HPP_
