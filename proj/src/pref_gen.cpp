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

#include "twosided/pref_gen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace twosided {

namespace {

void check_sizes(int n_players, int n_arms) {
  if (n_players < 1 || n_arms < 1) throw InputError("market needs at least one player and one arm");
  if (n_players > n_arms) {
    throw InputError("n_players (" + std::to_string(n_players) + ") exceeds n_arms (" +
                     std::to_string(n_arms) + ")");
  }
}

void append_permutation_row(std::vector<double>& out, int length, Rng& rng) {
  std::vector<double> row(length);
  std::iota(row.begin(), row.end(), 1.0);
  std::shuffle(row.begin(), row.end(), rng);
  out.insert(out.end(), row.begin(), row.end());
}

// Open interval (0, 1): generate_canonical may return 0.
double open_unit(Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double u = 0.0;
  do {
    u = unit(rng);
  } while (u <= 0.0 || u >= 1.0);
  return u;
}

double standard_logistic(Rng& rng) {
  const double u = open_unit(rng);
  return std::log(u / (1.0 - u));
}

}  // namespace

std::string_view to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::kUniform:
      return "uniform";
    case GeneratorKind::kBetaHeterogeneous:
      return "beta_heterogeneous";
    case GeneratorKind::kEdgeCorrelated:
      return "edge_correlated";
  }
  return "unknown";
}

GeneratorKind parse_generator_kind(std::string_view name) {
  if (name == "uniform") return GeneratorKind::kUniform;
  if (name == "beta_heterogeneous") return GeneratorKind::kBetaHeterogeneous;
  if (name == "edge_correlated") return GeneratorKind::kEdgeCorrelated;
  throw ConfigError("unknown generator kind '" + std::string(name) + "'");
}

void GeneratorSpec::validate() const {
  check_sizes(n_players, n_arms);
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw InputError("beta must be a finite value >= 0");
}

std::optional<std::vector<double>> rank_scores(std::span<const double> scores) {
  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return scores[a] < scores[b]; });
  std::vector<double> ranks(scores.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    if (r > 0 && scores[order[r]] == scores[order[r - 1]]) return std::nullopt;
    ranks[order[r]] = static_cast<double>(r + 1);
  }
  return ranks;
}

PreferenceProfile gen_uniform(int n_players, int n_arms, std::uint64_t seed) {
  check_sizes(n_players, n_arms);
  Rng rng(seed);
  PreferenceProfile profile{n_players, n_arms, {}, {}};
  profile.player_means.reserve(static_cast<std::size_t>(n_players) * n_arms);
  profile.arm_means.reserve(static_cast<std::size_t>(n_players) * n_arms);
  for (int p = 0; p < n_players; ++p) append_permutation_row(profile.player_means, n_arms, rng);
  for (int a = 0; a < n_arms; ++a) append_permutation_row(profile.arm_means, n_players, rng);
  return profile;
}

PreferenceProfile gen_beta_heterogeneous(int n_players, int n_arms, double beta,
                                         std::uint64_t seed) {
  GeneratorSpec{GeneratorKind::kBetaHeterogeneous, n_players, n_arms, beta, seed}.validate();
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> quality(n_arms);
  for (double& x : quality) x = unit(rng);

  PreferenceProfile profile{n_players, n_arms, {}, {}};
  profile.player_means.reserve(static_cast<std::size_t>(n_players) * n_arms);
  std::vector<double> utility(n_arms);
  for (int p = 0; p < n_players; ++p) {
    std::optional<std::vector<double>> ranks;
    while (!ranks) {
      for (int a = 0; a < n_arms; ++a) utility[a] = beta * quality[a] + standard_logistic(rng);
      ranks = rank_scores(utility);
    }
    profile.player_means.insert(profile.player_means.end(), ranks->begin(), ranks->end());
  }
  for (int a = 0; a < n_arms; ++a) append_permutation_row(profile.arm_means, n_players, rng);
  return profile;
}

PreferenceProfile profile_from_edge_weights(int n_players, int n_arms,
                                            std::span<const double> weights) {
  check_sizes(n_players, n_arms);
  if (weights.size() != static_cast<std::size_t>(n_players) * n_arms) {
    throw InputError("edge weight matrix must be n_players x n_arms");
  }
  PreferenceProfile profile{n_players, n_arms, {}, {}};
  for (int p = 0; p < n_players; ++p) {
    auto ranks = rank_scores(weights.subspan(static_cast<std::size_t>(p) * n_arms, n_arms));
    if (!ranks) throw InputError("tied edge weights in player row " + std::to_string(p));
    profile.player_means.insert(profile.player_means.end(), ranks->begin(), ranks->end());
  }
  std::vector<double> column(n_players);
  for (int a = 0; a < n_arms; ++a) {
    for (int p = 0; p < n_players; ++p) column[p] = weights[static_cast<std::size_t>(p) * n_arms + a];
    auto ranks = rank_scores(column);
    if (!ranks) throw InputError("tied edge weights in arm column " + std::to_string(a));
    profile.arm_means.insert(profile.arm_means.end(), ranks->begin(), ranks->end());
  }
  return profile;
}

PreferenceProfile gen_edge_correlated(int n_players, int n_arms, std::uint64_t seed) {
  check_sizes(n_players, n_arms);
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> weights(static_cast<std::size_t>(n_players) * n_arms);
  for (;;) {
    for (double& w : weights) w = unit(rng);
    try {
      return profile_from_edge_weights(n_players, n_arms, weights);
    } catch (const InputError&) {
      // exact tie; redraw the whole matrix
    }
  }
}

PreferenceProfile generate(const GeneratorSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case GeneratorKind::kUniform:
      return gen_uniform(spec.n_players, spec.n_arms, spec.seed);
    case GeneratorKind::kBetaHeterogeneous:
      return gen_beta_heterogeneous(spec.n_players, spec.n_arms, spec.beta, spec.seed);
    case GeneratorKind::kEdgeCorrelated:
      return gen_edge_correlated(spec.n_players, spec.n_arms, spec.seed);
  }
  throw ConfigError("unhandled generator kind");
}

}  // namespace twosided
