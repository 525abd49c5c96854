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

// The round engine.
//
// One episode owns a single Rng seeded from EpisodeConfig::seed. Within a
// round randomness is consumed in this order:
//   1. players 0..N-1 choose (delay draw, reward samples, tie breaks);
//   2. arms 0..K-1 resolve their requesters;
//   3. arms 0..K-1 with an accepted player draw the player reward, then the
//      arm reward, each ~ Normal(mean, 1).
// Beliefs are updated after the whole outcome is published.

#ifndef TWOSIDED_SIMULATOR_HPP_
#define TWOSIDED_SIMULATOR_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "twosided/market.hpp"
#include "twosided/policies.hpp"
#include "twosided/pref_gen.hpp"

namespace twosided {

enum class Scenario { kApck, kApkp, kApu };

std::string_view to_string(Scenario scenario);
Scenario parse_scenario(std::string_view name);

struct EpisodeConfig {
  Scenario scenario = Scenario::kApck;
  PlayerPolicyKind player_policy = PlayerPolicyKind::kCaUcb;
  ArmPolicyKind arm_policy = ArmPolicyKind::kKnownPrefs;
  GeneratorSpec generator;
  int horizon = 1000;
  double lambda = 0.9;
  int snapshot_every = 10;
  std::uint64_t seed = 0;
  BeliefOptions beliefs;

  // Throws ConfigError on scenario/policy mismatch or bad numeric fields.
  void validate() const;

  bool operator==(const EpisodeConfig&) const = default;
};

struct SnapshotMetrics {
  bool stable = false;
  double max_regret = 0.0;
  int conflicts = 0;  // arms with >= 2 requesters in this round
};

SnapshotMetrics snapshot_metrics(const PreferenceProfile& profile, const RoundOutcome& outcome);

struct Snapshot {
  int t = 0;
  bool stable = false;
  double max_regret = 0.0;
  int conflicts = 0;  // summed over rounds (t - snapshot_every, t]
  Matching matching;
};

// End-of-run summary of one player's beliefs.
struct PlayerDigest {
  std::vector<std::int64_t> pulls;           // per arm
  std::vector<double> mean_estimate;         // empirical mean or posterior mean, per arm
  std::vector<std::vector<PlayerId>> higher;  // oca_ucb: believed-higher set per arm
};

struct RunLog {
  EpisodeConfig config;
  PreferenceProfile profile;
  std::vector<Snapshot> snapshots;
  std::vector<PlayerDigest> players;
};

// Executes one round given the previous published outcome (nullptr at t = 1)
// and applies all belief updates.
RoundOutcome run_round(const PreferenceProfile& profile, std::span<PlayerPolicyState> players,
                       std::span<ArmPolicyState> arms, const RoundOutcome* last, int t, Rng& rng);

// Stateful episode driver, for callers that want to step rounds themselves.
class Episode {
 public:
  Episode(const EpisodeConfig& config, PreferenceProfile profile);
  explicit Episode(const EpisodeConfig& config);

  const RoundOutcome& step();

  int round() const { return round_; }
  const EpisodeConfig& config() const { return config_; }
  const PreferenceProfile& profile() const { return profile_; }
  const Matching& pessimal() const { return pessimal_; }
  std::span<const PlayerPolicyState> players() const { return players_; }
  std::span<const ArmPolicyState> arms() const { return arms_; }
  const RoundOutcome* last() const { return last_ ? &*last_ : nullptr; }

  std::vector<PlayerDigest> digests() const;

 private:
  EpisodeConfig config_;
  PreferenceProfile profile_;
  Matching pessimal_;
  std::vector<PlayerPolicyState> players_;
  std::vector<ArmPolicyState> arms_;
  std::optional<RoundOutcome> last_;
  Rng rng_;
  int round_ = 0;
};

using RoundObserver = std::function<void(const Episode&, const RoundOutcome&)>;

RunLog run_episode(const EpisodeConfig& config, const RoundObserver& observer = {});

}  // namespace twosided

#endif  // TWOSIDED_SIMULATOR_HPP_
