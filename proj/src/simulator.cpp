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

#include "twosided/simulator.hpp"

#include <cmath>
#include <random>
#include <string>

namespace twosided {

std::string_view to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::kApck:
      return "APCK";
    case Scenario::kApkp:
      return "APKP";
    case Scenario::kApu:
      return "APU";
  }
  return "unknown";
}

Scenario parse_scenario(std::string_view name) {
  if (name == "APCK") return Scenario::kApck;
  if (name == "APKP") return Scenario::kApkp;
  if (name == "APU") return Scenario::kApu;
  throw ConfigError("unknown scenario '" + std::string(name) + "'");
}

void EpisodeConfig::validate() const {
  bool consistent = false;
  switch (scenario) {
    case Scenario::kApck:
      consistent = player_policy == PlayerPolicyKind::kCaUcb && arm_policy == ArmPolicyKind::kKnownPrefs;
      break;
    case Scenario::kApkp:
      consistent = player_policy == PlayerPolicyKind::kOcaUcb && arm_policy == ArmPolicyKind::kKnownPrefs;
      break;
    case Scenario::kApu:
      consistent = (player_policy == PlayerPolicyKind::kPcaUcb || player_policy == PlayerPolicyKind::kPcaTs) &&
                   (arm_policy == ArmPolicyKind::kLearningUcb || arm_policy == ArmPolicyKind::kLearningTs);
      break;
  }
  if (!consistent) {
    throw ConfigError("scenario " + std::string(to_string(scenario)) + " cannot use player policy " +
                      std::string(to_string(player_policy)) + " with arm policy " +
                      std::string(to_string(arm_policy)));
  }
  if (horizon < 1) throw ConfigError("horizon must be >= 1");
  if (snapshot_every < 1) throw ConfigError("snapshot_every must be >= 1");
  if (!(lambda >= 0.0 && lambda < 1.0)) throw ConfigError("lambda must lie in [0, 1)");
  if (!(beliefs.prior_precision > 0.0) || !std::isfinite(beliefs.prior_mean)) {
    throw ConfigError("prior precision must be positive and prior mean finite");
  }
  try {
    generator.validate();
  } catch (const InputError& e) {
    throw ConfigError(std::string("generator: ") + e.what());
  }
}

SnapshotMetrics snapshot_metrics(const PreferenceProfile& profile, const RoundOutcome& outcome) {
  SnapshotMetrics m;
  m.stable = is_stable(profile, outcome.matching);
  m.max_regret = max_player_regret(profile, outcome.matching);
  m.conflicts = static_cast<int>(outcome.conflicts.size());
  return m;
}

RoundOutcome run_round(const PreferenceProfile& profile, std::span<PlayerPolicyState> players,
                       std::span<ArmPolicyState> arms, const RoundOutcome* last, int t, Rng& rng) {
  if (t < 1) throw InputError("round index must be >= 1");
  const int n = profile.n_players;
  const int k = profile.n_arms;
  RoundOutcome out;
  out.round = t;
  out.attempts.assign(n, kUnmatched);
  out.matching = Matching(n, k);
  out.player_rewards.assign(n, 0.0);
  out.arm_rewards.assign(k, 0.0);

  for (PlayerId p = 0; p < n; ++p) out.attempts[p] = choose_arm(players[p], t, last, profile, rng);

  std::vector<std::vector<PlayerId>> requesters(k);
  for (PlayerId p = 0; p < n; ++p) requesters[out.attempts[p]].push_back(p);

  for (ArmId a = 0; a < k; ++a) {
    const auto winner = resolve_conflict(a, requesters[a], arms[a], profile, t, rng);
    if (!winner) continue;
    out.matching.assign(*winner, a);
    if (requesters[a].size() >= 2) out.conflicts.push_back({a, requesters[a], *winner});
  }

  for (ArmId a = 0; a < k; ++a) {
    const auto p = out.matching.player_of(a);
    if (!p) continue;
    std::normal_distribution<double> player_reward(profile.player_mean(*p, a), 1.0);
    std::normal_distribution<double> arm_reward(profile.arm_mean(a, *p), 1.0);
    out.player_rewards[*p] = player_reward(rng);
    out.arm_rewards[a] = arm_reward(rng);
  }

  for (auto& state : players) update_player_after_round(state, out);
  for (auto& state : arms) update_arm_after_round(state, out);
  return out;
}

Episode::Episode(const EpisodeConfig& config, PreferenceProfile profile)
    : config_(config), profile_(std::move(profile)), rng_(config.seed) {
  config_.validate();
  profile_.validate();
  pessimal_ = player_pessimal_matching(profile_);
  for (PlayerId p = 0; p < profile_.n_players; ++p) {
    players_.push_back(PlayerPolicyState::make(config_.player_policy, p, profile_.n_players,
                                               profile_.n_arms, config_.lambda, config_.beliefs));
  }
  for (ArmId a = 0; a < profile_.n_arms; ++a) {
    arms_.push_back(ArmPolicyState::make(config_.arm_policy, a, profile_.n_players, config_.beliefs));
  }
}

Episode::Episode(const EpisodeConfig& config) : Episode(config, [&] {
  config.validate();
  return generate(config.generator);
}()) {}

const RoundOutcome& Episode::step() {
  ++round_;
  last_ = run_round(profile_, players_, arms_, last(), round_, rng_);
  return *last_;
}

std::vector<PlayerDigest> Episode::digests() const {
  std::vector<PlayerDigest> out;
  for (const auto& s : players_) {
    PlayerDigest d;
    for (ArmId a = 0; a < s.n_arms; ++a) {
      if (s.kind == PlayerPolicyKind::kPcaTs) {
        const auto& post = s.reward_posteriors[a];
        d.pulls.push_back(static_cast<std::int64_t>(
            std::llround((post.precision - config_.beliefs.prior_precision) / post.known_obs_precision)));
        d.mean_estimate.push_back(post.mean);
      } else {
        d.pulls.push_back(s.reward_stats[a].count);
        d.mean_estimate.push_back(s.reward_stats[a].mean());
      }
      if (s.kind == PlayerPolicyKind::kOcaUcb) d.higher.push_back(s.position_beliefs[a].higher());
    }
    out.push_back(std::move(d));
  }
  return out;
}

RunLog run_episode(const EpisodeConfig& config, const RoundObserver& observer) {
  Episode episode(config);
  RunLog log;
  log.config = config;
  log.profile = episode.profile();
  int window_conflicts = 0;
  for (int t = 1; t <= config.horizon; ++t) {
    const RoundOutcome& outcome = episode.step();
    window_conflicts += static_cast<int>(outcome.conflicts.size());
    if (observer) observer(episode, outcome);
    if (t % config.snapshot_every == 0) {
      Snapshot s;
      s.t = t;
      s.stable = is_stable(episode.profile(), outcome.matching);
      s.max_regret = max_player_regret(episode.profile(), outcome.matching, episode.pessimal());
      s.conflicts = window_conflicts;
      s.matching = outcome.matching;
      log.snapshots.push_back(std::move(s));
      window_conflicts = 0;
    }
  }
  log.players = episode.digests();
  return log;
}

}  // namespace twosided
