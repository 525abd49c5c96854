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

#include "twosided/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace twosided {

namespace {

ArmId uniform_arm(int n_arms, Rng& rng) {
  std::uniform_int_distribution<int> pick(0, n_arms - 1);
  return pick(rng);
}

bool repeat_last(const PlayerPolicyState& state, Rng& rng) {
  std::bernoulli_distribution delay(state.lambda);
  const bool d = delay(rng);
  return d && state.last_attempt.has_value();
}

template <class HolderRanksBelow>
std::vector<ArmId> plausible_from(PlayerId player, const RoundOutcome* last, int n_arms,
                                  HolderRanksBelow holder_ranks_below) {
  std::vector<ArmId> out;
  for (ArmId a = 0; a < n_arms; ++a) {
    if (last == nullptr) {
      out.push_back(a);
      continue;
    }
    const auto holder = last->matching.player_of(a);
    if (!holder || *holder == player || holder_ranks_below(a, *holder)) out.push_back(a);
  }
  return out;
}

std::size_t pair_index(const PlayerPolicyState& s, PlayerId opponent, ArmId arm) {
  if (opponent < 0 || opponent >= s.n_players || arm < 0 || arm >= s.n_arms) {
    throw InputError("win statistic index out of range");
  }
  return static_cast<std::size_t>(opponent) * s.n_arms + arm;
}

bool is_pca(PlayerPolicyKind kind) {
  return kind == PlayerPolicyKind::kPcaUcb || kind == PlayerPolicyKind::kPcaTs;
}

}  // namespace

std::string_view to_string(PlayerPolicyKind kind) {
  switch (kind) {
    case PlayerPolicyKind::kCaUcb:
      return "ca_ucb";
    case PlayerPolicyKind::kOcaUcb:
      return "oca_ucb";
    case PlayerPolicyKind::kPcaUcb:
      return "pca_ucb";
    case PlayerPolicyKind::kPcaTs:
      return "pca_ts";
  }
  return "unknown";
}

std::string_view to_string(ArmPolicyKind kind) {
  switch (kind) {
    case ArmPolicyKind::kKnownPrefs:
      return "known_prefs";
    case ArmPolicyKind::kLearningUcb:
      return "learning_ucb";
    case ArmPolicyKind::kLearningTs:
      return "learning_ts";
  }
  return "unknown";
}

PlayerPolicyKind parse_player_policy(std::string_view name) {
  if (name == "ca_ucb") return PlayerPolicyKind::kCaUcb;
  if (name == "oca_ucb") return PlayerPolicyKind::kOcaUcb;
  if (name == "pca_ucb") return PlayerPolicyKind::kPcaUcb;
  if (name == "pca_ts") return PlayerPolicyKind::kPcaTs;
  throw ConfigError("unknown player policy '" + std::string(name) + "'");
}

ArmPolicyKind parse_arm_policy(std::string_view name) {
  if (name == "known_prefs") return ArmPolicyKind::kKnownPrefs;
  if (name == "learning_ucb") return ArmPolicyKind::kLearningUcb;
  if (name == "learning_ts") return ArmPolicyKind::kLearningTs;
  throw ConfigError("unknown arm policy '" + std::string(name) + "'");
}

PlayerPolicyState PlayerPolicyState::make(PlayerPolicyKind kind, PlayerId self, int n_players,
                                          int n_arms, double lambda, const BeliefOptions& options) {
  PlayerPolicyState s;
  s.kind = kind;
  s.self = self;
  s.n_players = n_players;
  s.n_arms = n_arms;
  s.lambda = lambda;
  s.options = options;
  const auto pairs = static_cast<std::size_t>(n_players) * n_arms;
  switch (kind) {
    case PlayerPolicyKind::kCaUcb:
      s.reward_stats.resize(n_arms);
      break;
    case PlayerPolicyKind::kOcaUcb:
      s.reward_stats.resize(n_arms);
      s.position_beliefs.assign(n_arms, PositionBelief(self, n_players));
      break;
    case PlayerPolicyKind::kPcaUcb:
      s.reward_stats.resize(n_arms);
      s.win_stats.resize(pairs);
      break;
    case PlayerPolicyKind::kPcaTs:
      s.reward_posteriors.assign(n_arms, GaussianPosterior{options.prior_mean, options.prior_precision, 1.0});
      s.win_counts.resize(pairs);
      break;
  }
  s.check_invariants();
  return s;
}

void PlayerPolicyState::check_invariants() const {
  if (!(lambda >= 0.0 && lambda < 1.0)) throw InputError("lambda must lie in [0, 1)");
  if (self < 0 || self >= n_players) throw InputError("player policy owner out of range");
  const auto pairs = static_cast<std::size_t>(n_players) * n_arms;
  const auto arms = static_cast<std::size_t>(n_arms);
  const bool ts = kind == PlayerPolicyKind::kPcaTs;
  const bool ok =
      reward_stats.size() == (ts ? 0 : arms) && reward_posteriors.size() == (ts ? arms : 0) &&
      win_stats.size() == (kind == PlayerPolicyKind::kPcaUcb ? pairs : 0) &&
      win_counts.size() == (ts ? pairs : 0) &&
      position_beliefs.size() == (kind == PlayerPolicyKind::kOcaUcb ? arms : 0);
  if (!ok) throw InputError("player policy state does not match its kind");
}

const WinStats& PlayerPolicyState::win_stats_vs(PlayerId opponent, ArmId arm) const {
  return win_stats.at(pair_index(*this, opponent, arm));
}

const BetaWinCounts& PlayerPolicyState::win_counts_vs(PlayerId opponent, ArmId arm) const {
  return win_counts.at(pair_index(*this, opponent, arm));
}

ArmPolicyState ArmPolicyState::make(ArmPolicyKind kind, ArmId self, int n_players,
                                    const BeliefOptions& options) {
  ArmPolicyState s;
  s.kind = kind;
  s.self = self;
  s.n_players = n_players;
  if (kind == ArmPolicyKind::kLearningUcb) s.reward_stats.resize(n_players);
  if (kind == ArmPolicyKind::kLearningTs) {
    s.reward_posteriors.assign(n_players, GaussianPosterior{options.prior_mean, options.prior_precision, 1.0});
  }
  return s;
}

std::size_t argmax_random_tie(std::span<const double> values, Rng& rng) {
  if (values.empty()) throw InputError("argmax over an empty set");
  double best = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> ties;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] > best || ties.empty()) {
      best = values[i];
      ties.assign(1, i);
    } else if (values[i] == best) {
      ties.push_back(i);
    }
  }
  if (ties.size() == 1) return ties.front();
  std::uniform_int_distribution<std::size_t> pick(0, ties.size() - 1);
  return ties[pick(rng)];
}

std::vector<ArmId> plausible_set(PlayerId player, const RoundOutcome* last,
                                 const PreferenceProfile& profile) {
  return plausible_from(player, last, profile.n_arms, [&](ArmId a, PlayerId holder) {
    return profile.arm_mean(a, player) > profile.arm_mean(a, holder);
  });
}

std::vector<ArmId> plausible_set(PlayerId player, const RoundOutcome* last,
                                 std::span<const PositionBelief> beliefs) {
  return plausible_from(player, last, static_cast<int>(beliefs.size()),
                        [&](ArmId a, PlayerId holder) { return beliefs[a].is_lower(holder); });
}

ArmId choose_arm_ca(const PlayerPolicyState& state, std::int64_t t,
                    std::span<const ArmId> plausible, Rng& rng) {
  if (t <= 1) return uniform_arm(state.n_arms, rng);
  if (repeat_last(state, rng)) return *state.last_attempt;

  std::vector<ArmId> candidates(plausible.begin(), plausible.end());
  if (candidates.empty()) {
    candidates.resize(state.n_arms);
    for (ArmId a = 0; a < state.n_arms; ++a) candidates[a] = a;
  }
  std::vector<double> index(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    index[i] = ucb_index(state.reward_stats[candidates[i]], t);
  }
  return candidates[argmax_random_tie(index, rng)];
}

std::vector<double> pca_scores(std::span<const double> rewards, std::span<const double> win_probs) {
  if (rewards.size() != win_probs.size()) throw InputError("reward and win-probability sizes differ");
  std::vector<double> out(rewards.size());
  for (std::size_t j = 0; j < rewards.size(); ++j) {
    out[j] = win_probs[j] == 0.0 ? 0.0 : rewards[j] * win_probs[j];
  }
  return out;
}

ArmId choose_arm_pca(const PlayerPolicyState& state, std::int64_t t, const RoundOutcome* last,
                     Rng& rng) {
  if (!is_pca(state.kind)) throw InputError("choose_arm_pca needs a pca_ucb or pca_ts player");
  if (t <= 1 || last == nullptr) return uniform_arm(state.n_arms, rng);
  if (repeat_last(state, rng)) return *state.last_attempt;

  const bool ts = state.kind == PlayerPolicyKind::kPcaTs;
  std::vector<double> rewards(state.n_arms);
  std::vector<double> win(state.n_arms, 1.0);
  for (ArmId a = 0; a < state.n_arms; ++a) {
    rewards[a] = ts ? gaussian_sample(state.reward_posteriors[a], rng)
                    : ucb_index(state.reward_stats[a], t);
    const auto holder = last->matching.player_of(a);
    if (!holder || *holder == state.self) continue;
    if (ts) {
      const auto& counts = state.win_counts_vs(*holder, a);
      win[a] = state.options.sample_win_prob ? bernoulli_sample(counts, rng) : bernoulli_point(counts);
    } else {
      win[a] = ucb_win_prob(state.win_stats_vs(*holder, a), t);
    }
  }
  return static_cast<ArmId>(argmax_random_tie(pca_scores(rewards, win), rng));
}

ArmId choose_arm(const PlayerPolicyState& state, std::int64_t t, const RoundOutcome* last,
                 const PreferenceProfile& profile, Rng& rng) {
  switch (state.kind) {
    case PlayerPolicyKind::kCaUcb: {
      if (t <= 1) return choose_arm_ca(state, t, {}, rng);
      const auto plausible = plausible_set(state.self, last, profile);
      return choose_arm_ca(state, t, plausible, rng);
    }
    case PlayerPolicyKind::kOcaUcb: {
      if (t <= 1) return choose_arm_ca(state, t, {}, rng);
      const auto plausible = plausible_set(state.self, last, state.position_beliefs);
      return choose_arm_ca(state, t, plausible, rng);
    }
    case PlayerPolicyKind::kPcaUcb:
    case PlayerPolicyKind::kPcaTs:
      return choose_arm_pca(state, t, last, rng);
  }
  throw InputError("unhandled player policy kind");
}

std::optional<PlayerId> resolve_conflict(ArmId arm, std::span<const PlayerId> requesters,
                                         const ArmPolicyState& arm_state,
                                         const PreferenceProfile& profile, std::int64_t t,
                                         Rng& rng) {
  if (requesters.empty()) return std::nullopt;
  if (requesters.size() == 1) return requesters.front();
  std::vector<double> value(requesters.size());
  for (std::size_t i = 0; i < requesters.size(); ++i) {
    const PlayerId p = requesters[i];
    switch (arm_state.kind) {
      case ArmPolicyKind::kKnownPrefs:
        value[i] = profile.arm_mean(arm, p);
        break;
      case ArmPolicyKind::kLearningUcb:
        value[i] = ucb_index(arm_state.reward_stats.at(p), t);
        break;
      case ArmPolicyKind::kLearningTs:
        value[i] = gaussian_sample(arm_state.reward_posteriors.at(p), rng);
        break;
    }
  }
  return requesters[argmax_random_tie(value, rng)];
}

void update_player_after_round(PlayerPolicyState& state, const RoundOutcome& outcome) {
  const PlayerId self = state.self;
  const ArmId attempted = outcome.attempts.at(self);
  state.last_attempt = attempted == kUnmatched ? std::nullopt : std::optional<ArmId>(attempted);

  if (const auto arm = outcome.matching.arm_of(self)) {
    const double reward = outcome.player_rewards.at(self);
    if (state.kind == PlayerPolicyKind::kPcaTs) {
      state.reward_posteriors[*arm] = gaussian_update(state.reward_posteriors[*arm], std::span(&reward, 1));
    } else {
      state.reward_stats[*arm].record(reward);
    }
  }

  for (const Conflict& c : outcome.conflicts) {
    if (!std::binary_search(c.requesters.begin(), c.requesters.end(), self)) continue;
    if (state.kind == PlayerPolicyKind::kOcaUcb) {
      if (c.winner != self) {
        state.position_beliefs[c.arm] = position_update_on_loss(state.position_beliefs[c.arm], c.winner);
      }
      continue;
    }
    if (!is_pca(state.kind)) continue;
    auto record = [&](PlayerId opponent, bool won) {
      const auto idx = pair_index(state, opponent, c.arm);
      if (state.kind == PlayerPolicyKind::kPcaUcb) {
        state.win_stats[idx].wins += won ? 1 : 0;
        state.win_stats[idx].total += 1;
      } else {
        (won ? state.win_counts[idx].alpha : state.win_counts[idx].beta) += 1;
      }
    };
    if (c.winner == self) {
      for (PlayerId q : c.requesters) {
        if (q != self) record(q, true);
      }
    } else {
      record(c.winner, false);
    }
  }
}

void update_arm_after_round(ArmPolicyState& state, const RoundOutcome& outcome) {
  if (state.kind == ArmPolicyKind::kKnownPrefs) return;
  const auto player = outcome.matching.player_of(state.self);
  if (!player) return;
  const double reward = outcome.arm_rewards.at(state.self);
  if (state.kind == ArmPolicyKind::kLearningUcb) {
    state.reward_stats.at(*player).record(reward);
  } else {
    auto& post = state.reward_posteriors.at(*player);
    post = gaussian_update(post, std::span(&reward, 1));
  }
}

}  // namespace twosided
