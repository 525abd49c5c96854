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

// Player and arm decision rules.
//
//  * ca_ucb  - conflict-avoiding UCB over the plausible set built from the
//              true arm preferences (arm preferences are common knowledge);
//  * oca_ucb - same, but the plausible set is built from per-arm position
//              beliefs that start optimistic and are corrected on every lost
//              conflict (arm preferences known only to the arms);
//  * pca_ucb / pca_ts - probabilistic conflict avoidance: attempt the arm
//              maximising reward estimate x believed win probability against
//              the arm's previous holder (nobody knows preferences).
//
// Arms either know their preferences or learn them from accepted pulls.

#ifndef TWOSIDED_POLICIES_HPP_
#define TWOSIDED_POLICIES_HPP_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "twosided/belief.hpp"
#include "twosided/market.hpp"

namespace twosided {

enum class PlayerPolicyKind { kCaUcb, kOcaUcb, kPcaUcb, kPcaTs };
enum class ArmPolicyKind { kKnownPrefs, kLearningUcb, kLearningTs };

std::string_view to_string(PlayerPolicyKind kind);
std::string_view to_string(ArmPolicyKind kind);
PlayerPolicyKind parse_player_policy(std::string_view name);
ArmPolicyKind parse_arm_policy(std::string_view name);

// Prior for Thompson-sampling reward beliefs and the sampled-Beta switch for
// the win estimate.
struct BeliefOptions {
  double prior_mean = 0.0;
  double prior_precision = 1e-6;
  bool sample_win_prob = false;

  bool operator==(const BeliefOptions&) const = default;
};

struct PlayerPolicyState {
  PlayerPolicyKind kind = PlayerPolicyKind::kCaUcb;
  PlayerId self = kUnmatched;
  int n_players = 0;
  int n_arms = 0;
  double lambda = 0.0;
  BeliefOptions options;

  // Exactly one of these two is populated: UCB kinds use stats, pca_ts uses
  // posteriors. Indexed by arm.
  std::vector<RewardStats> reward_stats;
  std::vector<GaussianPosterior> reward_posteriors;

  // PCA kinds only, indexed [opponent * n_arms + arm].
  std::vector<WinStats> win_stats;          // pca_ucb
  std::vector<BetaWinCounts> win_counts;    // pca_ts

  // oca_ucb only, indexed by arm.
  std::vector<PositionBelief> position_beliefs;

  std::optional<ArmId> last_attempt;

  static PlayerPolicyState make(PlayerPolicyKind kind, PlayerId self, int n_players, int n_arms,
                                double lambda, const BeliefOptions& options = {});

  // Throws InputError when the populated structures do not match `kind` or
  // lambda is outside [0, 1).
  void check_invariants() const;

  const WinStats& win_stats_vs(PlayerId opponent, ArmId arm) const;
  const BetaWinCounts& win_counts_vs(PlayerId opponent, ArmId arm) const;
};

struct ArmPolicyState {
  ArmPolicyKind kind = ArmPolicyKind::kKnownPrefs;
  ArmId self = kUnmatched;
  int n_players = 0;
  // learning_ucb: stats; learning_ts: posteriors. Indexed by player.
  std::vector<RewardStats> reward_stats;
  std::vector<GaussianPosterior> reward_posteriors;

  static ArmPolicyState make(ArmPolicyKind kind, ArmId self, int n_players,
                             const BeliefOptions& options = {});
};

// Index of a maximal entry; ties (including several +inf) are broken
// uniformly with one draw from `rng`. No draw is made without a tie.
std::size_t argmax_random_tie(std::span<const double> values, Rng& rng);

// Plausible set from the true arm preferences. `last` is the outcome of the
// previous round, nullptr in round 1 (every arm is plausible).
std::vector<ArmId> plausible_set(PlayerId player, const RoundOutcome* last,
                                 const PreferenceProfile& profile);

// Plausible set from position beliefs (one per arm). A held arm is plausible
// when its holder is believed to rank below `player`.
std::vector<ArmId> plausible_set(PlayerId player, const RoundOutcome* last,
                                 std::span<const PositionBelief> beliefs);

// CA-UCB / OCA-UCB choice. t = 1 picks uniformly over all arms. Otherwise,
// with probability lambda repeats last_attempt, else takes the UCB argmax over
// `plausible` (all arms when empty).
ArmId choose_arm_ca(const PlayerPolicyState& state, std::int64_t t,
                    std::span<const ArmId> plausible, Rng& rng);

// Reward estimate x win probability scores; exposed for testing. A zero win
// probability scores 0 even against an infinite reward estimate.
std::vector<double> pca_scores(std::span<const double> rewards, std::span<const double> win_probs);

// PCA-DAA choice. t = 1 picks uniformly over all arms.
ArmId choose_arm_pca(const PlayerPolicyState& state, std::int64_t t, const RoundOutcome* last,
                     Rng& rng);

// Dispatches on state.kind; `profile` is consulted only for the true arm
// preferences of ca_ucb.
ArmId choose_arm(const PlayerPolicyState& state, std::int64_t t, const RoundOutcome* last,
                 const PreferenceProfile& profile, Rng& rng);

// Winner among the requesters of `arm`, or nullopt when nobody requested it.
// A single requester is accepted without consuming randomness.
std::optional<PlayerId> resolve_conflict(ArmId arm, std::span<const PlayerId> requesters,
                                         const ArmPolicyState& arm_state,
                                         const PreferenceProfile& profile, std::int64_t t,
                                         Rng& rng);

// Folds a published round outcome into a player's beliefs.
void update_player_after_round(PlayerPolicyState& state, const RoundOutcome& outcome);

// Learning arms fold the reward of an accepted pull.
void update_arm_after_round(ArmPolicyState& state, const RoundOutcome& outcome);

}  // namespace twosided

#endif  // TWOSIDED_POLICIES_HPP_
