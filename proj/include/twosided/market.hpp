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

// Ground-truth market model: preference profiles, one-to-one matchings,
// deferred acceptance, stability and the player-pessimal regret metric.
//
// Conventions shared by the whole library:
//  * preferences are strict and expressed as mean rewards; a higher mean is
//    preferred;
//  * being unmatched yields reward 0 and is strictly worse than any partner,
//    so an unmatched player and an unmatched arm always block;
//  * N <= K, hence every stable matching matches all players.

#ifndef TWOSIDED_MARKET_HPP_
#define TWOSIDED_MARKET_HPP_

#include <compare>
#include <optional>
#include <span>
#include <vector>

#include "twosided/common.hpp"

namespace twosided {

enum class Side { kPlayer, kArm };

struct PreferenceProfile {
  int n_players = 0;
  int n_arms = 0;
  // n_players x n_arms, row-major: player_means[p * n_arms + a].
  std::vector<double> player_means;
  // n_arms x n_players, row-major: arm_means[a * n_players + p].
  std::vector<double> arm_means;

  double player_mean(PlayerId p, ArmId a) const;
  double arm_mean(ArmId a, PlayerId p) const;

  // Throws InputError on shape mismatch, N > K, non-finite or tied entries.
  void validate() const;

  static PreferenceProfile from_rows(
      const std::vector<std::vector<double>>& player_rows,
      const std::vector<std::vector<double>>& arm_rows);

  bool operator==(const PreferenceProfile&) const = default;
};

class Matching {
 public:
  Matching() = default;
  // The empty matching.
  Matching(int n_players, int n_arms);

  // Builds from a player -> arm vector (kUnmatched for none). Throws
  // InputError when an arm is used twice or an id is out of range.
  static Matching from_assignment(std::span<const ArmId> assignment, int n_arms);

  void assign(PlayerId p, ArmId a);

  std::optional<ArmId> arm_of(PlayerId p) const;
  std::optional<PlayerId> player_of(ArmId a) const;

  int n_players() const { return static_cast<int>(arm_of_.size()); }
  int n_arms() const { return static_cast<int>(player_of_.size()); }
  int matched_count() const;

  const std::vector<ArmId>& assignment() const { return arm_of_; }

  auto operator<=>(const Matching& other) const { return arm_of_ <=> other.arm_of_; }
  bool operator==(const Matching& other) const { return arm_of_ == other.arm_of_; }

 private:
  std::vector<ArmId> arm_of_;
  std::vector<PlayerId> player_of_;
};

struct Conflict {
  ArmId arm = kUnmatched;
  std::vector<PlayerId> requesters;  // ascending, size >= 2
  PlayerId winner = kUnmatched;

  bool operator==(const Conflict&) const = default;
};

// Everything published at the end of round t.
struct RoundOutcome {
  int round = 0;
  std::vector<ArmId> attempts;  // per player; kUnmatched if no attempt
  Matching matching;
  std::vector<Conflict> conflicts;
  std::vector<double> player_rewards;  // 0 for unmatched players
  std::vector<double> arm_rewards;     // 0 for arms that accepted nobody
};

struct BlockingPair {
  PlayerId player = kUnmatched;
  ArmId arm = kUnmatched;

  bool operator==(const BlockingPair&) const = default;
};

// True iff `self` (a player when side == kPlayer, otherwise an arm) strictly
// prefers partner `a` over partner `b`; nullopt for `b` means unmatched.
bool prefers(const PreferenceProfile& profile, Side side, int self, int a,
             std::optional<int> b);

// Round-based deferred acceptance with the given side proposing. Returns the
// proposer-optimal stable matching.
Matching gale_shapley(const PreferenceProfile& profile, Side proposers);

inline Matching player_pessimal_matching(const PreferenceProfile& profile) {
  return gale_shapley(profile, Side::kArm);
}

std::vector<BlockingPair> blocking_pairs(const PreferenceProfile& profile,
                                         const Matching& m);

inline bool is_stable(const PreferenceProfile& profile, const Matching& m) {
  return blocking_pairs(profile, m).empty();
}

// max over players of (mean under the player-pessimal stable matching) minus
// (mean under m, 0 if unmatched). Can be negative.
double max_player_regret(const PreferenceProfile& profile, const Matching& m);

// Same metric against a precomputed pessimal matching.
double max_player_regret(const PreferenceProfile& profile, const Matching& m,
                         const Matching& pessimal);

inline constexpr int kMaxEnumeratePlayers = 6;
inline constexpr int kMaxEnumerateArms = 9;

// Brute force: every matching that is perfect on players and has no blocking
// pair, in lexicographic order of the assignment vector.
std::vector<Matching> enumerate_stable_matchings(const PreferenceProfile& profile);

}  // namespace twosided

#endif  // TWOSIDED_MARKET_HPP_
