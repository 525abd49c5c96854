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

// Belief-state value types shared by every learning policy.

#ifndef TWOSIDED_BELIEF_HPP_
#define TWOSIDED_BELIEF_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "twosided/common.hpp"

namespace twosided {

// Pull count and reward sum for one (agent, partner) pair.
struct RewardStats {
  std::int64_t count = 0;
  double sum = 0.0;

  double mean() const { return count == 0 ? 0.0 : sum / static_cast<double>(count); }
  void record(double reward) {
    ++count;
    sum += reward;
  }

  bool operator==(const RewardStats&) const = default;
};

// Conflict record against one opponent at one arm.
struct WinStats {
  std::int64_t wins = 0;
  std::int64_t total = 0;

  bool operator==(const WinStats&) const = default;
};

// Normal posterior over a mean with known observation precision.
struct GaussianPosterior {
  double mean = 0.0;
  double precision = 1e-6;
  double known_obs_precision = 1.0;

  bool operator==(const GaussianPosterior&) const = default;
};

// alpha = conflicts won, beta = conflicts lost.
struct BetaWinCounts {
  std::int64_t alpha = 0;
  std::int64_t beta = 0;

  bool operator==(const BetaWinCounts&) const = default;
};

// One player's belief about where it sits in one arm's ranking. Every other
// player is either believed ranked higher or lower than `self`; a fresh belief
// puts everybody lower.
class PositionBelief {
 public:
  PositionBelief() = default;
  PositionBelief(PlayerId self, int n_players);

  PlayerId self() const { return self_; }
  int n_players() const { return static_cast<int>(higher_.size()); }

  bool is_higher(PlayerId p) const;
  bool is_lower(PlayerId p) const;

  std::vector<PlayerId> higher() const;
  std::vector<PlayerId> lower() const;

  // Marks `winner` as ranked above self. Used by position_update_on_loss.
  void mark_higher(PlayerId winner);

  bool operator==(const PositionBelief&) const = default;

 private:
  PlayerId self_ = kUnmatched;
  std::vector<bool> higher_;
};

// sqrt(3 ln t / (2 count)) bonus on the empirical mean; +inf for count 0.
// Throws InputError for t < 1.
double ucb_index(const RewardStats& stats, std::int64_t t);

// Optimistic conflict-win probability, censored at 1; 1 when no history.
double ucb_win_prob(const WinStats& stats, std::int64_t t);

GaussianPosterior gaussian_update(const GaussianPosterior& post, std::span<const double> rewards);

// One draw from Normal(mean, 1 / precision).
double gaussian_sample(const GaussianPosterior& post, Rng& rng);

// alpha / (alpha + beta); 1 with no history.
double bernoulli_point(const BetaWinCounts& counts);

// Draw from Beta(alpha + 1, beta + 1); 1 with no history. Alternative to the
// point estimate, off by default.
double bernoulli_sample(const BetaWinCounts& counts, Rng& rng);

// Returns a copy with `winner` moved to the higher set. Throws InputError when
// winner is self or out of range.
PositionBelief position_update_on_loss(const PositionBelief& belief, PlayerId winner);

}  // namespace twosided

#endif  // TWOSIDED_BELIEF_HPP_
