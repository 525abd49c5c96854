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

#include "twosided/belief.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace twosided {

namespace {

double confidence_bonus(std::int64_t t, std::int64_t count) {
  return std::sqrt(3.0 * std::log(static_cast<double>(t)) / (2.0 * static_cast<double>(count)));
}

void check_round(std::int64_t t) {
  if (t < 1) throw InputError("round index must be >= 1, got " + std::to_string(t));
}

}  // namespace

PositionBelief::PositionBelief(PlayerId self, int n_players) : self_(self), higher_(n_players, false) {
  if (self < 0 || self >= n_players) throw InputError("position belief owner out of range");
}

bool PositionBelief::is_higher(PlayerId p) const {
  return p >= 0 && p < n_players() && higher_[p];
}

bool PositionBelief::is_lower(PlayerId p) const {
  return p >= 0 && p < n_players() && p != self_ && !higher_[p];
}

std::vector<PlayerId> PositionBelief::higher() const {
  std::vector<PlayerId> out;
  for (PlayerId p = 0; p < n_players(); ++p) {
    if (higher_[p]) out.push_back(p);
  }
  return out;
}

std::vector<PlayerId> PositionBelief::lower() const {
  std::vector<PlayerId> out;
  for (PlayerId p = 0; p < n_players(); ++p) {
    if (is_lower(p)) out.push_back(p);
  }
  return out;
}

void PositionBelief::mark_higher(PlayerId winner) {
  if (winner < 0 || winner >= n_players()) throw InputError("conflict winner out of range");
  if (winner == self_) throw InputError("a player cannot lose a conflict to itself");
  higher_[winner] = true;
}

double ucb_index(const RewardStats& stats, std::int64_t t) {
  check_round(t);
  if (stats.count == 0) return std::numeric_limits<double>::infinity();
  return stats.mean() + confidence_bonus(t, stats.count);
}

double ucb_win_prob(const WinStats& stats, std::int64_t t) {
  check_round(t);
  if (stats.total == 0) return 1.0;
  const double rate = static_cast<double>(stats.wins) / static_cast<double>(stats.total);
  return std::min(1.0, rate + confidence_bonus(t, stats.total));
}

GaussianPosterior gaussian_update(const GaussianPosterior& post, std::span<const double> rewards) {
  if (rewards.empty()) return post;
  double sum = 0.0;
  for (double x : rewards) sum += x;
  const double n = static_cast<double>(rewards.size());
  GaussianPosterior next = post;
  next.precision = post.precision + n * post.known_obs_precision;
  next.mean = (post.precision * post.mean + post.known_obs_precision * sum) / next.precision;
  return next;
}

double gaussian_sample(const GaussianPosterior& post, Rng& rng) {
  if (!(post.precision > 0.0)) throw InputError("posterior precision must be positive");
  std::normal_distribution<double> normal(post.mean, 1.0 / std::sqrt(post.precision));
  return normal(rng);
}

double bernoulli_point(const BetaWinCounts& counts) {
  const auto n = counts.alpha + counts.beta;
  if (n == 0) return 1.0;
  return static_cast<double>(counts.alpha) / static_cast<double>(n);
}

double bernoulli_sample(const BetaWinCounts& counts, Rng& rng) {
  if (counts.alpha + counts.beta == 0) return 1.0;
  std::gamma_distribution<double> win(static_cast<double>(counts.alpha) + 1.0, 1.0);
  std::gamma_distribution<double> loss(static_cast<double>(counts.beta) + 1.0, 1.0);
  const double x = win(rng);
  const double y = loss(rng);
  return x / (x + y);
}

PositionBelief position_update_on_loss(const PositionBelief& belief, PlayerId winner) {
  PositionBelief next = belief;
  next.mark_higher(winner);
  return next;
}

}  // namespace twosided
