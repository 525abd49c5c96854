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

#include "twosided/market.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace twosided {

const char* library_version() noexcept { return TWOSIDED_VERSION; }

namespace {

void check_id(int id, int bound, const char* what) {
  if (id < 0 || id >= bound) {
    throw InputError(std::string(what) + " id " + std::to_string(id) +
                     " out of range [0, " + std::to_string(bound) + ")");
  }
}

void check_row_distinct(std::span<const double> row, const char* what, int index) {
  std::vector<double> sorted(row.begin(), row.end());
  std::sort(sorted.begin(), sorted.end());
  for (double v : sorted) {
    if (!std::isfinite(v)) {
      throw InputError(std::string(what) + " row " + std::to_string(index) +
                       " has a non-finite mean");
    }
  }
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InputError(std::string(what) + " row " + std::to_string(index) +
                     " has tied means; preferences must be strict");
  }
}

// Proposer side `P` has n_prop agents, receiver side has n_recv. The accessors
// return the mean reward an agent on each side assigns to a partner.
template <class ProposerMean, class ReceiverMean>
std::vector<int> deferred_acceptance(int n_prop, int n_recv, ProposerMean prop_mean,
                                     ReceiverMean recv_mean) {
  std::vector<std::vector<int>> lists(n_prop);
  for (int p = 0; p < n_prop; ++p) {
    lists[p].resize(n_recv);
    std::iota(lists[p].begin(), lists[p].end(), 0);
    std::sort(lists[p].begin(), lists[p].end(),
              [&](int a, int b) { return prop_mean(p, a) > prop_mean(p, b); });
  }
  std::vector<int> next(n_prop, 0);
  std::vector<int> partner_of_prop(n_prop, kUnmatched);
  std::vector<int> held_by_recv(n_recv, kUnmatched);

  bool progress = true;
  while (progress) {
    progress = false;
    // One round: every free proposer with a nonempty list proposes at once.
    std::vector<std::vector<int>> offers(n_recv);
    for (int p = 0; p < n_prop; ++p) {
      if (partner_of_prop[p] == kUnmatched && next[p] < n_recv) {
        offers[lists[p][next[p]++]].push_back(p);
        progress = true;
      }
    }
    for (int r = 0; r < n_recv; ++r) {
      if (offers[r].empty()) continue;
      int best = held_by_recv[r];
      for (int p : offers[r]) {
        if (best == kUnmatched || recv_mean(r, p) > recv_mean(r, best)) best = p;
      }
      if (held_by_recv[r] != kUnmatched && held_by_recv[r] != best) {
        partner_of_prop[held_by_recv[r]] = kUnmatched;
      }
      held_by_recv[r] = best;
      partner_of_prop[best] = r;
    }
  }
  return partner_of_prop;
}

void enumerate_rec(const PreferenceProfile& profile, int player, std::vector<ArmId>& assign,
                   std::vector<bool>& used, std::vector<Matching>& out) {
  if (player == profile.n_players) {
    Matching m = Matching::from_assignment(assign, profile.n_arms);
    if (blocking_pairs(profile, m).empty()) out.push_back(std::move(m));
    return;
  }
  for (ArmId a = 0; a < profile.n_arms; ++a) {
    if (used[a]) continue;
    used[a] = true;
    assign[player] = a;
    enumerate_rec(profile, player + 1, assign, used, out);
    used[a] = false;
  }
  assign[player] = kUnmatched;
}

}  // namespace

double PreferenceProfile::player_mean(PlayerId p, ArmId a) const {
  return player_means[static_cast<std::size_t>(p) * n_arms + a];
}

double PreferenceProfile::arm_mean(ArmId a, PlayerId p) const {
  return arm_means[static_cast<std::size_t>(a) * n_players + p];
}

void PreferenceProfile::validate() const {
  if (n_players < 1 || n_arms < 1) throw InputError("profile needs at least one player and one arm");
  if (n_players > n_arms) {
    throw InputError("profile has more players (" + std::to_string(n_players) +
                     ") than arms (" + std::to_string(n_arms) + ")");
  }
  const auto cells = static_cast<std::size_t>(n_players) * n_arms;
  if (player_means.size() != cells || arm_means.size() != cells) {
    throw InputError("profile mean matrices do not match n_players x n_arms");
  }
  for (int p = 0; p < n_players; ++p) {
    check_row_distinct(std::span(player_means).subspan(static_cast<std::size_t>(p) * n_arms, n_arms),
                       "player", p);
  }
  for (int a = 0; a < n_arms; ++a) {
    check_row_distinct(std::span(arm_means).subspan(static_cast<std::size_t>(a) * n_players, n_players),
                       "arm", a);
  }
}

PreferenceProfile PreferenceProfile::from_rows(const std::vector<std::vector<double>>& player_rows,
                                               const std::vector<std::vector<double>>& arm_rows) {
  PreferenceProfile profile;
  profile.n_players = static_cast<int>(player_rows.size());
  profile.n_arms = static_cast<int>(arm_rows.size());
  for (const auto& row : player_rows) {
    if (static_cast<int>(row.size()) != profile.n_arms) {
      throw InputError("player row length must equal the number of arm rows");
    }
    profile.player_means.insert(profile.player_means.end(), row.begin(), row.end());
  }
  for (const auto& row : arm_rows) {
    if (static_cast<int>(row.size()) != profile.n_players) {
      throw InputError("arm row length must equal the number of player rows");
    }
    profile.arm_means.insert(profile.arm_means.end(), row.begin(), row.end());
  }
  profile.validate();
  return profile;
}

Matching::Matching(int n_players, int n_arms)
    : arm_of_(n_players, kUnmatched), player_of_(n_arms, kUnmatched) {}

Matching Matching::from_assignment(std::span<const ArmId> assignment, int n_arms) {
  Matching m(static_cast<int>(assignment.size()), n_arms);
  for (PlayerId p = 0; p < static_cast<int>(assignment.size()); ++p) {
    if (assignment[p] != kUnmatched) m.assign(p, assignment[p]);
  }
  return m;
}

void Matching::assign(PlayerId p, ArmId a) {
  check_id(p, n_players(), "player");
  check_id(a, n_arms(), "arm");
  if (player_of_[a] != kUnmatched && player_of_[a] != p) {
    throw InputError("arm " + std::to_string(a) + " already matched to player " +
                     std::to_string(player_of_[a]));
  }
  if (arm_of_[p] != kUnmatched) player_of_[arm_of_[p]] = kUnmatched;
  arm_of_[p] = a;
  player_of_[a] = p;
}

std::optional<ArmId> Matching::arm_of(PlayerId p) const {
  check_id(p, n_players(), "player");
  if (arm_of_[p] == kUnmatched) return std::nullopt;
  return arm_of_[p];
}

std::optional<PlayerId> Matching::player_of(ArmId a) const {
  check_id(a, n_arms(), "arm");
  if (player_of_[a] == kUnmatched) return std::nullopt;
  return player_of_[a];
}

int Matching::matched_count() const {
  return static_cast<int>(std::count_if(arm_of_.begin(), arm_of_.end(),
                                        [](ArmId a) { return a != kUnmatched; }));
}

bool prefers(const PreferenceProfile& profile, Side side, int self, int a, std::optional<int> b) {
  if (side == Side::kPlayer) {
    check_id(self, profile.n_players, "player");
    check_id(a, profile.n_arms, "arm");
    if (!b) return true;
    check_id(*b, profile.n_arms, "arm");
    return profile.player_mean(self, a) > profile.player_mean(self, *b);
  }
  check_id(self, profile.n_arms, "arm");
  check_id(a, profile.n_players, "player");
  if (!b) return true;
  check_id(*b, profile.n_players, "player");
  return profile.arm_mean(self, a) > profile.arm_mean(self, *b);
}

Matching gale_shapley(const PreferenceProfile& profile, Side proposers) {
  profile.validate();
  Matching m(profile.n_players, profile.n_arms);
  if (proposers == Side::kPlayer) {
    auto arm_of = deferred_acceptance(
        profile.n_players, profile.n_arms,
        [&](int p, int a) { return profile.player_mean(p, a); },
        [&](int a, int p) { return profile.arm_mean(a, p); });
    for (PlayerId p = 0; p < profile.n_players; ++p) {
      if (arm_of[p] != kUnmatched) m.assign(p, arm_of[p]);
    }
  } else {
    auto player_of = deferred_acceptance(
        profile.n_arms, profile.n_players,
        [&](int a, int p) { return profile.arm_mean(a, p); },
        [&](int p, int a) { return profile.player_mean(p, a); });
    for (ArmId a = 0; a < profile.n_arms; ++a) {
      if (player_of[a] != kUnmatched) m.assign(player_of[a], a);
    }
  }
  return m;
}

std::vector<BlockingPair> blocking_pairs(const PreferenceProfile& profile, const Matching& m) {
  if (m.n_players() != profile.n_players || m.n_arms() != profile.n_arms) {
    throw InputError("matching dimensions do not match the profile");
  }
  std::vector<BlockingPair> out;
  for (PlayerId p = 0; p < profile.n_players; ++p) {
    const auto current_arm = m.arm_of(p);
    for (ArmId a = 0; a < profile.n_arms; ++a) {
      if (current_arm && *current_arm == a) continue;
      if (!prefers(profile, Side::kPlayer, p, a, current_arm)) continue;
      if (prefers(profile, Side::kArm, a, p, m.player_of(a))) out.push_back({p, a});
    }
  }
  return out;
}

double max_player_regret(const PreferenceProfile& profile, const Matching& m) {
  return max_player_regret(profile, m, player_pessimal_matching(profile));
}

double max_player_regret(const PreferenceProfile& profile, const Matching& m,
                         const Matching& pessimal) {
  double worst = -std::numeric_limits<double>::infinity();
  for (PlayerId p = 0; p < profile.n_players; ++p) {
    const auto base_arm = pessimal.arm_of(p);
    const double baseline = base_arm ? profile.player_mean(p, *base_arm) : 0.0;
    const auto arm = m.arm_of(p);
    const double current = arm ? profile.player_mean(p, *arm) : 0.0;
    worst = std::max(worst, baseline - current);
  }
  return worst;
}

std::vector<Matching> enumerate_stable_matchings(const PreferenceProfile& profile) {
  profile.validate();
  if (profile.n_players > kMaxEnumeratePlayers || profile.n_arms > kMaxEnumerateArms) {
    throw InputError("enumerate_stable_matchings supports at most " +
                     std::to_string(kMaxEnumeratePlayers) + " players and " +
                     std::to_string(kMaxEnumerateArms) + " arms");
  }
  std::vector<Matching> out;
  std::vector<ArmId> assign(profile.n_players, kUnmatched);
  std::vector<bool> used(profile.n_arms, false);
  enumerate_rec(profile, 0, assign, used, out);
  return out;
}

}  // namespace twosided
