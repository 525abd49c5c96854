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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "twosided/market.hpp"
#include "twosided/pref_gen.hpp"
#include "unit/oracle.hpp"

using namespace twosided;

namespace {

// Everybody ranks index 0 first: unique stable matching p0-a0, p1-a1.
PreferenceProfile aligned2() { return PreferenceProfile::from_rows({{2, 1}, {2, 1}}, {{2, 1}, {2, 1}}); }

// p0: a0 > a1, p1: a1 > a0; a0: p1 > p0, a1: p0 > p1. Two stable matchings.
PreferenceProfile cyclic2() { return PreferenceProfile::from_rows({{2, 1}, {1, 2}}, {{1, 2}, {2, 1}}); }

oracle::Rows rows(const std::vector<double>& flat, int n_rows, int n_cols) {
  oracle::Rows out(n_rows);
  for (int r = 0; r < n_rows; ++r) out[r].assign(flat.begin() + r * n_cols, flat.begin() + (r + 1) * n_cols);
  return out;
}

Matching m(std::vector<ArmId> assignment, int n_arms) { return Matching::from_assignment(assignment, n_arms); }

}  // namespace

TEST_CASE("prefers compares true means and treats unmatched as worst") {
  const auto profile = aligned2();
  CHECK(prefers(profile, Side::kPlayer, 0, 0, 1));
  CHECK_FALSE(prefers(profile, Side::kPlayer, 0, 1, 0));
  CHECK(prefers(profile, Side::kPlayer, 0, 1, std::nullopt));
  CHECK(prefers(profile, Side::kArm, 1, 0, std::nullopt));
  CHECK_FALSE(prefers(profile, Side::kPlayer, 0, 1, 1));
  CHECK_FALSE(prefers(profile, Side::kArm, 0, 0, 0));
  CHECK_THROWS_AS(prefers(profile, Side::kPlayer, 2, 0, 1), InputError);
  CHECK_THROWS_AS(prefers(profile, Side::kArm, 0, 0, 5), InputError);
}

TEST_CASE("profile validation rejects ties, shape errors and N > K") {
  CHECK_THROWS_AS(PreferenceProfile::from_rows({{1, 1}}, {{1}, {2}}), InputError);
  CHECK_THROWS_AS(PreferenceProfile::from_rows({{1}, {2}}, {{1, 2}}), InputError);
  CHECK_THROWS_AS(PreferenceProfile::from_rows({{1, 2}}, {{1}}), InputError);
  CHECK_NOTHROW(PreferenceProfile::from_rows({{1, 2}}, {{1}, {1}}));
}

TEST_CASE("matching stays injective") {
  Matching mm(2, 3);
  mm.assign(0, 1);
  CHECK_THROWS_AS(mm.assign(1, 1), InputError);
  mm.assign(0, 2);
  CHECK_FALSE(mm.player_of(1).has_value());
  CHECK(mm.player_of(2) == 0);
  CHECK_THROWS_AS(Matching::from_assignment(std::vector<ArmId>{0, 0}, 2), InputError);
}

TEST_CASE("gale_shapley on the worked examples") {
  const auto profile = aligned2();
  const auto expected = m({0, 1}, 2);
  const auto brute = oracle::stable_matchings(rows(profile.player_means, 2, 2), rows(profile.arm_means, 2, 2));
  REQUIRE(brute == std::set<std::vector<int>>{{0, 1}});
  CHECK(gale_shapley(profile, Side::kPlayer) == expected);
  CHECK(gale_shapley(profile, Side::kArm) == expected);

  const auto single = PreferenceProfile::from_rows({{1}}, {{1}});
  CHECK(gale_shapley(single, Side::kPlayer) == m({0}, 1));
  CHECK(gale_shapley(single, Side::kArm) == m({0}, 1));
}

TEST_CASE("gale_shapley proposer side matters on the cyclic instance") {
  const auto profile = cyclic2();
  CHECK(gale_shapley(profile, Side::kPlayer) == m({0, 1}, 2));
  CHECK(gale_shapley(profile, Side::kArm) == m({1, 0}, 2));
}

TEST_CASE("blocking_pairs examples") {
  const auto profile = aligned2();
  CHECK(blocking_pairs(profile, m({0, 1}, 2)).empty());
  const auto swapped = blocking_pairs(profile, m({1, 0}, 2));
  CHECK(std::find(swapped.begin(), swapped.end(), BlockingPair{0, 0}) != swapped.end());
  CHECK(oracle::has_blocking_pair({{2, 1}, {2, 1}}, {{2, 1}, {2, 1}}, {1, 0}));

  const auto single = PreferenceProfile::from_rows({{1}}, {{1}});
  CHECK(blocking_pairs(single, Matching(1, 1)) == std::vector<BlockingPair>{{0, 0}});
}

TEST_CASE("max_player_regret examples") {
  const auto profile = aligned2();
  CHECK(max_player_regret(profile, m({0, 1}, 2)) == 0.0);
  // pessimal gives p0 mean 2 (a0) and p1 mean 1 (a1); the swap gives p0 1 and p1 2.
  CHECK(max_player_regret(profile, m({1, 0}, 2)) == 1.0);

  const auto single = PreferenceProfile::from_rows({{1}}, {{1}});
  CHECK(max_player_regret(single, Matching(1, 1)) == 1.0);

  // The player-optimal matching dominates: regret is negative.
  const auto cyc = cyclic2();
  CHECK(max_player_regret(cyc, gale_shapley(cyc, Side::kPlayer)) == -1.0);
}

TEST_CASE("enumerate_stable_matchings examples and size guard") {
  CHECK(enumerate_stable_matchings(PreferenceProfile::from_rows({{1}}, {{1}})) == std::vector{m({0}, 1)});
  CHECK(enumerate_stable_matchings(aligned2()).size() == 1);
  CHECK(enumerate_stable_matchings(cyclic2()) == std::vector{m({0, 1}, 2), m({1, 0}, 2)});
  CHECK_THROWS_AS(enumerate_stable_matchings(gen_uniform(7, 7, 1)), InputError);
}

TEST_CASE("property: deferred acceptance is stable, optimal for proposers, pessimal for receivers") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const int n = 1 + static_cast<int>(seed % 4);
    const int k = n + static_cast<int>((seed / 4) % 2);
    const auto profile = gen_uniform(n, k, seed);
    const auto brute = oracle::stable_matchings(rows(profile.player_means, n, k), rows(profile.arm_means, k, n));
    const auto listed = enumerate_stable_matchings(profile);
    REQUIRE(listed.size() == brute.size());
    for (const auto& s : listed) CHECK(brute.count(s.assignment()) == 1);

    const auto by_players = gale_shapley(profile, Side::kPlayer);
    const auto by_arms = gale_shapley(profile, Side::kArm);
    CHECK(blocking_pairs(profile, by_players).empty());
    CHECK(blocking_pairs(profile, by_arms).empty());
    CHECK(by_players.matched_count() == n);
    CHECK(by_arms.matched_count() == n);
    CHECK(max_player_regret(profile, by_arms) == 0.0);
    for (const auto& s : brute) {
      for (PlayerId p = 0; p < n; ++p) {
        CHECK(profile.player_mean(p, *by_arms.arm_of(p)) <= profile.player_mean(p, s[p]));
        CHECK(profile.player_mean(p, *by_players.arm_of(p)) >= profile.player_mean(p, s[p]));
      }
    }
  }
}

TEST_CASE("property: blocking pairs depend only on ranks") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto profile = gen_uniform(3, 4, seed);
    auto warped = profile;
    for (double& v : warped.player_means) v = std::exp(v) - 7.0;
    for (double& v : warped.arm_means) v = 3.0 * v * v * v + 0.5;
    // Assignments: rotate through a few injective maps.
    std::vector<ArmId> assign = {static_cast<int>(seed % 4), static_cast<int>((seed + 1) % 4), kUnmatched};
    const auto mm = Matching::from_assignment(assign, 4);
    CHECK(blocking_pairs(profile, mm) == blocking_pairs(warped, mm));
  }
}
