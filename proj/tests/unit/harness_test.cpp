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
#include <set>
#include <sstream>
#include <vector>

#include "twosided/harness.hpp"
#include "twosided/io.hpp"

using namespace twosided;

namespace {

EpisodeConfig small_apu(int horizon = 200) {
  EpisodeConfig c;
  c.scenario = Scenario::kApu;
  c.player_policy = PlayerPolicyKind::kPcaTs;
  c.arm_policy = ArmPolicyKind::kLearningTs;
  c.generator = GeneratorSpec{GeneratorKind::kUniform, 3, 4, 0.0, 0};
  c.horizon = horizon;
  return c;
}

AggregateSeries series(const std::vector<double>& rates) {
  AggregateSeries out;
  for (std::size_t i = 0; i < rates.size(); ++i) out.push_back({static_cast<int>(10 * (i + 1)), rates[i], 0.0, 0.0});
  return out;
}

}  // namespace

TEST_CASE("mix_seed is SplitMix64 over the golden-ratio stream") {
  // First SplitMix64 output from state 0.
  CHECK(mix_seed(0, 0) == 0xE220A8397B1DCDAFULL);
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(mix_seed(42, i));
  CHECK(seen.size() == 1000);
  CHECK(mix_seed(1, 0) != mix_seed(0, 0));
}

TEST_CASE("run_config derives distinct episode and generator seeds") {
  const auto c0 = run_config(small_apu(), 9, 0);
  const auto c1 = run_config(small_apu(), 9, 1);
  CHECK(c0.seed == mix_seed(9, 0));
  CHECK(c0.generator.seed == mix_seed(9, 1));
  CHECK(c1.seed == mix_seed(9, 2));
  CHECK(c0.horizon == small_apu().horizon);
}

TEST_CASE("a single-run batch equals the single episode") {
  const auto batch = run_batch(small_apu(), 1, 5, 1);
  const auto log = run_episode(run_config(small_apu(), 5, 0));
  REQUIRE(batch.runs.size() == 1);
  REQUIRE(batch.aggregate.size() == log.snapshots.size());
  for (std::size_t i = 0; i < log.snapshots.size(); ++i) {
    CHECK(batch.aggregate[i].t == log.snapshots[i].t);
    CHECK(batch.aggregate[i].stability_rate == (log.snapshots[i].stable ? 1.0 : 0.0));
    CHECK(batch.aggregate[i].mean_max_regret == log.snapshots[i].max_regret);
    CHECK(batch.aggregate[i].mean_conflicts == log.snapshots[i].conflicts);
  }
}

TEST_CASE("batches do not depend on worker count") {
  const auto one = run_batch(small_apu(), 12, 77, 1);
  const auto many = run_batch(small_apu(), 12, 77, 5);
  CHECK(runs_csv_text(to_rows(one.runs)) == runs_csv_text(to_rows(many.runs)));
  CHECK(one.aggregate == many.aggregate);
}

TEST_CASE("aggregate_rows averages per snapshot round") {
  const std::vector<RunRow> rows = {{0, 10, true, 0.0, 2}, {1, 10, false, 2.0, 1},
                                    {0, 20, true, 1.0, 0}, {1, 20, true, 0.0, 0}};
  const auto agg = aggregate_rows(rows);
  REQUIRE(agg.size() == 2);
  CHECK(agg[0] == AggregatePoint{10, 0.5, 1.0, 1.5});
  CHECK(agg[1] == AggregatePoint{20, 1.0, 0.5, 0.0});

  const std::vector<RunRow> shuffled = {rows[3], rows[0], rows[2], rows[1]};
  CHECK(aggregate_rows(shuffled) == agg);

  const std::vector<RunRow> duplicate = {rows[0], rows[0]};
  CHECK_THROWS_AS(aggregate_rows(duplicate), InputError);
  const std::vector<RunRow> ragged = {rows[0], rows[1], rows[2]};
  CHECK_THROWS_AS(aggregate_rows(ragged), InputError);
}

TEST_CASE("convergence proxy examples") {
  const auto proxy = convergence_proxy(series({1, 1, 0, 1}), 4, 0.9);
  CHECK(proxy.back().value == 0.75);
  CHECK(proxy.front().value == 1.0);
  for (const auto& p : convergence_proxy(series({1, 1, 1, 1, 1}), 2, 0.9)) CHECK(p.value == 1.0);
  for (const auto& p : convergence_proxy(series({0, 0, 0}), 2, 0.9)) CHECK(p.value == 0.0);
  // Strictly above the threshold.
  CHECK(convergence_proxy(series({0.9}), 1, 0.9).front().value == 0.0);
  CHECK_THROWS_AS(convergence_proxy(series({1}), 0, 0.9), InputError);
  CHECK_THROWS_AS(convergence_proxy(series({1}), 1, 1.5), InputError);
}

TEST_CASE("convergence proxy ignores storage order") {
  auto s = series({0.2, 0.95, 0.99, 0.5, 1.0, 0.97, 0.93});
  const auto expected = convergence_proxy(s, 3, 0.9);
  std::reverse(s.begin(), s.end());
  CHECK(convergence_proxy(s, 3, 0.9) == expected);
  std::swap(s[1], s[4]);
  CHECK(convergence_proxy(s, 3, 0.9) == expected);
}

TEST_CASE("window conversion and first_reaching") {
  CHECK(window_rounds_to_snapshots(1000, 10) == 100);
  CHECK(window_rounds_to_snapshots(5, 10) == 1);
  CHECK_THROWS_AS(window_rounds_to_snapshots(0, 10), InputError);
  const std::vector<ProxyPoint> proxy = {{10, 0.5}, {20, 1.0}, {30, 1.0}};
  CHECK(first_reaching(proxy) == 20);
  CHECK(first_reaching(proxy, 0.4) == 10);
  CHECK_FALSE(first_reaching(std::vector<ProxyPoint>{{10, 0.99}}).has_value());
}

TEST_CASE("persisted runs reproduce the aggregate exactly") {
  const auto batch = run_batch(small_apu(300), 7, 3, 2);
  std::istringstream in(runs_csv_text(to_rows(batch.runs)));
  CHECK(aggregate_rows(read_runs_csv(in)) == batch.aggregate);
}

TEST_CASE("experiments run the template or each sweep entry") {
  ExperimentSpec spec;
  spec.episode = small_apu(100);
  spec.n_runs = 3;
  spec.master_seed = 11;
  spec.workers = 1;
  auto plain = run_experiment(spec);
  REQUIRE(plain.size() == 1);
  CHECK(plain[0].aggregate == run_batch(spec.episode, 3, 11, 1).aggregate);

  spec.sweep = {{"n2", {{"generator", {{"n_players", 2}}}}}, {"ucb", {{"player_policy", "pca_ucb"}, {"arm_policy", "learning_ucb"}}}};
  const auto swept = run_experiment(spec);
  REQUIRE(swept.size() == 2);
  CHECK(swept[0].label == "n2");
  CHECK(swept[0].runs[0].profile.n_players == 2);
  CHECK(swept[1].config.player_policy == PlayerPolicyKind::kPcaUcb);

  spec.sweep = {{"bad", {{"player_policy", "ca_ucb"}}}};
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec.sweep.clear();
  spec.n_runs = 0;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
}
