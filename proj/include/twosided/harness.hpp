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

// Batch experiments: seeded parallel episodes, cross-run aggregation and the
// sliding-window convergence proxy.
//
// Seeding: run i of a batch with master seed S uses
//   episode seed   = mix_seed(S, 2 i)
//   generator seed = mix_seed(S, 2 i + 1)
// where mix_seed is SplitMix64 applied to S + (index + 1) * 0x9E3779B97F4A7C15.
// Every run therefore draws a fresh preference profile, and results do not
// depend on how runs are scheduled across workers.

#ifndef TWOSIDED_HARNESS_HPP_
#define TWOSIDED_HARNESS_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "twosided/simulator.hpp"

namespace twosided {

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index);

struct SweepEntry {
  std::string label;
  nlohmann::json overrides;  // JSON merge patch applied to the episode template
};

struct ExperimentSpec {
  std::string name = "experiment";
  EpisodeConfig episode;
  int n_runs = 1000;
  std::uint64_t master_seed = 0;
  int workers = 0;  // 0 = hardware concurrency
  std::vector<SweepEntry> sweep;

  void validate() const;
};

// One persisted row of runs.csv.
struct RunRow {
  int run_id = 0;
  int t = 0;
  bool stable = false;
  double max_regret = 0.0;
  int conflicts = 0;

  bool operator==(const RunRow&) const = default;
};

struct AggregatePoint {
  int t = 0;
  double stability_rate = 0.0;
  double mean_max_regret = 0.0;
  double mean_conflicts = 0.0;

  bool operator==(const AggregatePoint&) const = default;
};
using AggregateSeries = std::vector<AggregatePoint>;

struct ProxyPoint {
  int t = 0;
  double value = 0.0;

  bool operator==(const ProxyPoint&) const = default;
};

struct BatchResult {
  std::string label;
  EpisodeConfig config;  // template; per-run seeds are derived
  std::uint64_t master_seed = 0;
  std::vector<RunLog> runs;
  AggregateSeries aggregate;
};

EpisodeConfig run_config(const EpisodeConfig& base, std::uint64_t master_seed, int run_index);

// n_runs independent episodes, executed on up to `workers` threads.
BatchResult run_batch(const EpisodeConfig& base, int n_runs, std::uint64_t master_seed,
                      int workers = 0);

// One batch per sweep entry (or a single unlabeled batch without a sweep).
std::vector<BatchResult> run_experiment(const ExperimentSpec& spec);

std::vector<RunRow> to_rows(std::span<const RunLog> runs);

// Pure fold over rows, grouped by t and summed in run_id order. All runs must
// share the same snapshot rounds.
AggregateSeries aggregate_rows(std::span<const RunRow> rows);
AggregateSeries aggregate_runs(std::span<const RunLog> runs);

// Value at each snapshot t = fraction of snapshots in the trailing window of
// `window_snapshots` snapshot rounds (ending at t) whose stability rate is
// strictly above `threshold`. Input order does not matter.
std::vector<ProxyPoint> convergence_proxy(const AggregateSeries& series, int window_snapshots,
                                          double threshold);

// Window given in rounds, converted to whole snapshots (at least one).
int window_rounds_to_snapshots(int window_rounds, int snapshot_every);

// First snapshot round whose value reaches `level`, if any.
std::optional<int> first_reaching(std::span<const ProxyPoint> proxy, double level = 1.0);

}  // namespace twosided

#endif  // TWOSIDED_HARNESS_HPP_
