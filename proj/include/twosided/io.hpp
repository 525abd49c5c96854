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

// Persistence: JSON documents (profiles, configs, belief snapshots) and the
// CSV files written by experiment runs.
//
// CSV files have a header row, UTF-8 text, LF line endings, and reals in
// shortest round-trip form so that re-reading reproduces the exact doubles:
//   runs.csv       run_id,t,stable,max_regret,conflicts
//   aggregate.csv  t,stability_rate,mean_max_regret,mean_conflicts
//   proxy.csv      t,proxy

#ifndef TWOSIDED_IO_HPP_
#define TWOSIDED_IO_HPP_

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "twosided/belief.hpp"
#include "twosided/harness.hpp"
#include "twosided/market.hpp"
#include "twosided/policies.hpp"
#include "twosided/pref_gen.hpp"
#include "twosided/simulator.hpp"

namespace twosided {

// nlohmann ADL hooks. from_json throws ConfigError/InputError on bad input.
void to_json(nlohmann::json& j, const PreferenceProfile& profile);
void from_json(const nlohmann::json& j, PreferenceProfile& profile);
void to_json(nlohmann::json& j, const Matching& m);
void to_json(nlohmann::json& j, const GeneratorSpec& spec);
void from_json(const nlohmann::json& j, GeneratorSpec& spec);
void to_json(nlohmann::json& j, const EpisodeConfig& config);
void from_json(const nlohmann::json& j, EpisodeConfig& config);
void to_json(nlohmann::json& j, const ExperimentSpec& spec);
void from_json(const nlohmann::json& j, ExperimentSpec& spec);

void to_json(nlohmann::json& j, const RewardStats& s);
void from_json(const nlohmann::json& j, RewardStats& s);
void to_json(nlohmann::json& j, const WinStats& s);
void from_json(const nlohmann::json& j, WinStats& s);
void to_json(nlohmann::json& j, const GaussianPosterior& p);
void from_json(const nlohmann::json& j, GaussianPosterior& p);
void to_json(nlohmann::json& j, const BetaWinCounts& c);
void from_json(const nlohmann::json& j, BetaWinCounts& c);
void to_json(nlohmann::json& j, const PositionBelief& b);
void to_json(nlohmann::json& j, const PlayerPolicyState& s);
void to_json(nlohmann::json& j, const ArmPolicyState& s);

nlohmann::json parse_json_text(const std::string& text);
nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

PreferenceProfile load_profile(const std::filesystem::path& path);
ExperimentSpec load_experiment_spec(const std::filesystem::path& path);

// Applies a sweep entry's overrides to a base episode config.
EpisodeConfig apply_overrides(const EpisodeConfig& base, const nlohmann::json& overrides);

// Shortest representation that parses back to the same double.
std::string format_real(double value);

void write_runs_csv(std::ostream& out, std::span<const RunRow> rows);
std::vector<RunRow> read_runs_csv(std::istream& in);
void write_aggregate_csv(std::ostream& out, std::span<const AggregatePoint> series);
AggregateSeries read_aggregate_csv(std::istream& in);
void write_proxy_csv(std::ostream& out, std::span<const ProxyPoint> proxy);
std::vector<ProxyPoint> read_proxy_csv(std::istream& in);

std::string runs_csv_text(std::span<const RunRow> rows);
std::string aggregate_csv_text(std::span<const AggregatePoint> series);
std::string proxy_csv_text(std::span<const ProxyPoint> proxy);

// Config echo written next to the CSVs: config, master seed, library version.
nlohmann::json config_echo(const ExperimentSpec& spec, const BatchResult& batch);

// Writes runs.csv, aggregate.csv and config.json into `dir` (created).
void write_batch_outputs(const std::filesystem::path& dir, const ExperimentSpec& spec,
                         const BatchResult& batch);

// A single batch goes straight into `dir`; sweeps go into dir/<label>/. An
// experiment.json echo is always written at the top level.
void write_experiment_outputs(const std::filesystem::path& dir, const ExperimentSpec& spec,
                              std::span<const BatchResult> batches);

}  // namespace twosided

#endif  // TWOSIDED_IO_HPP_
