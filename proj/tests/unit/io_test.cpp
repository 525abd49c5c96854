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

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "twosided/io.hpp"

using namespace twosided;
using nlohmann::json;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("twosided_io_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("profile JSON round trip and validation") {
  const auto profile = gen_uniform(3, 4, 9);
  const json j = profile;
  CHECK(j.at("player_means").size() == 3);
  CHECK(j.at("player_means")[0].size() == 4);
  CHECK(j.get<PreferenceProfile>() == profile);

  json bad = j;
  bad["player_means"][0][0] = bad["player_means"][0][1];
  CHECK_THROWS_AS(bad.get<PreferenceProfile>(), InputError);
  bad = j;
  bad["arm_means"].erase(0);
  CHECK_THROWS_AS(bad.get<PreferenceProfile>(), InputError);
  bad = j;
  bad.erase("n_arms");
  CHECK_THROWS_AS(bad.get<PreferenceProfile>(), ConfigError);
}

TEST_CASE("episode and experiment JSON round trip") {
  ExperimentSpec spec;
  spec.name = "round-trip";
  spec.episode.scenario = Scenario::kApu;
  spec.episode.player_policy = PlayerPolicyKind::kPcaTs;
  spec.episode.arm_policy = ArmPolicyKind::kLearningTs;
  spec.episode.generator = GeneratorSpec{GeneratorKind::kBetaHeterogeneous, 4, 6, 10.0, 3};
  spec.episode.horizon = 1234;
  spec.episode.lambda = 0.5;
  spec.episode.beliefs.sample_win_prob = true;
  spec.n_runs = 17;
  spec.master_seed = std::numeric_limits<std::uint64_t>::max();
  spec.workers = 2;
  spec.sweep = {{"small", {{"generator", {{"n_players", 2}}}}}};
  const json j = spec;
  const auto back = j.get<ExperimentSpec>();
  CHECK(back.name == spec.name);
  CHECK(back.episode == spec.episode);
  CHECK(back.n_runs == 17);
  CHECK(back.master_seed == spec.master_seed);
  REQUIRE(back.sweep.size() == 1);
  CHECK(back.sweep[0].overrides == spec.sweep[0].overrides);
  CHECK(apply_overrides(back.episode, back.sweep[0].overrides).generator.n_players == 2);
}

TEST_CASE("episode JSON defaults and errors") {
  const auto minimal = parse_json_text(R"({"scenario":"APKP","player_policy":"oca_ucb","arm_policy":"known_prefs",
                                           "generator":{"kind":"uniform","n_players":5},"horizon":100})");
  const auto c = minimal.get<EpisodeConfig>();
  CHECK(c.lambda == 0.9);
  CHECK(c.snapshot_every == 10);
  CHECK(c.generator.n_arms == 5);
  CHECK(c.beliefs.prior_precision == 1e-6);

  CHECK_THROWS_AS(parse_json_text("{\"scenario\": "), ConfigError);
  json missing = minimal;
  missing.erase("horizon");
  CHECK_THROWS_AS(missing.get<EpisodeConfig>(), ConfigError);
  json wrong_type = minimal;
  wrong_type["horizon"] = "long";
  CHECK_THROWS_AS(wrong_type.get<EpisodeConfig>(), ConfigError);
  json unknown = minimal;
  unknown["scenario"] = "XYZ";
  CHECK_THROWS_AS(unknown.get<EpisodeConfig>(), ConfigError);
  CHECK_THROWS_AS(parse_json_text(R"({"sweep": 3, "episode": {}})").get<ExperimentSpec>(), ConfigError);
}

TEST_CASE("file helpers") {
  CHECK_THROWS_AS(read_json_file("/nonexistent/spec.json"), IoError);
  CHECK_THROWS_AS(load_profile("/nonexistent/profile.json"), IoError);
  const auto dir = scratch_dir("files");
  std::filesystem::create_directories(dir);
  write_text_file(dir / "p.json", json(gen_uniform(2, 2, 1)).dump());
  CHECK(load_profile(dir / "p.json") == gen_uniform(2, 2, 1));
  write_text_file(dir / "broken.json", "{ nope");
  CHECK_THROWS_AS(load_profile(dir / "broken.json"), ConfigError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("format_real is shortest round trip") {
  CHECK(format_real(0.5) == "0.5");
  CHECK(format_real(1.0) == "1");
  CHECK(format_real(0.1) == "0.1");
  const double third = 1.0 / 3.0;
  CHECK(std::stod(format_real(third)) == third);
}

TEST_CASE("CSV round trips") {
  const std::vector<RunRow> rows = {{0, 10, true, 0.0, 3}, {1, 10, false, 1.0 / 3.0, 0}};
  const auto text = runs_csv_text(rows);
  CHECK(text.rfind("run_id,t,stable,max_regret,conflicts\n", 0) == 0);
  CHECK(text.find('\r') == std::string::npos);
  std::istringstream in(text);
  CHECK(read_runs_csv(in) == rows);

  const AggregateSeries agg = {{10, 0.25, 1.5, 0.1}, {20, 1.0, 0.0, 0.0}};
  std::istringstream agg_in(aggregate_csv_text(agg));
  CHECK(read_aggregate_csv(agg_in) == agg);

  const std::vector<ProxyPoint> proxy = {{10, 0.75}, {20, 1.0}};
  const auto proxy_text = proxy_csv_text(proxy);
  CHECK(proxy_text.rfind("t,proxy\n", 0) == 0);
  std::istringstream proxy_in(proxy_text);
  CHECK(read_proxy_csv(proxy_in) == proxy);
}

TEST_CASE("CSV errors carry line numbers") {
  std::istringstream empty("");
  CHECK_THROWS_AS(read_runs_csv(empty), IoError);
  std::istringstream header("t,stable\n");
  CHECK_THROWS_WITH_AS(read_runs_csv(header), doctest::Contains("line 1"), IoError);
  std::istringstream columns("run_id,t,stable,max_regret,conflicts\n0,10,1,0\n");
  CHECK_THROWS_WITH_AS(read_runs_csv(columns), doctest::Contains("line 2"), IoError);
  std::istringstream number("run_id,t,stable,max_regret,conflicts\n0,10,1,0,0\n1,x,1,0,0\n");
  CHECK_THROWS_WITH_AS(read_runs_csv(number), doctest::Contains("line 3"), IoError);
  std::istringstream flag("run_id,t,stable,max_regret,conflicts\n0,10,2,0,0\n");
  CHECK_THROWS_AS(read_runs_csv(flag), IoError);
}

TEST_CASE("experiment outputs land in the expected layout") {
  ExperimentSpec spec;
  spec.episode.scenario = Scenario::kApkp;
  spec.episode.player_policy = PlayerPolicyKind::kOcaUcb;
  spec.episode.generator = GeneratorSpec{GeneratorKind::kUniform, 2, 2, 0.0, 0};
  spec.episode.horizon = 30;
  spec.n_runs = 2;
  spec.master_seed = 4;
  spec.workers = 1;

  const auto dir = scratch_dir("single");
  const auto batches = run_experiment(spec);
  write_experiment_outputs(dir, spec, batches);
  for (const char* f : {"runs.csv", "aggregate.csv", "config.json", "experiment.json"}) {
    CHECK(std::filesystem::exists(dir / f));
  }
  const auto echo = read_json_file(dir / "config.json");
  CHECK(echo.at("master_seed") == 4);
  CHECK(echo.at("library_version") == library_version());
  CHECK(slurp(dir / "aggregate.csv") == aggregate_csv_text(batches[0].aggregate));
  std::filesystem::remove_all(dir);

  spec.sweep = {{"a", json::object()}, {"b", {{"horizon", 20}}}};
  const auto swept_dir = scratch_dir("sweep");
  write_experiment_outputs(swept_dir, spec, run_experiment(spec));
  CHECK(std::filesystem::exists(swept_dir / "a" / "runs.csv"));
  CHECK(std::filesystem::exists(swept_dir / "b" / "config.json"));
  CHECK(std::filesystem::exists(swept_dir / "experiment.json"));
  CHECK(load_experiment_spec(swept_dir / "experiment.json").sweep.size() == 2);
  std::filesystem::remove_all(swept_dir);
}

TEST_CASE("bundled presets load and validate") {
  int seen = 0;
  for (const auto& entry : std::filesystem::directory_iterator(TWOSIDED_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    CAPTURE(entry.path().string());
    const auto spec = load_experiment_spec(entry.path());
    CHECK_NOTHROW(spec.validate());
    ++seen;
  }
  CHECK(seen >= 9);
}
