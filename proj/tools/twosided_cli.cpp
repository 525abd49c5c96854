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

// Command-line front end. Talks to the library only through twosided.h.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "twosided/twosided.h"

namespace {

struct ProfileDeleter {
  void operator()(twosided_profile* p) const { twosided_profile_free(p); }
};
struct ExperimentDeleter {
  void operator()(twosided_experiment* e) const { twosided_experiment_free(e); }
};
struct ResultsDeleter {
  void operator()(twosided_results* r) const { twosided_results_free(r); }
};
struct StringDeleter {
  void operator()(char* s) const { twosided_string_free(s); }
};

using ProfilePtr = std::unique_ptr<twosided_profile, ProfileDeleter>;

class CliFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void check(twosided_status status, const std::string& context) {
  if (status != TWOSIDED_OK) throw CliFailure(context + ": " + twosided_last_error());
}

std::string format_assignment(const std::vector<int>& assignment) {
  std::string out;
  for (std::size_t p = 0; p < assignment.size(); ++p) {
    if (p) out += ' ';
    out += 'p' + std::to_string(p) + "->";
    out += assignment[p] < 0 ? std::string("none") : 'a' + std::to_string(assignment[p]);
  }
  return out;
}

int cmd_run(const std::string& spec_path, const std::string& out_dir, int workers) {
  twosided_experiment* raw = nullptr;
  check(twosided_experiment_load(spec_path.c_str(), &raw), "loading " + spec_path);
  std::unique_ptr<twosided_experiment, ExperimentDeleter> experiment(raw);
  twosided_results* raw_results = nullptr;
  check(twosided_experiment_run(experiment.get(), workers, &raw_results), "running experiment");
  std::unique_ptr<twosided_results, ResultsDeleter> results(raw_results);
  check(twosided_results_write(results.get(), out_dir.c_str()), "writing results");
  size_t batches = 0;
  check(twosided_results_batch_count(results.get(), &batches), "counting batches");
  std::cout << "wrote " << batches << " batch(es) to " << out_dir << "\n";
  return 0;
}

int cmd_aggregate(const std::string& runs_path, const std::string& out_path) {
  check(twosided_aggregate_file(runs_path.c_str(), out_path.c_str()), "aggregating " + runs_path);
  return 0;
}

int cmd_proxy(const std::string& in_path, const std::string& out_path, int window_rounds,
              int window_snapshots, double threshold, int snapshot_every) {
  if (window_snapshots <= 0) {
    if (snapshot_every <= 0) {
      check(twosided_aggregate_file_cadence(in_path.c_str(), &snapshot_every), "reading " + in_path);
    }
    window_snapshots = std::max(1, window_rounds / snapshot_every);
  }
  check(twosided_proxy_file(in_path.c_str(), out_path.c_str(), window_snapshots, threshold),
        "computing proxy");
  return 0;
}

int cmd_oracle(const std::string& profile_path) {
  twosided_profile* raw = nullptr;
  check(twosided_profile_load(profile_path.c_str(), &raw), "loading " + profile_path);
  ProfilePtr profile(raw);
  int n = 0;
  int k = 0;
  check(twosided_profile_dims(profile.get(), &n, &k), "reading profile");
  std::cout << "players " << n << " arms " << k << "\n";

  std::vector<int> optimal(n);
  std::vector<int> pessimal(n);
  check(twosided_gale_shapley(profile.get(), 0, optimal.data()), "player-proposing deferred acceptance");
  check(twosided_gale_shapley(profile.get(), 1, pessimal.data()), "arm-proposing deferred acceptance");
  std::cout << "player_optimal: " << format_assignment(optimal) << "\n";
  std::cout << "player_pessimal: " << format_assignment(pessimal) << "\n";

  size_t count = 0;
  if (twosided_stable_matchings(profile.get(), nullptr, 0, &count) != TWOSIDED_OK) {
    std::cout << "stable_matchings: skipped (" << twosided_last_error() << ")\n";
    return 0;
  }
  std::vector<int> all(count * static_cast<size_t>(n));
  check(twosided_stable_matchings(profile.get(), all.data(), count, &count), "enumerating");
  std::cout << "stable_matchings: " << count << "\n";
  for (size_t i = 0; i < count; ++i) {
    std::vector<int> m(all.begin() + static_cast<std::ptrdiff_t>(i * n),
                       all.begin() + static_cast<std::ptrdiff_t>((i + 1) * n));
    std::cout << "  " << format_assignment(m) << "\n";
  }
  return 0;
}

int cmd_gen(const std::string& spec_path, const std::string& kind, int players, int arms, double beta,
            unsigned long long seed, const std::string& out_path) {
  std::string generator_json;
  if (!spec_path.empty()) {
    std::ifstream in(spec_path);
    if (!in) throw CliFailure("cannot open " + spec_path);
    generator_json.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  } else {
    nlohmann::json j{{"kind", kind}, {"n_players", players}, {"n_arms", arms < 0 ? players : arms},
                     {"beta", beta}, {"seed", seed}};
    generator_json = j.dump();
  }
  twosided_profile* raw = nullptr;
  check(twosided_profile_generate(generator_json.c_str(), &raw), "generating profile");
  ProfilePtr profile(raw);
  char* raw_text = nullptr;
  check(twosided_profile_to_json(profile.get(), &raw_text), "serializing profile");
  std::unique_ptr<char, StringDeleter> text(raw_text);
  const std::string pretty = nlohmann::json::parse(text.get()).dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << pretty;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw CliFailure("cannot write " + out_path);
    out << pretty;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-sided bandit matching markets: simulate, aggregate, analyse"};
  app.set_version_flag("--version", std::string(twosided_version()));
  app.require_subcommand(1);

  std::string spec_path;
  std::string out_dir;
  int workers = 0;
  auto* run = app.add_subcommand("run", "Execute an experiment spec and write CSV/JSON outputs");
  run->add_option("spec", spec_path, "Experiment spec (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("-o,--out", out_dir, "Output directory")->required();
  run->add_option("-w,--workers", workers, "Worker threads (0 = from spec)")->check(CLI::NonNegativeNumber);

  std::string runs_path;
  std::string aggregate_out;
  auto* aggregate = app.add_subcommand("aggregate", "Recompute aggregate.csv from runs.csv");
  aggregate->add_option("runs", runs_path, "runs.csv")->required();
  aggregate->add_option("-o,--out", aggregate_out, "aggregate.csv to write")->required();

  std::string proxy_in;
  std::string proxy_out;
  int window_rounds = 1000;
  int window_snapshots = 0;
  double threshold = 0.9;
  int snapshot_every = 0;
  std::string preset = "default";
  auto* proxy = app.add_subcommand("proxy", "Sliding-window convergence proxy from aggregate.csv");
  proxy->add_option("aggregate", proxy_in, "aggregate.csv")->required();
  proxy->add_option("-o,--out", proxy_out, "proxy.csv to write")->required();
  proxy->add_option("--window", window_rounds, "Window length in rounds")->check(CLI::PositiveNumber);
  proxy->add_option("--window-snapshots", window_snapshots, "Window length in snapshots (overrides --window)")
      ->check(CLI::PositiveNumber);
  proxy->add_option("--threshold", threshold, "Stability-rate threshold in [0,1]")->check(CLI::Range(0.0, 1.0));
  proxy->add_option("--snapshot-every", snapshot_every, "Snapshot cadence (default: read from file)")
      ->check(CLI::PositiveNumber);
  proxy->add_option("--preset", preset, "default: 1000 rounds; edge: 50 snapshots")
      ->check(CLI::IsMember({"default", "edge"}));

  std::string profile_path;
  auto* oracle = app.add_subcommand("oracle", "Print stable matchings of a profile");
  oracle->add_option("profile", profile_path, "Preference profile (JSON)")->required();

  std::string gen_spec;
  std::string kind = "uniform";
  int players = 5;
  int arms = -1;
  double beta = 0.0;
  unsigned long long seed = 0;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Emit a preference profile from a generator spec");
  gen->add_option("--spec", gen_spec, "Generator spec (JSON); overrides the flags below");
  gen->add_option("--kind", kind, "uniform | beta_heterogeneous | edge_correlated");
  gen->add_option("-n,--players", players, "Number of players");
  gen->add_option("-k,--arms", arms, "Number of arms (default: players)");
  gen->add_option("--beta", beta, "Heterogeneity parameter");
  gen->add_option("--seed", seed, "Seed");
  gen->add_option("-o,--out", gen_out, "Output file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(spec_path, out_dir, workers);
    if (*aggregate) return cmd_aggregate(runs_path, aggregate_out);
    if (*proxy) {
      if (preset == "edge" && window_snapshots == 0) window_snapshots = 50;
      return cmd_proxy(proxy_in, proxy_out, window_rounds, window_snapshots, threshold, snapshot_every);
    }
    if (*oracle) return cmd_oracle(profile_path);
    if (*gen) return cmd_gen(gen_spec, kind, players, arms, beta, seed, gen_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
