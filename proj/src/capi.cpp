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

#include "twosided/twosided.h"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "twosided/harness.hpp"
#include "twosided/io.hpp"
#include "twosided/market.hpp"
#include "twosided/pref_gen.hpp"

struct twosided_profile {
  twosided::PreferenceProfile value;
};

struct twosided_experiment {
  twosided::ExperimentSpec value;
};

struct twosided_results {
  twosided::ExperimentSpec spec;
  std::vector<twosided::BatchResult> batches;
};

namespace {

thread_local std::string g_last_error;

twosided_status fail(twosided_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Maps the library's exception hierarchy onto status codes.
template <class Fn>
twosided_status guarded(Fn&& fn) {
  try {
    fn();
    return TWOSIDED_OK;
  } catch (const twosided::InputError& e) {
    return fail(TWOSIDED_ERR_INPUT, e.what());
  } catch (const twosided::ConfigError& e) {
    return fail(TWOSIDED_ERR_CONFIG, e.what());
  } catch (const twosided::IoError& e) {
    return fail(TWOSIDED_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(TWOSIDED_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(TWOSIDED_ERR_INTERNAL, "unknown error");
  }
}

void require(const void* p, const char* name) {
  if (p == nullptr) throw twosided::InputError(std::string(name) + " must not be null");
}

char* heap_copy(const std::string& s) {
  auto* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

twosided::Matching to_matching(const twosided::PreferenceProfile& profile, const int* assignment) {
  return twosided::Matching::from_assignment(
      std::span<const int>(assignment, static_cast<std::size_t>(profile.n_players)), profile.n_arms);
}

std::ifstream open_input(const char* path) {
  std::ifstream in(path);
  if (!in) throw twosided::IoError(std::string("cannot open ") + path);
  return in;
}

}  // namespace

extern "C" {

const char* twosided_version(void) { return twosided::library_version(); }

const char* twosided_last_error(void) { return g_last_error.c_str(); }

void twosided_string_free(char* s) { delete[] s; }

twosided_status twosided_profile_generate(const char* generator_json, twosided_profile** out) {
  return guarded([&] {
    require(generator_json, "generator_json");
    require(out, "out");
    const auto spec = twosided::parse_json_text(generator_json).get<twosided::GeneratorSpec>();
    *out = new twosided_profile{twosided::generate(spec)};
  });
}

twosided_status twosided_profile_from_json(const char* profile_json, twosided_profile** out) {
  return guarded([&] {
    require(profile_json, "profile_json");
    require(out, "out");
    *out = new twosided_profile{twosided::parse_json_text(profile_json).get<twosided::PreferenceProfile>()};
  });
}

twosided_status twosided_profile_load(const char* path, twosided_profile** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new twosided_profile{twosided::load_profile(path)};
  });
}

twosided_status twosided_profile_to_json(const twosided_profile* profile, char** out_json) {
  return guarded([&] {
    require(profile, "profile");
    require(out_json, "out_json");
    nlohmann::json j = profile->value;
    *out_json = heap_copy(j.dump());
  });
}

twosided_status twosided_profile_dims(const twosided_profile* profile, int* n_players, int* n_arms) {
  return guarded([&] {
    require(profile, "profile");
    if (n_players) *n_players = profile->value.n_players;
    if (n_arms) *n_arms = profile->value.n_arms;
  });
}

void twosided_profile_free(twosided_profile* profile) { delete profile; }

twosided_status twosided_gale_shapley(const twosided_profile* profile, int arms_propose,
                                      int* out_assignment) {
  return guarded([&] {
    require(profile, "profile");
    require(out_assignment, "out_assignment");
    const auto m = twosided::gale_shapley(profile->value,
                                          arms_propose ? twosided::Side::kArm : twosided::Side::kPlayer);
    std::copy(m.assignment().begin(), m.assignment().end(), out_assignment);
  });
}

twosided_status twosided_blocking_pair_count(const twosided_profile* profile, const int* assignment,
                                             size_t* out_count) {
  return guarded([&] {
    require(profile, "profile");
    require(assignment, "assignment");
    require(out_count, "out_count");
    *out_count = twosided::blocking_pairs(profile->value, to_matching(profile->value, assignment)).size();
  });
}

twosided_status twosided_max_player_regret(const twosided_profile* profile, const int* assignment,
                                           double* out_regret) {
  return guarded([&] {
    require(profile, "profile");
    require(assignment, "assignment");
    require(out_regret, "out_regret");
    *out_regret = twosided::max_player_regret(profile->value, to_matching(profile->value, assignment));
  });
}

twosided_status twosided_stable_matchings(const twosided_profile* profile, int* out_assignments,
                                          size_t capacity, size_t* out_count) {
  return guarded([&] {
    require(profile, "profile");
    require(out_count, "out_count");
    if (capacity > 0) require(out_assignments, "out_assignments");
    const auto all = twosided::enumerate_stable_matchings(profile->value);
    *out_count = all.size();
    const auto n = static_cast<std::size_t>(profile->value.n_players);
    for (std::size_t i = 0; i < all.size() && i < capacity; ++i) {
      std::copy(all[i].assignment().begin(), all[i].assignment().end(), out_assignments + i * n);
    }
  });
}

twosided_status twosided_experiment_load(const char* path, twosided_experiment** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new twosided_experiment{twosided::load_experiment_spec(path)};
  });
}

twosided_status twosided_experiment_from_json(const char* spec_json, twosided_experiment** out) {
  return guarded([&] {
    require(spec_json, "spec_json");
    require(out, "out");
    auto spec = twosided::parse_json_text(spec_json).get<twosided::ExperimentSpec>();
    spec.validate();
    *out = new twosided_experiment{std::move(spec)};
  });
}

twosided_status twosided_experiment_run(const twosided_experiment* experiment, int workers,
                                        twosided_results** out) {
  return guarded([&] {
    require(experiment, "experiment");
    require(out, "out");
    auto spec = experiment->value;
    if (workers > 0) spec.workers = workers;
    auto batches = twosided::run_experiment(spec);
    *out = new twosided_results{std::move(spec), std::move(batches)};
  });
}

void twosided_experiment_free(twosided_experiment* experiment) { delete experiment; }

twosided_status twosided_results_batch_count(const twosided_results* results, size_t* out_count) {
  return guarded([&] {
    require(results, "results");
    require(out_count, "out_count");
    *out_count = results->batches.size();
  });
}

twosided_status twosided_results_aggregate_csv(const twosided_results* results, size_t batch,
                                               char** out_csv) {
  return guarded([&] {
    require(results, "results");
    require(out_csv, "out_csv");
    if (batch >= results->batches.size()) throw twosided::InputError("batch index out of range");
    *out_csv = heap_copy(twosided::aggregate_csv_text(results->batches[batch].aggregate));
  });
}

twosided_status twosided_results_write(const twosided_results* results, const char* out_dir) {
  return guarded([&] {
    require(results, "results");
    require(out_dir, "out_dir");
    twosided::write_experiment_outputs(out_dir, results->spec, results->batches);
  });
}

void twosided_results_free(twosided_results* results) { delete results; }

twosided_status twosided_aggregate_file(const char* runs_csv_path, const char* aggregate_csv_path) {
  return guarded([&] {
    require(runs_csv_path, "runs_csv_path");
    require(aggregate_csv_path, "aggregate_csv_path");
    auto in = open_input(runs_csv_path);
    const auto rows = twosided::read_runs_csv(in);
    twosided::write_text_file(aggregate_csv_path,
                              twosided::aggregate_csv_text(twosided::aggregate_rows(rows)));
  });
}

twosided_status twosided_proxy_file(const char* aggregate_csv_path, const char* proxy_csv_path,
                                    int window_snapshots, double threshold) {
  return guarded([&] {
    require(aggregate_csv_path, "aggregate_csv_path");
    require(proxy_csv_path, "proxy_csv_path");
    auto in = open_input(aggregate_csv_path);
    const auto series = twosided::read_aggregate_csv(in);
    twosided::write_text_file(proxy_csv_path,
                              twosided::proxy_csv_text(
                                  twosided::convergence_proxy(series, window_snapshots, threshold)));
  });
}

twosided_status twosided_aggregate_file_cadence(const char* aggregate_csv_path, int* out_snapshot_every) {
  return guarded([&] {
    require(aggregate_csv_path, "aggregate_csv_path");
    require(out_snapshot_every, "out_snapshot_every");
    auto in = open_input(aggregate_csv_path);
    auto series = twosided::read_aggregate_csv(in);
    if (series.empty()) throw twosided::IoError("aggregate file has no rows");
    std::sort(series.begin(), series.end(),
              [](const auto& a, const auto& b) { return a.t < b.t; });
    // The first snapshot sits at t = snapshot_every.
    *out_snapshot_every = series.size() >= 2 ? series[1].t - series[0].t : series[0].t;
    if (*out_snapshot_every < 1) throw twosided::IoError("aggregate rounds are not increasing");
  });
}

}  // extern "C"
