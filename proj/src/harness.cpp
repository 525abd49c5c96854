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

#include "twosided/harness.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include "twosided/io.hpp"

namespace twosided {

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void ExperimentSpec::validate() const {
  if (n_runs < 1) throw ConfigError("n_runs must be >= 1");
  if (workers < 0) throw ConfigError("workers must be >= 0");
  if (sweep.empty()) {
    episode.validate();
    return;
  }
  for (const auto& entry : sweep) {
    if (entry.label.empty()) throw ConfigError("sweep entries need a label");
    apply_overrides(episode, entry.overrides).validate();
  }
}

EpisodeConfig run_config(const EpisodeConfig& base, std::uint64_t master_seed, int run_index) {
  EpisodeConfig config = base;
  const auto i = static_cast<std::uint64_t>(run_index);
  config.seed = mix_seed(master_seed, 2 * i);
  config.generator.seed = mix_seed(master_seed, 2 * i + 1);
  return config;
}

BatchResult run_batch(const EpisodeConfig& base, int n_runs, std::uint64_t master_seed, int workers) {
  base.validate();
  if (n_runs < 1) throw ConfigError("n_runs must be >= 1");
  BatchResult result;
  result.config = base;
  result.master_seed = master_seed;
  result.runs.resize(n_runs);

  int threads = workers > 0 ? workers : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, n_runs);

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (int i = next++; i < n_runs; i = next++) {
      try {
        result.runs[i] = run_episode(run_config(base, master_seed, i));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  result.aggregate = aggregate_runs(result.runs);
  return result;
}

std::vector<BatchResult> run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  std::vector<BatchResult> out;
  if (spec.sweep.empty()) {
    out.push_back(run_batch(spec.episode, spec.n_runs, spec.master_seed, spec.workers));
    return out;
  }
  for (const auto& entry : spec.sweep) {
    auto batch = run_batch(apply_overrides(spec.episode, entry.overrides), spec.n_runs,
                           spec.master_seed, spec.workers);
    batch.label = entry.label;
    out.push_back(std::move(batch));
  }
  return out;
}

std::vector<RunRow> to_rows(std::span<const RunLog> runs) {
  std::vector<RunRow> rows;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    for (const auto& s : runs[i].snapshots) {
      rows.push_back({static_cast<int>(i), s.t, s.stable, s.max_regret, s.conflicts});
    }
  }
  return rows;
}

AggregateSeries aggregate_rows(std::span<const RunRow> rows) {
  std::vector<RunRow> sorted(rows.begin(), rows.end());
  std::sort(sorted.begin(), sorted.end(), [](const RunRow& a, const RunRow& b) {
    return a.t != b.t ? a.t < b.t : a.run_id < b.run_id;
  });
  AggregateSeries series;
  std::size_t expected_runs = 0;
  for (std::size_t begin = 0; begin < sorted.size();) {
    std::size_t end = begin;
    double stable = 0.0;
    double regret = 0.0;
    double conflicts = 0.0;
    while (end < sorted.size() && sorted[end].t == sorted[begin].t) {
      if (end > begin && sorted[end].run_id == sorted[end - 1].run_id) {
        throw InputError("duplicate row for run " + std::to_string(sorted[end].run_id) + " at t=" +
                         std::to_string(sorted[end].t));
      }
      stable += sorted[end].stable ? 1.0 : 0.0;
      regret += sorted[end].max_regret;
      conflicts += sorted[end].conflicts;
      ++end;
    }
    const std::size_t count = end - begin;
    if (expected_runs == 0) expected_runs = count;
    if (count != expected_runs) {
      throw InputError("runs do not share snapshot rounds (t=" + std::to_string(sorted[begin].t) + ")");
    }
    const double n = static_cast<double>(count);
    series.push_back({sorted[begin].t, stable / n, regret / n, conflicts / n});
    begin = end;
  }
  return series;
}

AggregateSeries aggregate_runs(std::span<const RunLog> runs) {
  const auto rows = to_rows(runs);
  return aggregate_rows(rows);
}

std::vector<ProxyPoint> convergence_proxy(const AggregateSeries& series, int window_snapshots,
                                          double threshold) {
  if (window_snapshots < 1) throw InputError("proxy window must cover at least one snapshot");
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw InputError("proxy threshold must lie in [0, 1]");
  AggregateSeries sorted = series;
  std::sort(sorted.begin(), sorted.end(),
            [](const AggregatePoint& a, const AggregatePoint& b) { return a.t < b.t; });
  std::vector<ProxyPoint> out;
  out.reserve(sorted.size());
  int above = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    above += sorted[i].stability_rate > threshold ? 1 : 0;
    if (i >= static_cast<std::size_t>(window_snapshots)) {
      above -= sorted[i - window_snapshots].stability_rate > threshold ? 1 : 0;
    }
    const auto in_window = std::min<std::size_t>(i + 1, window_snapshots);
    out.push_back({sorted[i].t, static_cast<double>(above) / static_cast<double>(in_window)});
  }
  return out;
}

int window_rounds_to_snapshots(int window_rounds, int snapshot_every) {
  if (window_rounds < 1 || snapshot_every < 1) throw InputError("window and cadence must be >= 1");
  return std::max(1, window_rounds / snapshot_every);
}

std::optional<int> first_reaching(std::span<const ProxyPoint> proxy, double level) {
  for (const auto& p : proxy) {
    if (p.value >= level) return p.t;
  }
  return std::nullopt;
}

}  // namespace twosided
