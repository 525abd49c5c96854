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

#include "twosided/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

namespace twosided {

using nlohmann::json;

namespace {

template <class T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

template <class T>
T field_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? field<T>(j, key) : fallback;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

template <class T>
T parse_number(const std::string& text, std::size_t line_no) {
  T value{};
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw IoError("line " + std::to_string(line_no) + ": cannot parse '" + text + "'");
  }
  return value;
}

// Reads header + rows, checking the header exactly. Tolerates a trailing CR.
template <class Row, class Parse>
std::vector<Row> read_csv(std::istream& in, const std::string& header, std::size_t columns, Parse parse) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty CSV input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) throw IoError("line 1: expected header '" + header + "', got '" + line + "'");
  std::vector<Row> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != columns) {
      throw IoError("line " + std::to_string(line_no) + ": expected " + std::to_string(columns) +
                    " columns, got " + std::to_string(cells.size()));
    }
    rows.push_back(parse(cells, line_no));
  }
  return rows;
}

std::vector<std::vector<double>> rows_of(const std::vector<double>& flat, int n_rows, int n_cols) {
  std::vector<std::vector<double>> out(n_rows);
  for (int r = 0; r < n_rows; ++r) {
    out[r].assign(flat.begin() + static_cast<std::ptrdiff_t>(r) * n_cols,
                  flat.begin() + static_cast<std::ptrdiff_t>(r + 1) * n_cols);
  }
  return out;
}

std::vector<double> flatten(const json& j, const char* key, int n_rows, int n_cols) {
  const auto rows = field<std::vector<std::vector<double>>>(j, key);
  if (static_cast<int>(rows.size()) != n_rows) {
    throw InputError(std::string(key) + " must have " + std::to_string(n_rows) + " rows");
  }
  std::vector<double> flat;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != n_cols) {
      throw InputError(std::string(key) + " rows must have " + std::to_string(n_cols) + " entries");
    }
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return flat;
}

}  // namespace

void to_json(json& j, const PreferenceProfile& profile) {
  j = json{{"n_players", profile.n_players},
           {"n_arms", profile.n_arms},
           {"player_means", rows_of(profile.player_means, profile.n_players, profile.n_arms)},
           {"arm_means", rows_of(profile.arm_means, profile.n_arms, profile.n_players)}};
}

void from_json(const json& j, PreferenceProfile& profile) {
  PreferenceProfile p;
  p.n_players = field<int>(j, "n_players");
  p.n_arms = field<int>(j, "n_arms");
  if (p.n_players < 1 || p.n_arms < 1) throw InputError("profile sizes must be >= 1");
  p.player_means = flatten(j, "player_means", p.n_players, p.n_arms);
  p.arm_means = flatten(j, "arm_means", p.n_arms, p.n_players);
  p.validate();
  profile = std::move(p);
}

void to_json(json& j, const Matching& m) { j = m.assignment(); }

void to_json(json& j, const GeneratorSpec& spec) {
  j = json{{"kind", std::string(to_string(spec.kind))},
           {"n_players", spec.n_players},
           {"n_arms", spec.n_arms},
           {"beta", spec.beta},
           {"seed", spec.seed}};
}

void from_json(const json& j, GeneratorSpec& spec) {
  GeneratorSpec s;
  s.kind = parse_generator_kind(field<std::string>(j, "kind"));
  s.n_players = field<int>(j, "n_players");
  s.n_arms = field_or<int>(j, "n_arms", s.n_players);
  s.beta = field_or<double>(j, "beta", 0.0);
  s.seed = field_or<std::uint64_t>(j, "seed", 0);
  spec = s;
}

void to_json(json& j, const EpisodeConfig& c) {
  j = json{{"scenario", std::string(to_string(c.scenario))},
           {"player_policy", std::string(to_string(c.player_policy))},
           {"arm_policy", std::string(to_string(c.arm_policy))},
           {"generator", c.generator},
           {"horizon", c.horizon},
           {"lambda", c.lambda},
           {"snapshot_every", c.snapshot_every},
           {"seed", c.seed},
           {"prior_mean", c.beliefs.prior_mean},
           {"prior_precision", c.beliefs.prior_precision},
           {"sample_win_prob", c.beliefs.sample_win_prob}};
}

void from_json(const json& j, EpisodeConfig& c) {
  EpisodeConfig out;
  out.scenario = parse_scenario(field<std::string>(j, "scenario"));
  out.player_policy = parse_player_policy(field<std::string>(j, "player_policy"));
  out.arm_policy = parse_arm_policy(field<std::string>(j, "arm_policy"));
  if (!j.contains("generator")) throw ConfigError("missing field 'generator'");
  out.generator = j.at("generator").get<GeneratorSpec>();
  out.horizon = field<int>(j, "horizon");
  out.lambda = field_or<double>(j, "lambda", 0.9);
  out.snapshot_every = field_or<int>(j, "snapshot_every", 10);
  out.seed = field_or<std::uint64_t>(j, "seed", 0);
  out.beliefs.prior_mean = field_or<double>(j, "prior_mean", 0.0);
  out.beliefs.prior_precision = field_or<double>(j, "prior_precision", 1e-6);
  out.beliefs.sample_win_prob = field_or<bool>(j, "sample_win_prob", false);
  c = out;
}

void to_json(json& j, const ExperimentSpec& spec) {
  j = json{{"name", spec.name},
           {"episode", spec.episode},
           {"n_runs", spec.n_runs},
           {"master_seed", spec.master_seed},
           {"workers", spec.workers}};
  if (!spec.sweep.empty()) {
    json sweep = json::array();
    for (const auto& e : spec.sweep) sweep.push_back({{"label", e.label}, {"set", e.overrides}});
    j["sweep"] = sweep;
  }
}

void from_json(const json& j, ExperimentSpec& spec) {
  ExperimentSpec s;
  s.name = field_or<std::string>(j, "name", "experiment");
  if (!j.contains("episode")) throw ConfigError("missing field 'episode'");
  s.episode = j.at("episode").get<EpisodeConfig>();
  s.n_runs = field_or<int>(j, "n_runs", 1000);
  s.master_seed = field_or<std::uint64_t>(j, "master_seed", 0);
  s.workers = field_or<int>(j, "workers", 0);
  if (j.contains("sweep")) {
    if (!j.at("sweep").is_array()) throw ConfigError("'sweep' must be an array");
    for (const auto& e : j.at("sweep")) {
      SweepEntry entry;
      entry.label = field<std::string>(e, "label");
      entry.overrides = e.contains("set") ? e.at("set") : json::object();
      if (!entry.overrides.is_object()) throw ConfigError("sweep 'set' must be an object");
      s.sweep.push_back(std::move(entry));
    }
  }
  spec = std::move(s);
}

void to_json(json& j, const RewardStats& s) { j = json{{"count", s.count}, {"sum", s.sum}}; }
void from_json(const json& j, RewardStats& s) {
  s.count = field<std::int64_t>(j, "count");
  s.sum = field<double>(j, "sum");
}
void to_json(json& j, const WinStats& s) { j = json{{"wins", s.wins}, {"total", s.total}}; }
void from_json(const json& j, WinStats& s) {
  s.wins = field<std::int64_t>(j, "wins");
  s.total = field<std::int64_t>(j, "total");
}
void to_json(json& j, const GaussianPosterior& p) {
  j = json{{"mean", p.mean}, {"precision", p.precision}, {"known_obs_precision", p.known_obs_precision}};
}
void from_json(const json& j, GaussianPosterior& p) {
  p.mean = field<double>(j, "mean");
  p.precision = field<double>(j, "precision");
  p.known_obs_precision = field_or<double>(j, "known_obs_precision", 1.0);
}
void to_json(json& j, const BetaWinCounts& c) { j = json{{"alpha", c.alpha}, {"beta", c.beta}}; }
void from_json(const json& j, BetaWinCounts& c) {
  c.alpha = field<std::int64_t>(j, "alpha");
  c.beta = field<std::int64_t>(j, "beta");
}
void to_json(json& j, const PositionBelief& b) {
  j = json{{"self", b.self()}, {"higher", b.higher()}, {"lower", b.lower()}};
}

void to_json(json& j, const PlayerPolicyState& s) {
  j = json{{"kind", std::string(to_string(s.kind))},
           {"self", s.self},
           {"lambda", s.lambda},
           {"last_attempt", s.last_attempt ? json(*s.last_attempt) : json(nullptr)}};
  if (!s.reward_stats.empty()) j["reward_stats"] = s.reward_stats;
  if (!s.reward_posteriors.empty()) j["reward_posteriors"] = s.reward_posteriors;
  if (!s.position_beliefs.empty()) j["position_beliefs"] = s.position_beliefs;
  // Win records are sparse; only pairs with history are listed.
  json wins = json::array();
  for (PlayerId q = 0; q < s.n_players; ++q) {
    for (ArmId a = 0; a < s.n_arms; ++a) {
      if (s.kind == PlayerPolicyKind::kPcaUcb && s.win_stats_vs(q, a).total > 0) {
        wins.push_back({{"opponent", q}, {"arm", a}, {"stats", s.win_stats_vs(q, a)}});
      } else if (s.kind == PlayerPolicyKind::kPcaTs) {
        const auto& c = s.win_counts_vs(q, a);
        if (c.alpha + c.beta > 0) wins.push_back({{"opponent", q}, {"arm", a}, {"counts", c}});
      }
    }
  }
  if (!wins.empty()) j["win_records"] = wins;
}

void to_json(json& j, const ArmPolicyState& s) {
  j = json{{"kind", std::string(to_string(s.kind))}, {"self", s.self}};
  if (!s.reward_stats.empty()) j["reward_stats"] = s.reward_stats;
  if (!s.reward_posteriors.empty()) j["reward_posteriors"] = s.reward_posteriors;
}

json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_json_text(buffer.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

PreferenceProfile load_profile(const std::filesystem::path& path) {
  return read_json_file(path).get<PreferenceProfile>();
}

ExperimentSpec load_experiment_spec(const std::filesystem::path& path) {
  auto spec = read_json_file(path).get<ExperimentSpec>();
  spec.validate();
  return spec;
}

EpisodeConfig apply_overrides(const EpisodeConfig& base, const json& overrides) {
  json merged = base;
  merged.merge_patch(overrides);
  return merged.get<EpisodeConfig>();
}

std::string format_real(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw IoError("cannot format real");
  return std::string(buf, ptr);
}

void write_runs_csv(std::ostream& out, std::span<const RunRow> rows) {
  out << "run_id,t,stable,max_regret,conflicts\n";
  for (const auto& r : rows) {
    out << r.run_id << ',' << r.t << ',' << (r.stable ? 1 : 0) << ',' << format_real(r.max_regret)
        << ',' << r.conflicts << '\n';
  }
}

std::vector<RunRow> read_runs_csv(std::istream& in) {
  return read_csv<RunRow>(in, "run_id,t,stable,max_regret,conflicts", 5,
                          [](const std::vector<std::string>& c, std::size_t line) {
                            RunRow r;
                            r.run_id = parse_number<int>(c[0], line);
                            r.t = parse_number<int>(c[1], line);
                            const int stable = parse_number<int>(c[2], line);
                            if (stable != 0 && stable != 1) {
                              throw IoError("line " + std::to_string(line) + ": stable must be 0 or 1");
                            }
                            r.stable = stable == 1;
                            r.max_regret = parse_number<double>(c[3], line);
                            r.conflicts = parse_number<int>(c[4], line);
                            return r;
                          });
}

void write_aggregate_csv(std::ostream& out, std::span<const AggregatePoint> series) {
  out << "t,stability_rate,mean_max_regret,mean_conflicts\n";
  for (const auto& p : series) {
    out << p.t << ',' << format_real(p.stability_rate) << ',' << format_real(p.mean_max_regret) << ','
        << format_real(p.mean_conflicts) << '\n';
  }
}

AggregateSeries read_aggregate_csv(std::istream& in) {
  return read_csv<AggregatePoint>(in, "t,stability_rate,mean_max_regret,mean_conflicts", 4,
                                  [](const std::vector<std::string>& c, std::size_t line) {
                                    AggregatePoint p;
                                    p.t = parse_number<int>(c[0], line);
                                    p.stability_rate = parse_number<double>(c[1], line);
                                    p.mean_max_regret = parse_number<double>(c[2], line);
                                    p.mean_conflicts = parse_number<double>(c[3], line);
                                    return p;
                                  });
}

void write_proxy_csv(std::ostream& out, std::span<const ProxyPoint> proxy) {
  out << "t,proxy\n";
  for (const auto& p : proxy) out << p.t << ',' << format_real(p.value) << '\n';
}

std::vector<ProxyPoint> read_proxy_csv(std::istream& in) {
  return read_csv<ProxyPoint>(in, "t,proxy", 2, [](const std::vector<std::string>& c, std::size_t line) {
    return ProxyPoint{parse_number<int>(c[0], line), parse_number<double>(c[1], line)};
  });
}

std::string runs_csv_text(std::span<const RunRow> rows) {
  std::ostringstream out;
  write_runs_csv(out, rows);
  return out.str();
}

std::string aggregate_csv_text(std::span<const AggregatePoint> series) {
  std::ostringstream out;
  write_aggregate_csv(out, series);
  return out.str();
}

std::string proxy_csv_text(std::span<const ProxyPoint> proxy) {
  std::ostringstream out;
  write_proxy_csv(out, proxy);
  return out.str();
}

json config_echo(const ExperimentSpec& spec, const BatchResult& batch) {
  return json{{"name", spec.name},
              {"label", batch.label},
              {"episode", batch.config},
              {"n_runs", static_cast<int>(batch.runs.size())},
              {"master_seed", batch.master_seed},
              {"library_version", library_version()}};
}

void write_batch_outputs(const std::filesystem::path& dir, const ExperimentSpec& spec,
                         const BatchResult& batch) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  const auto rows = to_rows(batch.runs);
  write_text_file(dir / "runs.csv", runs_csv_text(rows));
  write_text_file(dir / "aggregate.csv", aggregate_csv_text(batch.aggregate));
  write_text_file(dir / "config.json", config_echo(spec, batch).dump(2) + "\n");
}

void write_experiment_outputs(const std::filesystem::path& dir, const ExperimentSpec& spec,
                              std::span<const BatchResult> batches) {
  for (const auto& batch : batches) {
    write_batch_outputs(batch.label.empty() ? dir : dir / batch.label, spec, batch);
  }
  json echo = spec;
  echo["library_version"] = library_version();
  write_text_file(dir / "experiment.json", echo.dump(2) + "\n");
}

}  // namespace twosided
