#pragma once

#include <array>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "json.hpp"
#include "splitsched/convergence.hpp"
#include "splitsched/errors.hpp"
#include "splitsched/fidelity.hpp"
#include "splitsched/ga.hpp"
#include "splitsched/scheduler.hpp"
#include "splitsched/types.hpp"

namespace splitsched {

namespace detail {

/// Shortest decimal form that round-trips to the exact double. Keeping all
/// numeric output on this one path is what makes the CSV files byte-stable
/// across runs and machines.
inline std::string format_number(double value) {
  std::array<char, 32> buf;
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) fail(Errc::invalid_argument, "could not format a number");
  return std::string(buf.data(), ptr);
}

inline std::string format_number(int value) { return std::to_string(value); }
inline std::string format_number(std::size_t value) { return std::to_string(value); }

/// Quotes a CSV field only when it needs it (commas, quotes, newlines).
inline std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

inline const nlohmann::json& require_field(const nlohmann::json& obj, const char* key,
                                           const std::string& context) {
  if (!obj.is_object()) fail(Errc::invalid_field, context + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(Errc::invalid_field, context + ": missing field '" + key + "'");
  return *it;
}

inline double require_number(const nlohmann::json& obj, const char* key,
                             const std::string& context) {
  const auto& v = require_field(obj, key, context);
  if (!v.is_number()) fail(Errc::invalid_field, context + ": field '" + key + "' must be a number");
  return v.get<double>();
}

inline int require_int(const nlohmann::json& obj, const char* key, const std::string& context) {
  const auto& v = require_field(obj, key, context);
  if (!v.is_number_integer())
    fail(Errc::invalid_field, context + ": field '" + key + "' must be an integer");
  return v.get<int>();
}

inline std::string require_string(const nlohmann::json& obj, const char* key,
                                  const std::string& context) {
  const auto& v = require_field(obj, key, context);
  if (!v.is_string()) fail(Errc::invalid_field, context + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

inline nlohmann::json parse_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::parse_error, "cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const std::exception& e) {
    fail(Errc::parse_error, path.string() + ": " + e.what());
  }
}

}  // namespace detail

/// Loads a backend pool from a JSON array of objects with fields id, name,
/// one_q_error, two_q_error, readout_error, iter_time and an optional
/// pre-computed score. Ids must be unique.
inline std::vector<BackendProfile> load_backends_file(const std::filesystem::path& path) {
  const nlohmann::json doc = detail::parse_json_file(path);
  if (!doc.is_array()) fail(Errc::invalid_field, path.string() + ": expected a top-level array");
  if (doc.empty()) fail(Errc::empty_backends, path.string() + ": backend list is empty");

  std::vector<BackendProfile> backends;
  backends.reserve(doc.size());
  std::set<int> seen_ids;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::string context = path.filename().string() + " backend " + std::to_string(i);
    const auto& entry = doc[i];
    BackendProfile b;
    b.id = detail::require_int(entry, "id", context);
    b.name = detail::require_string(entry, "name", context);
    b.one_q_error = detail::require_number(entry, "one_q_error", context);
    b.two_q_error = detail::require_number(entry, "two_q_error", context);
    b.readout_error = detail::require_number(entry, "readout_error", context);
    b.iter_time = detail::require_number(entry, "iter_time", context);
    if (entry.is_object() && entry.contains("score")) {
      if (!entry["score"].is_number())
        fail(Errc::invalid_field, context + ": field 'score' must be a number");
      b.score = entry["score"].get<double>();
    }
    validate_backend_profile(b, context);
    if (!seen_ids.insert(b.id).second)
      fail(Errc::invalid_field, context + ": duplicate backend id " + std::to_string(b.id));
    backends.push_back(std::move(b));
  }
  return backends;
}

/// Loads a job list from a JSON array of objects with fields id,
/// total_iterations, reference_value. Ids must be exactly 0..n-1 (jobs are
/// addressed by id throughout); the returned list is sorted by id.
inline std::vector<JobSpec> load_jobs_file(const std::filesystem::path& path) {
  const nlohmann::json doc = detail::parse_json_file(path);
  if (!doc.is_array()) fail(Errc::invalid_field, path.string() + ": expected a top-level array");
  if (doc.empty()) fail(Errc::empty_jobs, path.string() + ": job list is empty");

  std::vector<JobSpec> jobs;
  jobs.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::string context = path.filename().string() + " job " + std::to_string(i);
    const auto& entry = doc[i];
    JobSpec j;
    j.id = detail::require_int(entry, "id", context);
    j.total_iterations = detail::require_int(entry, "total_iterations", context);
    j.reference_value = detail::require_number(entry, "reference_value", context);
    validate_job_spec(j, context);
    jobs.push_back(j);
  }
  std::sort(jobs.begin(), jobs.end(), [](const JobSpec& a, const JobSpec& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (jobs[i].id != static_cast<int>(i))
      fail(Errc::invalid_field,
           path.string() + ": job ids must be exactly 0.." + std::to_string(jobs.size() - 1));
  }
  return jobs;
}

/// Text form of one mapping: "B2" for a single backend, "B1+B3" for a split
/// with stage 1 before the plus sign. Names come from the backend pool.
inline std::string format_mapping(const MappingOption& mapping,
                                  const std::vector<BackendProfile>& backends) {
  const BackendProfile& s1 = backend_by_id(backends, mapping.stage1);
  if (!mapping.is_split()) return s1.name;
  const BackendProfile& s2 = backend_by_id(backends, mapping.stage2);
  return s1.name + "+" + s2.name;
}

/// Comma-joined mapping list, one item per job in job-id order.
inline std::string format_strategy(const ScheduleStrategy& strategy,
                                   const std::vector<BackendProfile>& backends) {
  std::string text;
  for (std::size_t i = 0; i < strategy.assignments.size(); ++i) {
    if (i > 0) text += ',';
    text += format_mapping(strategy.assignments[i], backends);
  }
  return text;
}

inline const BackendProfile& backend_by_name(const std::vector<BackendProfile>& backends,
                                             std::string_view name) {
  for (const auto& b : backends)
    if (b.name == name) return b;
  fail(Errc::unknown_backend, "no backend named '" + std::string(name) + "'");
}

inline MappingOption parse_mapping(std::string_view text,
                                   const std::vector<BackendProfile>& backends) {
  const std::size_t plus = text.find('+');
  if (plus == std::string_view::npos)
    return MappingOption::single(backend_by_name(backends, text).id);
  if (text.find('+', plus + 1) != std::string_view::npos)
    fail(Errc::parse_error, "mapping '" + std::string(text) + "' has more than two stages");
  const auto first = text.substr(0, plus);
  const auto second = text.substr(plus + 1);
  if (first.empty() || second.empty())
    fail(Errc::parse_error, "mapping '" + std::string(text) + "' has an empty stage");
  return MappingOption::split(backend_by_name(backends, first).id,
                              backend_by_name(backends, second).id);
}

/// Parses "B2+B3,B1,B3" into a strategy with the given split ratio. The
/// result is syntax-checked only; run validate_strategy against a job list
/// for the semantic checks.
inline ScheduleStrategy parse_strategy(std::string_view text,
                                       const std::vector<BackendProfile>& backends,
                                       double split_ratio = 0.5) {
  if (text.empty()) fail(Errc::parse_error, "strategy text is empty");
  ScheduleStrategy strategy;
  strategy.split_ratio = split_ratio;
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = text.find(',', pos);
    std::string_view item =
        comma == std::string_view::npos ? text.substr(pos) : text.substr(pos, comma - pos);
    if (item.empty()) fail(Errc::parse_error, "strategy text has an empty mapping item");
    strategy.assignments.push_back(parse_mapping(item, backends));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return strategy;
}

// ---------------------------------------------------------------------------
// CSV builders. Every writer produces the full file contents as a string so
// tests can compare bytes without touching the filesystem.

inline std::string timeline_csv(const std::vector<TimelineEvent>& events) {
  std::string out = "job_id,stage,backend_id,start,finish\n";
  for (const auto& e : events) {
    out += detail::format_number(e.job_id);
    out += ',';
    out += detail::format_number(e.stage);
    out += ',';
    out += detail::format_number(e.backend_id);
    out += ',';
    out += detail::format_number(e.start);
    out += ',';
    out += detail::format_number(e.finish);
    out += '\n';
  }
  return out;
}

inline std::string benchmarks_csv(const std::vector<BenchmarkResult>& results) {
  std::string out = "backend_id,circuit_id,reference,measured,deviation,score\n";
  for (const auto& r : results) {
    out += detail::format_number(r.backend_id);
    out += ',';
    out += detail::format_number(r.circuit_id);
    out += ',';
    out += detail::format_number(r.reference_value);
    out += ',';
    out += detail::format_number(r.measured_value);
    out += ',';
    out += detail::format_number(r.deviation);
    out += ',';
    out += detail::format_number(job_score(r.reference_value, r.measured_value));
    out += '\n';
  }
  return out;
}

/// Scored pool in rank order (best first).
inline std::string backend_scores_csv(const std::vector<BackendProfile>& backends,
                                      const NoiseWeights& weights = {}) {
  std::string out = "rank,id,name,one_q_error,two_q_error,readout_error,iter_time,noise_index,score\n";
  const auto ranked = rank_backends(backends);
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const auto& b = ranked[i];
    out += detail::format_number(i + 1);
    out += ',';
    out += detail::format_number(b.id);
    out += ',';
    out += detail::csv_field(b.name);
    out += ',';
    out += detail::format_number(b.one_q_error);
    out += ',';
    out += detail::format_number(b.two_q_error);
    out += ',';
    out += detail::format_number(b.readout_error);
    out += ',';
    out += detail::format_number(b.iter_time);
    out += ',';
    out += detail::format_number(noise_index(b, weights));
    out += ',';
    out += detail::format_number(score_of(b));
    out += '\n';
  }
  return out;
}

inline std::string ga_history_csv(const std::vector<GenerationStats>& history) {
  std::string out = "generation,best_fitness,mean_fitness\n";
  for (const auto& g : history) {
    out += detail::format_number(g.generation);
    out += ',';
    out += detail::format_number(g.best_fitness);
    out += ',';
    out += detail::format_number(g.mean_fitness);
    out += '\n';
  }
  return out;
}

inline std::string tail_sweep_csv(const std::vector<std::pair<int, double>>& sweep) {
  std::string out = "tail_iterations,score\n";
  for (const auto& [tail, score] : sweep) {
    out += detail::format_number(tail);
    out += ',';
    out += detail::format_number(score);
    out += '\n';
  }
  return out;
}

/// Appends one trajectory as vqe.csv rows (run,iteration,backend_id,energy).
/// Iterations are 1-based; the backend id for each row comes from the
/// trajectory's recorded segments.
inline void append_trajectory_rows(std::string& out, const std::string& run,
                                   const Trajectory& traj) {
  std::size_t segment = 0;
  for (std::size_t i = 0; i < traj.energies.size(); ++i) {
    while (segment + 1 < traj.segment_starts.size() &&
           static_cast<int>(i) >= traj.segment_starts[segment + 1])
      ++segment;
    out += detail::csv_field(run);
    out += ',';
    out += detail::format_number(i + 1);
    out += ',';
    out += detail::format_number(traj.segment_backends[segment]);
    out += ',';
    out += detail::format_number(traj.energies[i]);
    out += '\n';
  }
}

inline void write_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) fail(Errc::invalid_argument, "cannot create directory " + path.parent_path().string());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::invalid_argument, "cannot open " + path.string() + " for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) fail(Errc::invalid_argument, "failed writing " + path.string());
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::parse_error, "cannot open " + path.string());
  std::string contents((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return contents;
}

}  // namespace splitsched
