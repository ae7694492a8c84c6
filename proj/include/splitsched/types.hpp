#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "splitsched/errors.hpp"

namespace splitsched {

/// A quantum backend abstracted as a single-capacity server: a noise profile,
/// a fixed wall-clock cost per job iteration, and (once measured) a proxy
/// fidelity score in (0, 1].
struct BackendProfile {
  int id = 0;
  std::string name;
  double one_q_error = 0.0;
  double two_q_error = 0.0;
  double readout_error = 0.0;
  double iter_time = 1.0;              // seconds per job iteration
  std::optional<double> score;         // filled in by backend scoring

  friend bool operator==(const BackendProfile&, const BackendProfile&) = default;
};

/// An iterative variational job: a fixed iteration budget and the known
/// reference value its observable should converge to.
struct JobSpec {
  int id = 0;
  int total_iterations = 150;
  double reference_value = -1.86;

  friend bool operator==(const JobSpec&, const JobSpec&) = default;
};

/// Where one job runs: a single backend, or an ordered two-stage split. For a
/// split, stage 1 is the noisier backend (early iterations tolerate noise)
/// and stage 2 the higher-scoring one that refines the result.
struct MappingOption {
  enum class Kind { single, split };

  Kind kind = Kind::single;
  int stage1 = 0;   // single: the only backend; split: the noisier backend
  int stage2 = -1;  // split only; -1 otherwise

  static MappingOption single(int backend_id) {
    return {Kind::single, backend_id, -1};
  }
  static MappingOption split(int stage1_id, int stage2_id) {
    return {Kind::split, stage1_id, stage2_id};
  }

  bool is_split() const { return kind == Kind::split; }

  friend bool operator==(const MappingOption&, const MappingOption&) = default;
};

/// A complete scheduling decision: one mapping per job (in job-id order) plus
/// the global split ratio, i.e. the fraction of each split job's iterations
/// that runs on the stage-2 backend.
struct ScheduleStrategy {
  std::vector<MappingOption> assignments;
  double split_ratio = 0.5;

  friend bool operator==(const ScheduleStrategy&, const ScheduleStrategy&) = default;
};

/// Everything the optimizer needs to compare two strategies.
struct SolutionMetrics {
  double makespan = 0.0;
  double throughput = 0.0;  // jobs per unit time
  double th_norm = 0.0;     // throughput / (job count / makespan lower bound)
  double fidelity = 0.0;    // mean per-job proxy score
  double fitness = 0.0;     // weighted sum of th_norm and fidelity

  friend bool operator==(const SolutionMetrics&, const SolutionMetrics&) = default;
};

inline void validate_backend_profile(const BackendProfile& b, const std::string& context = "") {
  const std::string where = context.empty() ? "backend " + b.name : context;
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(b.one_q_error)) fail(Errc::invalid_field, where + ": one_q_error must lie in [0, 1]");
  if (!in_unit(b.two_q_error)) fail(Errc::invalid_field, where + ": two_q_error must lie in [0, 1]");
  if (!in_unit(b.readout_error)) fail(Errc::invalid_field, where + ": readout_error must lie in [0, 1]");
  if (!(b.iter_time > 0.0)) fail(Errc::invalid_field, where + ": iter_time must be positive");
  if (b.score && !(*b.score > 0.0 && *b.score <= 1.0))
    fail(Errc::invalid_field, where + ": score must lie in (0, 1]");
}

inline void validate_job_spec(const JobSpec& j, const std::string& context = "") {
  const std::string where = context.empty() ? "job " + std::to_string(j.id) : context;
  if (j.total_iterations < 1) fail(Errc::invalid_field, where + ": total_iterations must be >= 1");
  if (j.reference_value == 0.0) fail(Errc::invalid_field, where + ": reference_value must be nonzero");
}

inline const BackendProfile* find_backend(const std::vector<BackendProfile>& backends, int id) {
  for (const auto& b : backends)
    if (b.id == id) return &b;
  return nullptr;
}

inline const BackendProfile& backend_by_id(const std::vector<BackendProfile>& backends, int id) {
  const BackendProfile* b = find_backend(backends, id);
  if (!b) fail(Errc::unknown_backend, "no backend with id " + std::to_string(id));
  return *b;
}

/// The backend's proxy score, or MissingScore if scoring has not run yet.
inline double score_of(const BackendProfile& b) {
  if (!b.score) fail(Errc::missing_score, "backend " + b.name + " has not been scored");
  return *b.score;
}

/// Splits a job's iteration budget at ratio r: stage 2 receives
/// round(r * total), and both stages are kept nonempty by clamping.
inline std::pair<int, int> split_iterations(const JobSpec& job, double split_ratio) {
  if (!(split_ratio > 0.0 && split_ratio < 1.0))
    fail(Errc::ratio_out_of_range, "split ratio must lie strictly inside (0, 1)");
  if (job.total_iterations < 2)
    fail(Errc::invalid_argument,
         "job " + std::to_string(job.id) + " has fewer than 2 iterations and cannot be split");
  int stage2 = static_cast<int>(std::floor(split_ratio * job.total_iterations + 0.5));
  stage2 = std::clamp(stage2, 1, job.total_iterations - 1);
  return {job.total_iterations - stage2, stage2};
}

/// Checks a strategy against a job list and backend pool. Verifies, in order:
/// the split ratio, the assignment count, and per job that every referenced
/// backend exists, that a split uses two distinct backends, and that the
/// stage-1 score does not exceed the stage-2 score (ties must keep the
/// lower-id backend first). Returns its argument so callers can validate
/// inline.
inline const ScheduleStrategy& validate_strategy(const ScheduleStrategy& strategy,
                                                 const std::vector<JobSpec>& jobs,
                                                 const std::vector<BackendProfile>& backends) {
  if (!(strategy.split_ratio > 0.0 && strategy.split_ratio < 1.0))
    fail(Errc::ratio_out_of_range, "split ratio must lie strictly inside (0, 1)");
  if (strategy.assignments.size() != jobs.size())
    fail(Errc::length_mismatch, "strategy has " + std::to_string(strategy.assignments.size()) +
                                    " assignments for " + std::to_string(jobs.size()) + " jobs");
  for (std::size_t i = 0; i < strategy.assignments.size(); ++i) {
    const MappingOption& m = strategy.assignments[i];
    const std::string where = "assignment " + std::to_string(i);
    const BackendProfile* s1 = find_backend(backends, m.stage1);
    if (!s1) fail(Errc::unknown_backend, where + ": no backend with id " + std::to_string(m.stage1));
    if (!m.is_split()) continue;
    const BackendProfile* s2 = find_backend(backends, m.stage2);
    if (!s2) fail(Errc::unknown_backend, where + ": no backend with id " + std::to_string(m.stage2));
    if (m.stage1 == m.stage2)
      fail(Errc::split_same_backend, where + ": split stages must use distinct backends");
    const double first = score_of(*s1);
    const double second = score_of(*s2);
    if (first > second || (first == second && m.stage1 > m.stage2))
      fail(Errc::split_order_violation,
           where + ": stage 1 must be the noisier (lower-scoring) backend");
  }
  return strategy;
}

}  // namespace splitsched
