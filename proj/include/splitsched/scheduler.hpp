#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "splitsched/errors.hpp"
#include "splitsched/fidelity.hpp"
#include "splitsched/types.hpp"

namespace splitsched {

/// One contiguous execution window of a job stage on a backend.
struct TimelineEvent {
  int job_id = 0;
  int stage = 1;  // 1 or 2
  int backend_id = 0;
  double start = 0.0;
  double finish = 0.0;

  friend bool operator==(const TimelineEvent&, const TimelineEvent&) = default;
};

/// Objective weights for the scalarized fitness. Must be nonnegative and sum
/// to 1 so fitness stays comparable across runs.
struct Weights {
  double w1 = 0.5;  // normalized throughput
  double w2 = 0.5;  // fidelity
};

inline void validate_weights(const Weights& w) {
  if (w.w1 < 0.0 || w.w2 < 0.0 || std::abs(w.w1 + w.w2 - 1.0) > 1e-9)
    fail(Errc::invalid_argument, "weights must be nonnegative and sum to 1");
}

/// A non-dominated strategy together with its metrics.
struct ParetoPoint {
  ScheduleStrategy strategy;
  SolutionMetrics metrics;
};

/// All ways one job can be placed on a backend pool: every single backend in
/// ascending id order, then every unordered pair {i, j} with i < j (by id) in
/// lexicographic order, canonicalized so the lower-scoring backend runs stage
/// 1 (score ties keep the lower id first). |L| backends yield
/// |L| + |L|(|L|-1)/2 options; the option index is the gene value used by the
/// optimizer, so this order is part of the library's contract.
inline std::vector<MappingOption> enumerate_mapping_options(
    const std::vector<BackendProfile>& backends) {
  if (backends.empty()) fail(Errc::empty_backends, "cannot enumerate options for an empty pool");
  std::vector<BackendProfile> by_id = backends;
  std::sort(by_id.begin(), by_id.end(),
            [](const BackendProfile& a, const BackendProfile& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < by_id.size(); ++i)
    if (by_id[i].id == by_id[i - 1].id)
      fail(Errc::invalid_argument, "backend ids must be unique");

  std::vector<MappingOption> options;
  options.reserve(by_id.size() + by_id.size() * (by_id.size() - 1) / 2);
  for (const auto& b : by_id) options.push_back(MappingOption::single(b.id));
  for (std::size_t i = 0; i < by_id.size(); ++i) {
    for (std::size_t j = i + 1; j < by_id.size(); ++j) {
      const double si = score_of(by_id[i]);
      const double sj = score_of(by_id[j]);
      options.push_back(si <= sj ? MappingOption::split(by_id[i].id, by_id[j].id)
                                 : MappingOption::split(by_id[j].id, by_id[i].id));
    }
  }
  return options;
}

/// Deterministic list scheduling of a strategy onto the backend pool. Every
/// backend is a single-capacity FIFO server. All stage-1 pieces are released
/// at time 0; a stage-2 piece is released the instant its stage-1 finishes.
/// Whenever a backend is free it starts its pending piece with the smallest
/// (release time, job id). Returns the events sorted by (job id, stage) and
/// the makespan.
///
/// Implementation note: each backend keeps its pending pieces in a min-heap
/// keyed by (release, job id). The heap top is always the piece FIFO would
/// start next on that backend, so one O(|L|) scan per commit picks the
/// globally earliest start; new releases always lie at or after the committed
/// start time, so commits happen in chronological order and are final.
inline std::pair<std::vector<TimelineEvent>, double> simulate_timeline(
    const std::vector<JobSpec>& jobs, const ScheduleStrategy& strategy,
    const std::vector<BackendProfile>& backends) {
  validate_strategy(strategy, jobs, backends);
  if (jobs.empty()) fail(Errc::empty_jobs, "cannot simulate an empty job list");

  struct Piece {
    int job_id;
    int stage;
    std::size_t backend_index;
    double duration;
    int successor;  // index of the stage-2 piece, or -1
  };

  // Backend id -> dense index, so the hot loop never searches by id.
  std::vector<std::pair<int, std::size_t>> id_index;
  id_index.reserve(backends.size());
  for (std::size_t b = 0; b < backends.size(); ++b) id_index.emplace_back(backends[b].id, b);
  std::sort(id_index.begin(), id_index.end());
  auto index_of = [&](int id) {
    auto it = std::lower_bound(id_index.begin(), id_index.end(), std::pair<int, std::size_t>{id, 0});
    return it->second;  // validate_strategy already guaranteed the id exists
  };

  std::vector<Piece> pieces;
  pieces.reserve(2 * jobs.size());
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const JobSpec& job = jobs[j];
    const MappingOption& m = strategy.assignments[j];
    if (!m.is_split()) {
      std::size_t b = index_of(m.stage1);
      pieces.push_back({job.id, 1, b, job.total_iterations * backends[b].iter_time, -1});
    } else {
      auto [first, second] = split_iterations(job, strategy.split_ratio);
      std::size_t b1 = index_of(m.stage1);
      std::size_t b2 = index_of(m.stage2);
      pieces.push_back({job.id, 1, b1, first * backends[b1].iter_time,
                        static_cast<int>(pieces.size()) + 1});
      pieces.push_back({job.id, 2, b2, second * backends[b2].iter_time, -1});
    }
  }

  struct QueueEntry {
    double release;
    int job_id;
    std::size_t piece;
  };
  struct LaterRelease {  // min-heap on (release, job id)
    bool operator()(const QueueEntry& a, const QueueEntry& b) const {
      if (a.release != b.release) return a.release > b.release;
      return a.job_id > b.job_id;
    }
  };
  using Queue = std::priority_queue<QueueEntry, std::vector<QueueEntry>, LaterRelease>;

  std::vector<Queue> pending(backends.size());
  std::size_t unstarted = 0;
  for (std::size_t p = 0; p < pieces.size(); ++p) {
    if (pieces[p].stage == 1) pending[pieces[p].backend_index].push({0.0, pieces[p].job_id, p});
    ++unstarted;
  }

  std::vector<double> busy_until(backends.size(), 0.0);
  std::vector<TimelineEvent> events;
  events.reserve(pieces.size());
  while (unstarted > 0) {
    // Earliest feasible start over all backends; ties keep the lowest index.
    std::size_t chosen = backends.size();
    double best_start = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < backends.size(); ++b) {
      if (pending[b].empty()) continue;
      double start = std::max(busy_until[b], pending[b].top().release);
      if (start < best_start) {
        best_start = start;
        chosen = b;
      }
    }
    // Every stage-1 piece is queued from the start, so a stage-2 piece can
    // only be missing from the queues while its predecessor is queued.
    if (chosen == backends.size())
      fail(Errc::invalid_argument, "timeline simulation stalled with pieces outstanding");

    QueueEntry entry = pending[chosen].top();
    pending[chosen].pop();
    const Piece& piece = pieces[entry.piece];
    double finish = best_start + piece.duration;
    busy_until[chosen] = finish;
    events.push_back({piece.job_id, piece.stage, backends[chosen].id, best_start, finish});
    if (piece.successor >= 0) {
      const Piece& next = pieces[static_cast<std::size_t>(piece.successor)];
      pending[next.backend_index].push({finish, next.job_id, static_cast<std::size_t>(piece.successor)});
    }
    --unstarted;
  }

  double makespan = 0.0;
  for (const auto& e : events) makespan = std::max(makespan, e.finish);
  std::sort(events.begin(), events.end(), [](const TimelineEvent& a, const TimelineEvent& b) {
    if (a.job_id != b.job_id) return a.job_id < b.job_id;
    return a.stage < b.stage;
  });
  return {std::move(events), makespan};
}

/// Jobs completed per unit time.
inline double throughput(std::size_t job_count, double makespan) {
  if (!(makespan > 0.0)) fail(Errc::zero_makespan, "throughput needs a positive makespan");
  return static_cast<double>(job_count) / makespan;
}

/// Expected quality of one job under a mapping: the score of its backend, or
/// for a split the score of the stage-2 backend that produces the final
/// result - which by canonical ordering is the larger of the two.
inline double job_fidelity(const MappingOption& mapping,
                           const std::vector<BackendProfile>& backends) {
  const BackendProfile& s1 = backend_by_id(backends, mapping.stage1);
  if (!mapping.is_split()) return score_of(s1);
  const BackendProfile& s2 = backend_by_id(backends, mapping.stage2);
  return std::max(score_of(s1), score_of(s2));
}

/// Mean job fidelity across the strategy.
inline double average_fidelity(const ScheduleStrategy& strategy, const std::vector<JobSpec>& jobs,
                               const std::vector<BackendProfile>& backends) {
  validate_strategy(strategy, jobs, backends);
  if (jobs.empty()) fail(Errc::empty_jobs, "cannot average fidelity over zero jobs");
  double sum = 0.0;
  for (const auto& m : strategy.assignments) sum += job_fidelity(m, backends);
  return sum / static_cast<double>(strategy.assignments.size());
}

/// A makespan no schedule can beat: the longer of (a) the largest single job
/// run entirely on the fastest backend, and (b) the total iteration load
/// spread perfectly across the pool's aggregate speed.
inline double makespan_lower_bound(const std::vector<JobSpec>& jobs,
                                   const std::vector<BackendProfile>& backends) {
  if (jobs.empty()) fail(Errc::empty_jobs, "lower bound needs at least one job");
  if (backends.empty()) fail(Errc::empty_backends, "lower bound needs at least one backend");
  double min_iter_time = std::numeric_limits<double>::infinity();
  double aggregate_speed = 0.0;
  for (const auto& b : backends) {
    min_iter_time = std::min(min_iter_time, b.iter_time);
    aggregate_speed += 1.0 / b.iter_time;
  }
  long largest_job = 0;
  long total_iterations = 0;
  for (const auto& j : jobs) {
    largest_job = std::max(largest_job, static_cast<long>(j.total_iterations));
    total_iterations += j.total_iterations;
  }
  return std::max(static_cast<double>(largest_job) * min_iter_time,
                  static_cast<double>(total_iterations) / aggregate_speed);
}

/// Fidelity-first baseline: every job runs unsplit on the best-scoring backend.
inline ScheduleStrategy method1_strategy(const std::vector<JobSpec>& jobs,
                                         const std::vector<BackendProfile>& backends) {
  const auto ranked = rank_backends(backends);
  ScheduleStrategy s;
  s.assignments.assign(jobs.size(), MappingOption::single(ranked.front().id));
  return s;
}

/// Throughput-first baseline: jobs round-robin over the pool in descending
/// score order, all unsplit.
inline ScheduleStrategy method2_strategy(const std::vector<JobSpec>& jobs,
                                         const std::vector<BackendProfile>& backends) {
  const auto ranked = rank_backends(backends);
  ScheduleStrategy s;
  s.assignments.reserve(jobs.size());
  for (std::size_t i = 0; i < jobs.size(); ++i)
    s.assignments.push_back(MappingOption::single(ranked[i % ranked.size()].id));
  return s;
}

inline double weighted_fitness(double th_norm, double fidelity, const Weights& weights) {
  validate_weights(weights);
  return weights.w1 * th_norm + weights.w2 * fidelity;
}

/// Full evaluation of one strategy: timeline, throughput (raw and normalized
/// against the makespan lower bound), fidelity, and scalarized fitness.
/// Normalizing throughput by its instance-specific upper bound keeps both
/// fitness terms in (0, 1], so the weights mean what they say.
inline SolutionMetrics evaluate(const ScheduleStrategy& strategy, const std::vector<JobSpec>& jobs,
                                const std::vector<BackendProfile>& backends,
                                const Weights& weights = {}) {
  validate_weights(weights);
  auto [events, makespan] = simulate_timeline(jobs, strategy, backends);
  SolutionMetrics m;
  m.makespan = makespan;
  m.throughput = throughput(jobs.size(), makespan);
  const double bound = makespan_lower_bound(jobs, backends);
  m.th_norm = m.throughput / (static_cast<double>(jobs.size()) / bound);
  m.fidelity = average_fidelity(strategy, jobs, backends);
  m.fitness = weighted_fitness(m.th_norm, m.fidelity, weights);
  return m;
}

/// a dominates b: at least as good on both objectives, strictly better on one.
inline bool dominates(const SolutionMetrics& a, const SolutionMetrics& b) {
  return a.throughput >= b.throughput && a.fidelity >= b.fidelity &&
         (a.throughput > b.throughput || a.fidelity > b.fidelity);
}

/// Turns a gene vector (one option index per job) back into a strategy.
inline ScheduleStrategy decode_strategy(const std::vector<int>& genes,
                                        const std::vector<MappingOption>& options,
                                        double split_ratio) {
  if (options.empty()) fail(Errc::empty_options, "cannot decode against an empty option list");
  ScheduleStrategy s;
  s.split_ratio = split_ratio;
  s.assignments.reserve(genes.size());
  for (int g : genes) {
    if (g < 0 || static_cast<std::size_t>(g) >= options.size())
      fail(Errc::invalid_argument, "gene index " + std::to_string(g) + " outside the option list");
    s.assignments.push_back(options[static_cast<std::size_t>(g)]);
  }
  return s;
}

/// One exhaustively enumerated strategy, as genes plus metrics.
struct EnumeratedPoint {
  std::vector<int> genes;
  SolutionMetrics metrics;
  bool pareto = false;
};

struct BruteForceResult {
  std::size_t strategy_count = 0;
  std::vector<ParetoPoint> frontier;    // non-dominated set, deduplicated by metrics
  ParetoPoint best;                     // maximum fitness under the given weights
  std::vector<EnumeratedPoint> points;  // every strategy, only when keep_all is set
};

/// Exhaustive sweep of every strategy (option count ^ job count gene vectors,
/// enumerated with the last gene fastest). Refuses to start when the space
/// exceeds the cap. Returns the exact Pareto frontier over (throughput,
/// fidelity) and the fitness-optimal point; with keep_all it also returns
/// every evaluated point, each flagged with its frontier membership.
inline BruteForceResult brute_force_frontier(const std::vector<JobSpec>& jobs,
                                             const std::vector<BackendProfile>& backends,
                                             double split_ratio, const Weights& weights = {},
                                             std::size_t cap = 1000000, bool keep_all = false) {
  if (jobs.empty()) fail(Errc::empty_jobs, "cannot enumerate strategies for zero jobs");
  validate_weights(weights);
  const auto options = enumerate_mapping_options(backends);

  double space = std::pow(static_cast<double>(options.size()), static_cast<double>(jobs.size()));
  if (space > static_cast<double>(cap))
    fail(Errc::space_too_large, "strategy space of " + std::to_string(options.size()) + "^" +
                                    std::to_string(jobs.size()) + " exceeds the cap of " +
                                    std::to_string(cap));

  struct FrontierEntry {
    std::vector<int> genes;
    SolutionMetrics metrics;
  };
  std::vector<FrontierEntry> frontier;

  BruteForceResult result;
  double best_fitness = -std::numeric_limits<double>::infinity();
  std::vector<int> best_genes;
  SolutionMetrics best_metrics;

  std::vector<int> genes(jobs.size(), 0);
  while (true) {
    SolutionMetrics metrics = evaluate(decode_strategy(genes, options, split_ratio), jobs,
                                       backends, weights);
    ++result.strategy_count;
    if (keep_all) result.points.push_back({genes, metrics, false});

    if (metrics.fitness > best_fitness) {
      best_fitness = metrics.fitness;
      best_genes = genes;
      best_metrics = metrics;
    }

    bool keep = true;
    for (const auto& f : frontier) {
      if (dominates(f.metrics, metrics) || (f.metrics.throughput == metrics.throughput &&
                                            f.metrics.fidelity == metrics.fidelity)) {
        keep = false;
        break;
      }
    }
    if (keep) {
      std::erase_if(frontier,
                    [&](const FrontierEntry& f) { return dominates(metrics, f.metrics); });
      frontier.push_back({genes, metrics});
    }

    // Odometer step, last gene fastest.
    std::size_t k = genes.size();
    while (k > 0) {
      --k;
      if (++genes[k] < static_cast<int>(options.size())) break;
      genes[k] = 0;
      if (k == 0) goto done;
    }
  }
done:

  std::sort(frontier.begin(), frontier.end(), [](const FrontierEntry& a, const FrontierEntry& b) {
    if (a.metrics.throughput != b.metrics.throughput)
      return a.metrics.throughput < b.metrics.throughput;
    return a.metrics.fidelity < b.metrics.fidelity;
  });
  result.frontier.reserve(frontier.size());
  for (auto& f : frontier)
    result.frontier.push_back({decode_strategy(f.genes, options, split_ratio), f.metrics});
  result.best = {decode_strategy(best_genes, options, split_ratio), best_metrics};

  if (keep_all) {
    for (auto& p : result.points) {
      p.pareto = true;
      for (const auto& f : frontier) {
        if (dominates(f.metrics, p.metrics)) {
          p.pareto = false;
          break;
        }
      }
    }
  }
  return result;
}

/// Per-job fidelity shortfall against the best backend in the pool: how much
/// score each job gives up relative to running on the top-ranked backend.
inline std::vector<double> deviation_distribution(const ScheduleStrategy& strategy,
                                                  const std::vector<JobSpec>& jobs,
                                                  const std::vector<BackendProfile>& backends) {
  validate_strategy(strategy, jobs, backends);
  const double best = score_of(rank_backends(backends).front());
  std::vector<double> deviations;
  deviations.reserve(strategy.assignments.size());
  for (const auto& m : strategy.assignments) deviations.push_back(best - job_fidelity(m, backends));
  return deviations;
}

}  // namespace splitsched
