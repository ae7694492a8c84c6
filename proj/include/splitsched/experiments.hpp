#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "splitsched/convergence.hpp"
#include "splitsched/errors.hpp"
#include "splitsched/fidelity.hpp"
#include "splitsched/ga.hpp"
#include "splitsched/io.hpp"
#include "splitsched/rng.hpp"
#include "splitsched/scheduler.hpp"
#include "splitsched/types.hpp"

namespace splitsched {

/// Everything a driver run needs: input files, output directory, the base
/// seed every derived stream flows from, and the model knobs.
struct RunConfig {
  std::filesystem::path backends_file;
  std::filesystem::path jobs_file;
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 42;
  std::vector<double> split_ratios{0.2, 0.4, 0.6, 0.8};
  int benchmark_circuits = 5;
  GaConfig ga{};
  BenchmarkModel benchmark{};
  ConvergenceModel convergence{};
};

inline void validate_run_config(const RunConfig& config) {
  if (config.split_ratios.empty())
    fail(Errc::invalid_argument, "need at least one split ratio");
  for (double r : config.split_ratios)
    if (!(r > 0.0 && r < 1.0))
      fail(Errc::ratio_out_of_range, "split ratio must lie strictly inside (0, 1)");
  if (config.benchmark_circuits < 1)
    fail(Errc::invalid_argument, "benchmark suite needs at least one circuit");
  validate_ga_config(config.ga);
}

/// Optional JSON overrides for a RunConfig: any subset of seed, output_dir,
/// split_ratios, benchmark_circuits, and the GA block (population_size,
/// generations, mutation_rate, elite_size, workers, weights). The weights
/// field is either the string "dynamic" or a [w1, w2] pair.
inline RunConfig load_run_config(const std::filesystem::path& path, RunConfig base = {}) {
  const nlohmann::json doc = detail::parse_json_file(path);
  const std::string context = path.filename().string();
  if (!doc.is_object()) fail(Errc::invalid_field, context + ": expected a top-level object");

  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer())
      fail(Errc::invalid_field, context + ": field 'seed' must be an integer");
    base.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string())
      fail(Errc::invalid_field, context + ": field 'output_dir' must be a string");
    base.output_dir = doc["output_dir"].get<std::string>();
  }
  if (doc.contains("split_ratios")) {
    if (!doc["split_ratios"].is_array())
      fail(Errc::invalid_field, context + ": field 'split_ratios' must be an array");
    base.split_ratios.clear();
    for (const auto& r : doc["split_ratios"]) {
      if (!r.is_number()) fail(Errc::invalid_field, context + ": split ratios must be numbers");
      base.split_ratios.push_back(r.get<double>());
    }
  }
  if (doc.contains("benchmark_circuits"))
    base.benchmark_circuits = detail::require_int(doc, "benchmark_circuits", context);
  if (doc.contains("ga")) {
    const auto& ga = doc["ga"];
    const std::string ga_context = context + " ga";
    if (!ga.is_object()) fail(Errc::invalid_field, context + ": field 'ga' must be an object");
    if (ga.contains("population_size"))
      base.ga.population_size = detail::require_int(ga, "population_size", ga_context);
    if (ga.contains("generations"))
      base.ga.generations = detail::require_int(ga, "generations", ga_context);
    if (ga.contains("mutation_rate"))
      base.ga.mutation_rate = detail::require_number(ga, "mutation_rate", ga_context);
    if (ga.contains("elite_size"))
      base.ga.elite_size = detail::require_int(ga, "elite_size", ga_context);
    if (ga.contains("workers")) base.ga.workers = detail::require_int(ga, "workers", ga_context);
    if (ga.contains("weights")) {
      const auto& w = ga["weights"];
      if (w.is_string() && w.get<std::string>() == "dynamic") {
        base.ga.weights.dynamic = true;
      } else if (w.is_array() && w.size() == 2 && w[0].is_number() && w[1].is_number()) {
        base.ga.weights.dynamic = false;
        base.ga.weights.w1 = w[0].get<double>();
        base.ga.weights.w2 = w[1].get<double>();
      } else {
        fail(Errc::invalid_field, ga_context + ": weights must be \"dynamic\" or a [w1, w2] pair");
      }
    }
  }
  validate_run_config(base);
  return base;
}

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

/// Scores the pool from the config's benchmark settings. Every driver goes
/// through this, so a given (backends file, seed) pair always produces the
/// same scores no matter which subcommand asked.
inline std::vector<BackendProfile> load_scored_backends(const RunConfig& config) {
  auto backends = load_backends_file(config.backends_file);
  return score_backends(backends, default_benchmark_suite(config.benchmark_circuits), config.seed,
                        config.benchmark);
}

/// Grows or shrinks a base job list to exactly `count` jobs by cycling the
/// base entries, reassigning ids 0..count-1.
inline std::vector<JobSpec> resize_job_list(const std::vector<JobSpec>& base, int count) {
  if (base.empty()) fail(Errc::empty_jobs, "cannot resize an empty job list");
  if (count < 1) fail(Errc::invalid_argument, "job count must be >= 1");
  std::vector<JobSpec> jobs;
  jobs.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    JobSpec j = base[static_cast<std::size_t>(i) % base.size()];
    j.id = i;
    jobs.push_back(j);
  }
  return jobs;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// score-backends

struct ScoreReport {
  std::vector<BackendProfile> backends;  // scored, input order
  std::vector<BackendProfile> ranked;    // scored, best first
  std::vector<BenchmarkResult> results;  // all backends, input order
};

/// Benchmarks every backend, ranks the pool, and writes backend_scores.csv
/// and benchmarks.csv to the output directory.
inline ScoreReport score_backends_report(const RunConfig& config) {
  validate_run_config(config);
  const auto suite = default_benchmark_suite(config.benchmark_circuits);
  ScoreReport report;
  report.backends = load_backends_file(config.backends_file);
  for (auto& b : report.backends) {
    auto results = run_benchmarks(b, suite, config.seed, config.benchmark);
    b.score = backend_score(results);
    report.results.insert(report.results.end(), results.begin(), results.end());
  }
  report.ranked = rank_backends(report.backends);
  write_file(config.output_dir / "backend_scores.csv",
             backend_scores_csv(report.backends, config.benchmark.noise_weights));
  write_file(config.output_dir / "benchmarks.csv", benchmarks_csv(report.results));
  return report;
}

// ---------------------------------------------------------------------------
// schedule

struct ScheduleOptions {
  std::vector<int> job_counts;                  // empty: use the jobs file as-is
  std::optional<std::string> forced_strategy;   // evaluate this instead of optimizing
  double forced_ratio = 0.5;                    // split ratio for the forced strategy
};

struct ScheduleRun {
  int job_count = 0;
  std::string method;      // "ga", "method1", "method2", or "forced"
  double ratio = 0.0;      // split ratio; 0 for the unsplit baselines
  std::string strategy_text;
  SolutionMetrics metrics;
  double wall_seconds = 0.0;
};

struct ScheduleReport {
  std::vector<BackendProfile> backends;  // scored
  std::vector<ScheduleRun> runs;
};

/// The headline experiment. For each job count: one GA run per configured
/// split ratio plus the two fixed baselines, all against the same scored
/// pool. Writes schedule.csv (one row per run), strategies.csv, per-run GA
/// history files, and for the final job count timeline_*.csv and
/// deviations.csv. With forced_strategy set, skips the optimizer and
/// evaluates exactly that strategy instead.
inline ScheduleReport run_schedule(const RunConfig& config, const ScheduleOptions& options = {}) {
  validate_run_config(config);
  ScheduleReport report;
  report.backends = detail::load_scored_backends(config);
  const auto base_jobs = load_jobs_file(config.jobs_file);

  std::string schedule_rows = "job_count,method,ratio,TH,TH_norm,FI,fitness,makespan,wall_seconds\n";
  std::string strategy_rows = "job_count,method,ratio,strategy\n";
  std::string deviation_rows = "method,job_id,deviation\n";

  auto add_run = [&](int job_count, const std::string& method, double ratio,
                     const ScheduleStrategy& strategy, const SolutionMetrics& metrics,
                     double wall_seconds) {
    const std::string text = format_strategy(strategy, report.backends);
    report.runs.push_back({job_count, method, ratio, text, metrics, wall_seconds});
    schedule_rows += detail::format_number(job_count) + ',' + method + ',' +
                     detail::format_number(ratio) + ',' + detail::format_number(metrics.throughput) +
                     ',' + detail::format_number(metrics.th_norm) + ',' +
                     detail::format_number(metrics.fidelity) + ',' +
                     detail::format_number(metrics.fitness) + ',' +
                     detail::format_number(metrics.makespan) + ',' +
                     detail::format_number(wall_seconds) + '\n';
    strategy_rows += detail::format_number(job_count) + ',' + method + ',' +
                     detail::format_number(ratio) + ',' + detail::csv_field(text) + '\n';
  };

  auto add_details = [&](const std::string& method, const ScheduleStrategy& strategy,
                         const std::vector<JobSpec>& jobs, const std::string& timeline_name) {
    auto [events, makespan] = simulate_timeline(jobs, strategy, report.backends);
    (void)makespan;
    write_file(config.output_dir / timeline_name, timeline_csv(events));
    const auto deviations = deviation_distribution(strategy, jobs, report.backends);
    for (std::size_t j = 0; j < deviations.size(); ++j)
      deviation_rows += method + ',' + detail::format_number(jobs[j].id) + ',' +
                        detail::format_number(deviations[j]) + '\n';
  };

  if (options.forced_strategy) {
    const auto& jobs = base_jobs;
    const ScheduleStrategy strategy =
        parse_strategy(*options.forced_strategy, report.backends, options.forced_ratio);
    validate_strategy(strategy, jobs, report.backends);
    const Weights weights = resolve_weights(jobs.size(), config.ga.weights);
    const auto t0 = std::chrono::steady_clock::now();
    const SolutionMetrics metrics = evaluate(strategy, jobs, report.backends, weights);
    add_run(static_cast<int>(jobs.size()), "forced", options.forced_ratio, strategy, metrics,
            detail::seconds_since(t0));
    add_details("forced", strategy, jobs, "timeline_forced.csv");
    write_file(config.output_dir / "schedule.csv", schedule_rows);
    write_file(config.output_dir / "strategies.csv", strategy_rows);
    write_file(config.output_dir / "deviations.csv", deviation_rows);
    return report;
  }

  std::vector<int> job_counts = options.job_counts;
  if (job_counts.empty()) job_counts.push_back(static_cast<int>(base_jobs.size()));

  for (std::size_t c = 0; c < job_counts.size(); ++c) {
    const int count = job_counts[c];
    const bool detailed = c + 1 == job_counts.size();  // details only for the last count
    const auto jobs = detail::resize_job_list(base_jobs, count);
    const Weights weights = resolve_weights(jobs.size(), config.ga.weights);

    for (std::size_t r = 0; r < config.split_ratios.size(); ++r) {
      const double ratio = config.split_ratios[r];
      GaConfig ga = config.ga;
      ga.seed = mix_seed(config.seed, static_cast<std::uint64_t>(count), r);
      const auto t0 = std::chrono::steady_clock::now();
      const EvolveResult result = evolve(ga, jobs, report.backends, ratio);
      const double wall = detail::seconds_since(t0);
      add_run(count, "ga", ratio, result.best, result.best_metrics, wall);
      write_file(config.output_dir / ("ga_history_j" + std::to_string(count) + "_r" +
                                      detail::format_number(ratio) + ".csv"),
                 ga_history_csv(result.history));
      if (detailed)
        add_details("ga_r" + detail::format_number(ratio), result.best, jobs,
                    "timeline_ga_r" + detail::format_number(ratio) + ".csv");
    }

    {
      const auto t0 = std::chrono::steady_clock::now();
      const ScheduleStrategy strategy = method1_strategy(jobs, report.backends);
      const SolutionMetrics metrics = evaluate(strategy, jobs, report.backends, weights);
      add_run(count, "method1", 0.0, strategy, metrics, detail::seconds_since(t0));
      if (detailed) add_details("method1", strategy, jobs, "timeline_method1.csv");
    }
    {
      const auto t0 = std::chrono::steady_clock::now();
      const ScheduleStrategy strategy = method2_strategy(jobs, report.backends);
      const SolutionMetrics metrics = evaluate(strategy, jobs, report.backends, weights);
      add_run(count, "method2", 0.0, strategy, metrics, detail::seconds_since(t0));
      if (detailed) add_details("method2", strategy, jobs, "timeline_method2.csv");
    }
  }

  write_file(config.output_dir / "schedule.csv", schedule_rows);
  write_file(config.output_dir / "strategies.csv", strategy_rows);
  write_file(config.output_dir / "deviations.csv", deviation_rows);
  return report;
}

// ---------------------------------------------------------------------------
// dse (design-space exploration)

struct DseOptions {
  double ratio = 0.5;
  int ga_runs = 5;
  std::size_t cap = 1000000;        // refuse larger strategy spaces
  double fitness_tolerance = 0.98;  // GA best must reach this fraction of the oracle
  double point_tolerance = 0.01;    // per-axis slack for near-frontier acceptance
};

struct DseGaRun {
  std::uint64_t seed = 0;
  std::vector<int> genes;
  SolutionMetrics metrics;
  bool near_frontier = false;
  bool fitness_ok = false;
};

struct DseReport {
  std::size_t strategy_count = 0;
  std::size_t frontier_size = 0;
  ParetoPoint oracle_best;           // fitness-optimal point of the full sweep
  std::vector<DseGaRun> ga_runs;
  bool ga_ok = false;                // every GA run passed both checks
};

/// Exhaustive sweep against the optimizer. Enumerates the whole strategy
/// space at one split ratio, computes the exact Pareto frontier over
/// (throughput, fidelity), repeats the GA from several derived seeds, and
/// writes dse.csv with every point flagged for frontier membership and GA
/// choice. A GA run passes if its fitness reaches fitness_tolerance of the
/// exhaustive optimum and its point is non-dominated or within
/// point_tolerance per axis of a frontier point.
inline DseReport run_dse(const RunConfig& config, const DseOptions& options = {}) {
  validate_run_config(config);
  if (options.ga_runs < 1) fail(Errc::invalid_argument, "need at least one optimizer run");
  if (!(options.ratio > 0.0 && options.ratio < 1.0))
    fail(Errc::ratio_out_of_range, "split ratio must lie strictly inside (0, 1)");

  const auto backends = detail::load_scored_backends(config);
  const auto jobs = load_jobs_file(config.jobs_file);
  const Weights weights = resolve_weights(jobs.size(), config.ga.weights);
  const auto options_list = enumerate_mapping_options(backends);

  BruteForceResult brute = brute_force_frontier(jobs, backends, options.ratio, weights,
                                                options.cap, /*keep_all=*/true);

  DseReport report;
  report.strategy_count = brute.strategy_count;
  report.frontier_size = brute.frontier.size();
  report.oracle_best = brute.best;

  // Gene vectors enumerate with the last gene fastest, so a vector's position
  // in `points` is its mixed-radix value. Used to flag GA picks in dse.csv.
  auto point_index = [&](const std::vector<int>& genes) {
    std::size_t index = 0;
    for (int g : genes) index = index * options_list.size() + static_cast<std::size_t>(g);
    return index;
  };

  auto near_frontier = [&](const SolutionMetrics& m) {
    for (const auto& f : brute.frontier) {
      if (!dominates(f.metrics, m)) continue;
      // Dominated: acceptable only if some frontier point is close on both axes.
      bool close = false;
      for (const auto& g : brute.frontier) {
        if (std::abs(g.metrics.throughput - m.throughput) <= options.point_tolerance &&
            std::abs(g.metrics.fidelity - m.fidelity) <= options.point_tolerance) {
          close = true;
          break;
        }
      }
      return close;
    }
    return true;  // no frontier point dominates it
  };

  report.ga_ok = true;
  for (int run = 0; run < options.ga_runs; ++run) {
    GaConfig ga = config.ga;
    ga.seed = mix_seed(config.seed, 0x64736531ULL, static_cast<std::uint64_t>(run));
    const EvolveResult result = evolve(ga, jobs, backends, options.ratio);
    DseGaRun entry;
    entry.seed = ga.seed;
    entry.genes = result.best_genes;
    entry.metrics = result.best_metrics;
    entry.fitness_ok =
        result.best_metrics.fitness >= options.fitness_tolerance * brute.best.metrics.fitness;
    entry.near_frontier = near_frontier(result.best_metrics);
    report.ga_ok = report.ga_ok && entry.fitness_ok && entry.near_frontier;
    report.ga_runs.push_back(std::move(entry));
  }

  std::vector<bool> ga_choice(brute.points.size(), false);
  for (const auto& run : report.ga_runs) ga_choice[point_index(run.genes)] = true;

  std::string rows = "strategy,TH,FI,is_pareto,is_ga_choice\n";
  for (std::size_t i = 0; i < brute.points.size(); ++i) {
    const auto& p = brute.points[i];
    rows += detail::csv_field(
                format_strategy(decode_strategy(p.genes, options_list, options.ratio), backends)) +
            ',' + detail::format_number(p.metrics.throughput) + ',' +
            detail::format_number(p.metrics.fidelity) + ',' + (p.pareto ? "1" : "0") + ',' +
            (ga_choice[i] ? "1" : "0") + '\n';
  }
  write_file(config.output_dir / "dse.csv", rows);
  return report;
}

// ---------------------------------------------------------------------------
// vqe-demo

struct VqeDemoOptions {
  std::optional<int> noisy_id;   // default: lowest-scoring backend
  std::optional<int> clean_id;   // default: highest-scoring backend
  int tail_iterations = 30;      // clean iterations at the end of the split run
  int sweep_step = 10;           // tail-length step for the sweep
};

struct VqeDemoRun {
  std::string name;
  Trajectory trajectory;
  double final_energy = 0.0;
  double score = 0.0;
  std::optional<int> iterations_to_target;       // within the whole run
  std::optional<int> tail_iterations_to_target;  // within the final segment
};

struct VqeDemoReport {
  BackendProfile noisy;
  BackendProfile clean;
  JobSpec job;
  double target = 0.0;     // clean backend's energy floor
  double tolerance = 0.0;  // 5% of |reference|
  VqeDemoRun all_noisy;
  VqeDemoRun all_clean;
  VqeDemoRun split;
  std::vector<std::pair<int, double>> sweep;
};

/// Runs one job three ways through the convergence surrogate - all on the
/// noisy backend, all on the clean one, and split with a clean tail - then
/// sweeps the tail length. Writes vqe.csv (every trajectory point),
/// convergence.csv (per-run summary), and tail_sweep.csv.
inline VqeDemoReport run_vqe_demo(const RunConfig& config, const VqeDemoOptions& options = {}) {
  validate_run_config(config);
  const auto backends = detail::load_scored_backends(config);
  const auto jobs = load_jobs_file(config.jobs_file);
  const auto ranked = rank_backends(backends);

  VqeDemoReport report;
  report.job = jobs.front();
  report.clean = options.clean_id ? backend_by_id(backends, *options.clean_id) : ranked.front();
  report.noisy = options.noisy_id ? backend_by_id(backends, *options.noisy_id) : ranked.back();
  if (report.noisy.id == report.clean.id)
    fail(Errc::invalid_argument, "the demo needs two distinct backends");
  report.target = energy_floor(report.clean, report.job.reference_value, config.convergence);
  report.tolerance = 0.05 * std::abs(report.job.reference_value);

  const int total = report.job.total_iterations;
  if (options.tail_iterations < 1 || options.tail_iterations >= total)
    fail(Errc::tail_out_of_range, "tail iterations must lie in [1, total_iterations)");
  if (options.sweep_step < 1) fail(Errc::invalid_argument, "sweep step must be >= 1");

  auto make_run = [&](const std::string& name, const std::vector<Segment>& segments,
                      std::uint64_t salt) {
    VqeDemoRun run;
    run.name = name;
    run.trajectory = run_segments(report.job, segments, config.convergence,
                                  mix_seed(config.seed, 0x76716564ULL, salt));
    run.final_energy = run.trajectory.energies.back();
    run.score = final_score(run.trajectory, report.job.reference_value);
    run.iterations_to_target =
        iterations_to_converge(run.trajectory, report.target, report.tolerance);
    // Same question asked of the final segment alone: how many of its
    // iterations until the target? For single-segment runs this equals the
    // whole-run answer.
    const int tail_start = run.trajectory.segment_starts.back();
    if (run.iterations_to_target && *run.iterations_to_target > tail_start)
      run.tail_iterations_to_target = *run.iterations_to_target - tail_start;
    return run;
  };

  report.all_noisy = make_run("all_noisy", {{report.noisy, total}}, 1);
  report.all_clean = make_run("all_clean", {{report.clean, total}}, 2);
  report.split = make_run("split",
                          {{report.noisy, total - options.tail_iterations},
                           {report.clean, options.tail_iterations}},
                          3);

  std::vector<int> tails;
  for (int t = 0; t <= total; t += options.sweep_step) tails.push_back(t);
  if (tails.back() != total) tails.push_back(total);
  report.sweep = tail_sweep(report.job, report.noisy, report.clean, tails, config.convergence,
                            mix_seed(config.seed, 0x76716564ULL, 4));

  std::string vqe_rows = "run,iteration,backend_id,energy\n";
  append_trajectory_rows(vqe_rows, report.all_noisy.name, report.all_noisy.trajectory);
  append_trajectory_rows(vqe_rows, report.all_clean.name, report.all_clean.trajectory);
  append_trajectory_rows(vqe_rows, report.split.name, report.split.trajectory);
  write_file(config.output_dir / "vqe.csv", vqe_rows);

  std::string convergence_rows =
      "run,final_energy,final_score,iterations_to_target,tail_iterations_to_target\n";
  for (const VqeDemoRun* run : {&report.all_noisy, &report.all_clean, &report.split}) {
    convergence_rows +=
        run->name + ',' + detail::format_number(run->final_energy) + ',' +
        detail::format_number(run->score) + ',' +
        (run->iterations_to_target ? detail::format_number(*run->iterations_to_target)
                                   : std::string("none")) +
        ',' +
        (run->tail_iterations_to_target ? detail::format_number(*run->tail_iterations_to_target)
                                        : std::string("none")) +
        '\n';
  }
  write_file(config.output_dir / "convergence.csv", convergence_rows);
  write_file(config.output_dir / "tail_sweep.csv", tail_sweep_csv(report.sweep));
  return report;
}

// ---------------------------------------------------------------------------
// timing

struct TimingOptions {
  std::vector<int> job_counts{10, 20, 30, 40, 50, 60, 70, 80};
  std::vector<int> backend_counts{3, 10};
  int repetitions = 3;  // wall time per cell is the median over these
};

struct TimingRow {
  int job_count = 0;
  int backend_count = 0;
  double seconds = 0.0;
};

struct TimingReport {
  std::vector<TimingRow> rows;
};

namespace detail {

/// Synthesizes a pool of `count` backends spanning the noise range of the
/// anchors: profile k interpolates linearly from the noisiest anchor (k = 0)
/// to the cleanest (k = count - 1).
inline std::vector<BackendProfile> synthesize_backends(const std::vector<BackendProfile>& anchors,
                                                       int count) {
  if (anchors.empty()) fail(Errc::empty_backends, "need anchor backends to synthesize from");
  if (count < 1) fail(Errc::invalid_argument, "backend count must be >= 1");
  const BackendProfile* noisy = &anchors.front();
  const BackendProfile* clean = &anchors.front();
  for (const auto& b : anchors) {
    if (noise_index(b) > noise_index(*noisy)) noisy = &b;
    if (noise_index(b) < noise_index(*clean)) clean = &b;
  }
  auto lerp = [](double a, double b, double t) { return a + (b - a) * t; };
  std::vector<BackendProfile> pool;
  pool.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    const double t = count == 1 ? 0.0 : static_cast<double>(k) / (count - 1);
    BackendProfile b;
    b.id = k;
    b.name = "T" + std::to_string(k + 1);
    b.one_q_error = lerp(noisy->one_q_error, clean->one_q_error, t);
    b.two_q_error = lerp(noisy->two_q_error, clean->two_q_error, t);
    b.readout_error = lerp(noisy->readout_error, clean->readout_error, t);
    b.iter_time = lerp(noisy->iter_time, clean->iter_time, t);
    pool.push_back(std::move(b));
  }
  return pool;
}

}  // namespace detail

/// Wall-clock scaling of the optimizer. For every (backend count, job count)
/// cell: synthesize a pool of that size from the configured backends file,
/// score it, and time a full GA run, taking the median over repetitions.
/// Jobs replicate the first entry of the jobs file (or a stock job when no
/// file is configured). Writes timing.csv.
inline TimingReport run_timing(const RunConfig& config, const TimingOptions& options = {}) {
  validate_run_config(config);
  if (options.repetitions < 1) fail(Errc::invalid_argument, "need at least one repetition");
  if (options.job_counts.empty() || options.backend_counts.empty())
    fail(Errc::invalid_argument, "timing needs at least one job count and backend count");

  const auto anchors = load_backends_file(config.backends_file);
  JobSpec base_job;
  if (!config.jobs_file.empty()) base_job = load_jobs_file(config.jobs_file).front();

  const double ratio = config.split_ratios.front();
  TimingReport report;
  std::string rows = "job_count,backend_count,seconds\n";
  for (int backend_count : options.backend_counts) {
    auto pool = detail::synthesize_backends(anchors, backend_count);
    pool = score_backends(pool, default_benchmark_suite(config.benchmark_circuits), config.seed,
                          config.benchmark);
    for (int job_count : options.job_counts) {
      const auto jobs = detail::resize_job_list({base_job}, job_count);
      std::vector<double> samples;
      samples.reserve(static_cast<std::size_t>(options.repetitions));
      // One unrecorded repetition first, so cells measured early in the sweep
      // don't carry the cold-cache / clock-ramp penalty the later ones skip.
      for (int rep = -1; rep < options.repetitions; ++rep) {
        GaConfig ga = config.ga;
        ga.seed = mix_seed(config.seed, static_cast<std::uint64_t>(backend_count) * 1000 +
                                            static_cast<std::uint64_t>(job_count),
                           static_cast<std::uint64_t>(std::max(rep, 0)));
        const auto t0 = std::chrono::steady_clock::now();
        (void)evolve(ga, jobs, pool, ratio);
        if (rep >= 0) samples.push_back(detail::seconds_since(t0));
      }
      std::sort(samples.begin(), samples.end());
      const double median = samples[samples.size() / 2];
      report.rows.push_back({job_count, backend_count, median});
      rows += detail::format_number(job_count) + ',' + detail::format_number(backend_count) + ',' +
              detail::format_number(median) + '\n';
    }
  }
  write_file(config.output_dir / "timing.csv", rows);
  return report;
}

}  // namespace splitsched
