// Command-line front end for the splitsched library. Subcommands:
//   score-backends  benchmark and rank a backend pool
//   schedule        optimize job-to-backend mappings and report metrics
//   dse             exhaustive design-space sweep vs. the optimizer
//   vqe-demo        convergence comparison of noisy / clean / split execution
//   timing          optimizer wall-clock scaling over pool and batch sizes
//
// All results land as CSV files in --output-dir; stdout carries a short
// human-readable summary. Every run is fully determined by its inputs and
// --seed (environment variable QUSPLIT_SEED when the flag is absent).

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "splitsched/splitsched.hpp"

namespace {

int exit_code_for(const splitsched::Error& error) {
  using splitsched::Errc;
  switch (error.code()) {
    case Errc::parse_error:
      return 2;
    case Errc::invalid_field:
    case Errc::empty_backends:
    case Errc::empty_jobs:
      return 3;
    case Errc::space_too_large:
      return 4;
    default:
      return 1;
  }
}

constexpr int kToleranceExit = 5;  // dse: optimizer missed the oracle tolerance

void apply_weights_text(const std::string& text, splitsched::WeightPolicy& policy) {
  if (text == "dynamic") {
    policy.dynamic = true;
    return;
  }
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) throw std::invalid_argument("missing comma");
    policy.dynamic = false;
    policy.w1 = std::stod(text.substr(0, comma));
    policy.w2 = std::stod(text.substr(comma + 1));
  } catch (const std::exception&) {
    splitsched::fail(splitsched::Errc::parse_error,
                     "--weights expects 'dynamic' or a 'w1,w2' pair, got '" + text + "'");
  }
}

void print_backend_table(const std::vector<splitsched::BackendProfile>& ranked) {
  std::cout << "rank  id  name        noise_index  score\n";
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const auto& b = ranked[i];
    std::printf("%4zu  %2d  %-10s  %11.6f  %.6f\n", i + 1, b.id, b.name.c_str(),
                splitsched::noise_index(b), splitsched::score_of(b));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Split-aware scheduling of iterative variational jobs on noisy backends"};
  app.require_subcommand(1);

  std::string backends_path;
  std::string jobs_path;
  std::string output_dir = "out";
  std::string config_path;
  std::uint64_t seed = 42;

  auto* seed_opt = app.add_option("--seed", seed, "Base seed for every random stream")
                       ->envname("QUSPLIT_SEED");
  auto* out_opt = app.add_option("--output-dir", output_dir, "Directory for CSV results");
  app.add_option("--config", config_path, "JSON run-config file (flags override it)");

  // score-backends ----------------------------------------------------------
  auto* score_cmd = app.add_subcommand("score-backends", "Benchmark and rank a backend pool");
  score_cmd->fallthrough();  // let --seed / --output-dir / --config follow the subcommand
  int circuits = 0;
  score_cmd->add_option("--backends", backends_path, "Backend pool JSON")->required();
  score_cmd->add_option("--circuits", circuits, "Benchmark suite size (default 5)");

  // schedule ----------------------------------------------------------------
  auto* schedule_cmd =
      app.add_subcommand("schedule", "Optimize job-to-backend mappings and report metrics");
  schedule_cmd->fallthrough();
  std::vector<double> ratios;
  std::vector<int> job_counts;
  std::string forced_strategy;
  double forced_ratio = 0.5;
  std::string weights_text;
  double weight_pivot = 0.0;
  int generations = -1, population = -1, elite = -1, workers = -1;
  double mutation_rate = -1.0;
  schedule_cmd->add_option("--backends", backends_path, "Backend pool JSON")->required();
  schedule_cmd->add_option("--jobs", jobs_path, "Job list JSON")->required();
  schedule_cmd->add_option("--ratios", ratios, "Split ratios to optimize at")->delimiter(',');
  schedule_cmd->add_option("--job-counts", job_counts, "Batch sizes (cycle the jobs file)")
      ->delimiter(',');
  schedule_cmd->add_option("--strategy", forced_strategy,
                           "Evaluate this strategy (e.g. 'B2+B3,B1,B3') instead of optimizing");
  schedule_cmd->add_option("--ratio", forced_ratio, "Split ratio for --strategy (default 0.5)");
  schedule_cmd->add_option("--weights", weights_text, "'w1,w2' pair or 'dynamic'");
  schedule_cmd->add_option("--pivot", weight_pivot, "Job count with equal dynamic weights");
  schedule_cmd->add_option("--generations", generations, "GA generations (default 100)");
  schedule_cmd->add_option("--population", population, "GA population size (default 10)");
  schedule_cmd->add_option("--mutation-rate", mutation_rate, "GA per-gene mutation rate (default 0.2)");
  schedule_cmd->add_option("--elite", elite, "GA elite count (default 2)");
  schedule_cmd->add_option("--workers", workers, "Threads for fitness evaluation");

  // dse -----------------------------------------------------------------
  auto* dse_cmd = app.add_subcommand("dse", "Exhaustive design-space sweep vs. the optimizer");
  dse_cmd->fallthrough();
  double dse_ratio = 0.5;
  int ga_runs = 5;
  std::size_t cap = 1000000;
  double fitness_tol = 0.98, point_tol = 0.01;
  std::string dse_weights_text;
  dse_cmd->add_option("--backends", backends_path, "Backend pool JSON")->required();
  dse_cmd->add_option("--jobs", jobs_path, "Job list JSON")->required();
  dse_cmd->add_option("--ratio", dse_ratio, "Split ratio for the sweep (default 0.5)");
  dse_cmd->add_option("--ga-runs", ga_runs, "Optimizer repetitions (default 5)");
  dse_cmd->add_option("--cap", cap, "Refuse strategy spaces larger than this");
  dse_cmd->add_option("--fitness-tol", fitness_tol, "Required fraction of the oracle fitness");
  dse_cmd->add_option("--point-tol", point_tol, "Per-axis slack for near-frontier acceptance");
  dse_cmd->add_option("--weights", dse_weights_text, "'w1,w2' pair or 'dynamic'");

  // vqe-demo ------------------------------------------------------------
  auto* vqe_cmd =
      app.add_subcommand("vqe-demo", "Convergence of noisy / clean / split execution");
  vqe_cmd->fallthrough();
  int noisy_id = 0, clean_id = 0;
  int tail = 30, sweep_step = 10;
  bool jitter = false;
  double tau = 0.0, floor_kappa = 0.0;
  vqe_cmd->add_option("--backends", backends_path, "Backend pool JSON")->required();
  vqe_cmd->add_option("--jobs", jobs_path, "Job list JSON (first job is the demo job)")->required();
  auto* noisy_opt =
      vqe_cmd->add_option("--noisy", noisy_id, "Backend id for the noisy stage (default: worst)");
  auto* clean_opt =
      vqe_cmd->add_option("--clean", clean_id, "Backend id for the clean stage (default: best)");
  vqe_cmd->add_option("--tail", tail, "Clean iterations at the end of the split run (default 30)");
  vqe_cmd->add_option("--sweep-step", sweep_step, "Tail-length step for the sweep (default 10)");
  vqe_cmd->add_flag("--jitter", jitter, "Add seeded per-iteration measurement noise");
  vqe_cmd->add_option("--tau", tau, "Convergence time constant (default 10)");
  vqe_cmd->add_option("--floor-kappa", floor_kappa, "Noise-to-floor scale (default 1)");

  // timing --------------------------------------------------------------
  auto* timing_cmd =
      app.add_subcommand("timing", "Optimizer wall-clock scaling over pool and batch sizes");
  timing_cmd->fallthrough();
  std::vector<int> timing_jobs, timing_backends;
  int reps = 3;
  timing_cmd->add_option("--backends", backends_path, "Anchor backend pool JSON")->required();
  timing_cmd->add_option("--jobs", jobs_path, "Job list JSON (template job; optional)");
  timing_cmd->add_option("--job-counts", timing_jobs, "Batch sizes (default 10..80)")
      ->delimiter(',');
  timing_cmd->add_option("--backend-counts", timing_backends, "Pool sizes (default 3,10)")
      ->delimiter(',');
  timing_cmd->add_option("--reps", reps, "Samples per cell, median kept (default 3)");

  CLI11_PARSE(app, argc, argv);

  try {
    splitsched::RunConfig config;
    if (!config_path.empty()) config = splitsched::load_run_config(config_path, config);
    if (seed_opt->count() > 0) config.seed = seed;
    else if (config_path.empty()) config.seed = seed;  // built-in default
    if (out_opt->count() > 0 || config_path.empty()) config.output_dir = output_dir;
    config.backends_file = backends_path;
    config.jobs_file = jobs_path;

    if (app.got_subcommand(score_cmd)) {
      if (circuits > 0) config.benchmark_circuits = circuits;
      const auto report = splitsched::score_backends_report(config);
      print_backend_table(report.ranked);
      std::cout << "wrote " << (config.output_dir / "backend_scores.csv").string() << " and "
                << (config.output_dir / "benchmarks.csv").string() << "\n";
      return 0;
    }

    if (app.got_subcommand(schedule_cmd)) {
      if (!ratios.empty()) config.split_ratios = ratios;
      if (generations >= 0) config.ga.generations = generations;
      if (population > 0) config.ga.population_size = population;
      if (mutation_rate >= 0.0) config.ga.mutation_rate = mutation_rate;
      if (elite >= 0) config.ga.elite_size = elite;
      if (workers > 0) config.ga.workers = workers;
      if (!weights_text.empty()) apply_weights_text(weights_text, config.ga.weights);
      if (weight_pivot > 0.0) config.ga.weights.pivot_jobs = weight_pivot;

      splitsched::ScheduleOptions options;
      options.job_counts = job_counts;
      if (!forced_strategy.empty()) options.forced_strategy = forced_strategy;
      options.forced_ratio = forced_ratio;

      const auto report = splitsched::run_schedule(config, options);
      std::cout << "jobs  method    ratio   TH        TH_norm   FI        fitness   makespan\n";
      for (const auto& run : report.runs)
        std::printf("%4d  %-8s  %.2f  %.6f  %.6f  %.6f  %.6f  %10.1f\n", run.job_count,
                    run.method.c_str(), run.ratio, run.metrics.throughput, run.metrics.th_norm,
                    run.metrics.fidelity, run.metrics.fitness, run.metrics.makespan);
      std::cout << "wrote " << (config.output_dir / "schedule.csv").string() << "\n";
      return 0;
    }

    if (app.got_subcommand(dse_cmd)) {
      if (!dse_weights_text.empty()) apply_weights_text(dse_weights_text, config.ga.weights);
      splitsched::DseOptions options;
      options.ratio = dse_ratio;
      options.ga_runs = ga_runs;
      options.cap = cap;
      options.fitness_tolerance = fitness_tol;
      options.point_tolerance = point_tol;
      const auto report = splitsched::run_dse(config, options);
      std::cout << "strategies evaluated: " << report.strategy_count << "\n"
                << "frontier size:        " << report.frontier_size << "\n";
      std::printf("oracle best fitness:  %.6f (TH %.6f, FI %.6f)\n",
                  report.oracle_best.metrics.fitness, report.oracle_best.metrics.throughput,
                  report.oracle_best.metrics.fidelity);
      for (std::size_t i = 0; i < report.ga_runs.size(); ++i) {
        const auto& run = report.ga_runs[i];
        std::printf("ga run %zu: fitness %.6f (%s, %s)\n", i + 1, run.metrics.fitness,
                    run.fitness_ok ? "within tolerance" : "below tolerance",
                    run.near_frontier ? "near frontier" : "off frontier");
      }
      std::cout << "wrote " << (config.output_dir / "dse.csv").string() << "\n";
      if (!report.ga_ok) {
        std::cerr << "optimizer missed the oracle tolerance\n";
        return kToleranceExit;
      }
      return 0;
    }

    if (app.got_subcommand(vqe_cmd)) {
      if (jitter) config.convergence.jitter = true;
      if (tau > 0.0) config.convergence.tau = tau;
      if (floor_kappa > 0.0) config.convergence.floor_kappa = floor_kappa;
      splitsched::VqeDemoOptions options;
      if (noisy_opt->count() > 0) options.noisy_id = noisy_id;
      if (clean_opt->count() > 0) options.clean_id = clean_id;
      options.tail_iterations = tail;
      options.sweep_step = sweep_step;
      const auto report = splitsched::run_vqe_demo(config, options);
      std::printf("job: %d iterations, reference %.4f\n", report.job.total_iterations,
                  report.job.reference_value);
      std::printf("noisy backend %s, clean backend %s, target %.4f +- %.4f\n",
                  report.noisy.name.c_str(), report.clean.name.c_str(), report.target,
                  report.tolerance);
      for (const auto* run : {&report.all_noisy, &report.all_clean, &report.split}) {
        std::printf("%-9s final energy %.6f  score %.6f  reaches target at ", run->name.c_str(),
                    run->final_energy, run->score);
        if (run->iterations_to_target)
          std::printf("iteration %d", *run->iterations_to_target);
        else
          std::printf("never");
        if (run->tail_iterations_to_target)
          std::printf(" (%d into its final segment)", *run->tail_iterations_to_target);
        std::printf("\n");
      }
      std::cout << "wrote " << (config.output_dir / "vqe.csv").string() << ", "
                << (config.output_dir / "convergence.csv").string() << ", "
                << (config.output_dir / "tail_sweep.csv").string() << "\n";
      return 0;
    }

    if (app.got_subcommand(timing_cmd)) {
      splitsched::TimingOptions options;
      if (!timing_jobs.empty()) options.job_counts = timing_jobs;
      if (!timing_backends.empty()) options.backend_counts = timing_backends;
      options.repetitions = reps;
      const auto report = splitsched::run_timing(config, options);
      std::cout << "jobs  backends  seconds\n";
      for (const auto& row : report.rows)
        std::printf("%4d  %8d  %.4f\n", row.job_count, row.backend_count, row.seconds);
      std::cout << "wrote " << (config.output_dir / "timing.csv").string() << "\n";
      return 0;
    }
  } catch (const splitsched::Error& error) {
    std::cerr << "error: " << error.what() << "\n";
    return exit_code_for(error);
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  }
  return 0;
}
