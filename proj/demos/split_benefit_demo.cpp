// Minimal library walkthrough: score a two-backend pool, compare pure-noisy,
// pure-clean, and split execution of one job through the convergence
// surrogate, then let the optimizer place a small batch.

#include <cstdio>

#include "splitsched/splitsched.hpp"

int main() {
  using namespace splitsched;

  std::vector<BackendProfile> pool{
      {0, "noisy-sc", 3.4e-4, 3.1e-2, 2.4e-2, 1.0, std::nullopt},
      {1, "clean-ion", 3.0e-4, 2.1e-3, 5.1e-3, 1.0, std::nullopt},
  };
  pool = score_backends(pool, default_benchmark_suite(), /*seed=*/7);
  for (const auto& b : pool)
    std::printf("%-10s noise index %.4f -> score %.4f\n", b.name.c_str(), noise_index(b),
                score_of(b));

  const JobSpec job{0, 150, -1.86};
  const ConvergenceModel model{};
  const double target = energy_floor(pool[1], job.reference_value, model);
  const double tolerance = 0.05 * 1.86;

  auto describe = [&](const char* name, const std::vector<Segment>& segments) {
    const Trajectory traj = run_segments(job, segments, model, /*seed=*/7);
    const auto reached = iterations_to_converge(traj, target, tolerance);
    std::printf("%-12s final energy %.4f score %.4f, target hit at %s", name,
                traj.energies.back(), final_score(traj, job.reference_value),
                reached ? std::to_string(*reached).c_str() : "never");
    // For a split run, the interesting number is how few of the clean tail's
    // iterations it needed compared to the cold clean run.
    const int tail_start = traj.segment_starts.back();
    if (reached && tail_start > 0 && *reached > tail_start)
      std::printf(" (%d into the clean tail)", *reached - tail_start);
    std::printf("\n");
  };
  describe("all noisy", {{pool[0], 150}});
  describe("all clean", {{pool[1], 150}});
  describe("split", {{pool[0], 120}, {pool[1], 30}});

  const std::vector<JobSpec> batch{{0, 150, -1.86}, {1, 150, -1.86}, {2, 150, -1.86}};
  GaConfig config;
  config.seed = 7;
  const EvolveResult result = evolve(config, batch, pool, /*split_ratio=*/0.5);
  std::printf("best batch strategy: %s (fitness %.4f)\n",
              format_strategy(result.best, pool).c_str(), result.best_metrics.fitness);
  return 0;
}
