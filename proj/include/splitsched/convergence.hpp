#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "splitsched/errors.hpp"
#include "splitsched/fidelity.hpp"
#include "splitsched/rng.hpp"
#include "splitsched/types.hpp"

namespace splitsched {

/// Surrogate for the optimization dynamics of an iterative variational job.
/// Each iteration closes a fixed fraction of the gap between the running
/// energy and a backend-dependent floor: E <- floor + (E - floor) * exp(-1/tau).
/// Noisier backends have a floor further above the true reference, which is
/// exactly what makes a noisy-then-clean split attractive: cheap early descent,
/// then a tail that can actually reach a low floor.
struct ConvergenceModel {
  double e_start = 0.0;       // energy before the first iteration
  double tau = 10.0;          // iterations to shrink the gap by a factor e
  double floor_kappa = 1.0;   // noise index -> floor offset scale
  bool tau_noise_scaling = false;   // if set, noisy backends also converge slower
  bool jitter = false;              // seeded per-iteration measurement noise
  double jitter_amplitude = 0.02;   // relative to |reference| * noise index
  NoiseWeights noise_weights{};
};

/// A run of consecutive iterations on one backend.
struct Segment {
  BackendProfile backend;
  int iterations = 0;
};

/// Energy after every executed iteration, plus where the backend changed.
/// Adjacent segments on the same backend are merged in the recording.
struct Trajectory {
  std::vector<double> energies;         // energies[i] = energy after iteration i
  std::vector<int> segment_starts;      // first iteration index of each recorded segment
  std::vector<int> segment_backends;    // backend id per recorded segment
};

/// The best energy a backend can converge to for a given reference value:
/// the floor sits above the reference by |reference| * floor_kappa * noise index.
inline double energy_floor(const BackendProfile& backend, double reference,
                           const ConvergenceModel& model = {}) {
  if (reference == 0.0) fail(Errc::zero_reference, "energy floor needs a nonzero reference value");
  return reference + std::abs(reference) * model.floor_kappa * noise_index(backend, model.noise_weights);
}

/// Runs the job through the given segments in order, carrying the energy (and
/// the jitter stream) across backend changes. The combined iteration count
/// must not exceed the job's budget.
inline Trajectory run_segments(const JobSpec& job, const std::vector<Segment>& segments,
                               const ConvergenceModel& model = {}, std::uint64_t seed = 0) {
  if (segments.empty()) fail(Errc::empty_segments, "need at least one segment to run");
  long total = 0;
  for (const auto& s : segments) {
    if (s.iterations < 1) fail(Errc::invalid_argument, "segment iteration counts must be >= 1");
    total += s.iterations;
  }
  if (total > job.total_iterations)
    fail(Errc::budget_exceeded, "segments use " + std::to_string(total) + " iterations but job " +
                                    std::to_string(job.id) + " has only " +
                                    std::to_string(job.total_iterations));

  Rng rng(seed);
  Trajectory traj;
  traj.energies.reserve(static_cast<std::size_t>(total));
  double energy = model.e_start;
  for (const auto& s : segments) {
    const double ni = noise_index(s.backend, model.noise_weights);
    const double floor = energy_floor(s.backend, job.reference_value, model);
    const double tau = model.tau * (model.tau_noise_scaling ? 1.0 + ni : 1.0);
    const double decay = std::exp(-1.0 / tau);
    const double amp =
        model.jitter ? model.jitter_amplitude * std::abs(job.reference_value) * ni : 0.0;
    if (traj.segment_backends.empty() || traj.segment_backends.back() != s.backend.id) {
      traj.segment_starts.push_back(static_cast<int>(traj.energies.size()));
      traj.segment_backends.push_back(s.backend.id);
    }
    for (int i = 0; i < s.iterations; ++i) {
      energy = floor + (energy - floor) * decay;
      if (amp > 0.0) energy += rng.uniform(-amp, amp);
      traj.energies.push_back(energy);
    }
  }
  return traj;
}

/// Score of the trajectory's final energy against the job's reference.
inline double final_score(const Trajectory& traj, double reference) {
  if (traj.energies.empty()) fail(Errc::empty_trajectory, "trajectory has no iterations");
  return job_score(reference, traj.energies.back());
}

/// First iteration (1-based) whose energy is within tolerance of the target,
/// or nullopt if the trajectory never gets there.
inline std::optional<int> iterations_to_converge(const Trajectory& traj, double target,
                                                 double tolerance) {
  if (traj.energies.empty()) fail(Errc::empty_trajectory, "trajectory has no iterations");
  if (!(tolerance > 0.0)) fail(Errc::invalid_argument, "convergence tolerance must be positive");
  for (std::size_t i = 0; i < traj.energies.size(); ++i)
    if (std::abs(traj.energies[i] - target) <= tolerance) return static_cast<int>(i) + 1;
  return std::nullopt;
}

/// Final score as a function of how many of the job's iterations run on the
/// cleaner backend at the end (the rest run on the noisy one first). Tail
/// length 0 and total_iterations give the pure noisy and pure clean runs.
inline std::vector<std::pair<int, double>> tail_sweep(const JobSpec& job,
                                                      const BackendProfile& noisy,
                                                      const BackendProfile& clean,
                                                      const std::vector<int>& tail_lengths,
                                                      const ConvergenceModel& model = {},
                                                      std::uint64_t seed = 0) {
  std::vector<std::pair<int, double>> sweep;
  sweep.reserve(tail_lengths.size());
  for (int tail : tail_lengths) {
    if (tail < 0 || tail > job.total_iterations)
      fail(Errc::tail_out_of_range, "tail length " + std::to_string(tail) +
                                        " outside [0, " + std::to_string(job.total_iterations) + "]");
    std::vector<Segment> segments;
    if (tail < job.total_iterations) segments.push_back({noisy, job.total_iterations - tail});
    if (tail > 0) segments.push_back({clean, tail});
    Trajectory traj = run_segments(job, segments, model, mix_seed(seed, static_cast<std::uint64_t>(tail)));
    sweep.emplace_back(tail, final_score(traj, job.reference_value));
  }
  return sweep;
}

}  // namespace splitsched
