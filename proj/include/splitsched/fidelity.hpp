#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "splitsched/errors.hpp"
#include "splitsched/rng.hpp"
#include "splitsched/types.hpp"

namespace splitsched {

/// Relative weights that collapse a backend's three error rates into one
/// scalar noise index. Two-qubit gates dominate circuit infidelity, readout
/// comes second, single-qubit gates barely matter.
struct NoiseWeights {
  double one_q = 1.0;
  double two_q = 10.0;
  double readout = 5.0;
};

inline double noise_index(const BackendProfile& backend, const NoiseWeights& w = {}) {
  return w.one_q * backend.one_q_error + w.two_q * backend.two_q_error +
         w.readout * backend.readout_error;
}

/// Outcome of running one benchmark circuit on one backend.
struct BenchmarkResult {
  int circuit_id = 0;
  int backend_id = 0;
  double reference_value = 0.0;
  double measured_value = 0.0;
  double deviation = 0.0;  // |measured_value - reference_value|
};

/// Calibration for the surrogate benchmark executor: how strongly the noise
/// index degrades a measurement, and how much seeded run-to-run perturbation
/// to layer on top.
struct BenchmarkModel {
  double kappa = 3.0;          // global degradation scale
  double eta_amplitude = 0.1;  // relative perturbation amplitude; 0 disables
  NoiseWeights noise_weights{};
};

/// One benchmark circuit: the exact value an ideal device would report, and a
/// sensitivity weight standing in for circuit depth (deeper circuits feel the
/// backend's noise more).
struct BenchmarkCircuit {
  double reference = -1.0;
  double sensitivity = 0.3;
};

/// A small fixed suite of synthetic benchmark circuits with evenly spread
/// sensitivities, calibrated so that realistic superconducting and trapped-ion
/// noise profiles land in the 0.6..1.0 score band. Suites larger than the base
/// five cycle the reference values and keep spreading sensitivities evenly.
inline std::vector<BenchmarkCircuit> default_benchmark_suite(int count = 5) {
  if (count < 1) fail(Errc::empty_benchmark_set, "benchmark suite needs at least one circuit");
  static constexpr double kReferences[] = {-1.86, -1.25, -2.40, -0.75, -1.52};
  constexpr double lo = 0.15, hi = 0.45;
  std::vector<BenchmarkCircuit> suite;
  suite.reserve(count);
  for (int i = 0; i < count; ++i) {
    double t = count == 1 ? 0.5 : static_cast<double>(i) / (count - 1);
    suite.push_back({kReferences[i % 5], lo + t * (hi - lo)});
  }
  return suite;
}

/// Accuracy of one measurement against its reference: 1 when exact, falling
/// toward 0 as the absolute deviation grows past the reference's magnitude.
inline double job_score(double reference, double measured) {
  if (reference == 0.0) fail(Errc::zero_reference, "job score needs a nonzero reference value");
  return std::abs(reference) / (std::abs(reference) + std::abs(measured - reference));
}

/// Mean job score over one backend's benchmark results.
inline double backend_score(const std::vector<BenchmarkResult>& results) {
  if (results.empty()) fail(Errc::empty_benchmark_set, "cannot score a backend with no benchmark results");
  double sum = 0.0;
  for (const auto& r : results) {
    if (r.backend_id != results.front().backend_id)
      fail(Errc::invalid_argument, "benchmark results span more than one backend");
    sum += job_score(r.reference_value, r.measured_value);
  }
  return sum / static_cast<double>(results.size());
}

/// Surrogate for executing one benchmark circuit: the measured value is pulled
/// away from the reference (toward zero magnitude) in proportion to the
/// backend's noise index and the circuit's sensitivity, with a seeded
/// uniform perturbation of relative amplitude eta on the pull.
inline double simulate_benchmark_execution(const BackendProfile& backend,
                                           const BenchmarkCircuit& circuit, std::uint64_t seed,
                                           const BenchmarkModel& model = {}) {
  if (circuit.reference == 0.0)
    fail(Errc::zero_reference, "benchmark circuit needs a nonzero reference value");
  if (!(circuit.sensitivity > 0.0))
    fail(Errc::invalid_argument, "benchmark circuit sensitivity must be positive");
  Rng rng(seed);
  double eta = rng.uniform(-model.eta_amplitude, model.eta_amplitude);
  double pull = model.kappa * noise_index(backend, model.noise_weights) * circuit.sensitivity *
                (1.0 + eta);
  return circuit.reference * (1.0 - pull);
}

/// Runs the whole suite on one backend. Each circuit draws from its own
/// derived seed, so adding circuits never disturbs earlier measurements.
inline std::vector<BenchmarkResult> run_benchmarks(const BackendProfile& backend,
                                                   const std::vector<BenchmarkCircuit>& suite,
                                                   std::uint64_t seed,
                                                   const BenchmarkModel& model = {}) {
  if (suite.empty()) fail(Errc::empty_benchmark_set, "benchmark suite is empty");
  std::vector<BenchmarkResult> results;
  results.reserve(suite.size());
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const auto& c = suite[i];
    double measured = simulate_benchmark_execution(
        backend, c, mix_seed(seed, static_cast<std::uint64_t>(backend.id), i), model);
    results.push_back({static_cast<int>(i), backend.id, c.reference, measured,
                       std::abs(measured - c.reference)});
  }
  return results;
}

/// Benchmarks every backend and fills in its score. Input order is preserved.
inline std::vector<BackendProfile> score_backends(std::vector<BackendProfile> backends,
                                                  const std::vector<BenchmarkCircuit>& suite,
                                                  std::uint64_t seed,
                                                  const BenchmarkModel& model = {}) {
  if (backends.empty()) fail(Errc::empty_backends, "no backends to score");
  for (auto& b : backends) b.score = backend_score(run_benchmarks(b, suite, seed, model));
  return backends;
}

/// Backends sorted by score, best first; equal scores fall back to ascending
/// id so the order is total.
inline std::vector<BackendProfile> rank_backends(const std::vector<BackendProfile>& backends) {
  if (backends.empty()) fail(Errc::empty_backends, "no backends to rank");
  std::vector<BackendProfile> ranked = backends;
  for (const auto& b : ranked) score_of(b);  // reject unscored pools up front
  std::sort(ranked.begin(), ranked.end(), [](const BackendProfile& a, const BackendProfile& b) {
    if (*a.score != *b.score) return *a.score > *b.score;
    return a.id < b.id;
  });
  return ranked;
}

}  // namespace splitsched
