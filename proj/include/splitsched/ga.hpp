#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

#include "splitsched/errors.hpp"
#include "splitsched/rng.hpp"
#include "splitsched/scheduler.hpp"
#include "splitsched/types.hpp"

namespace splitsched {

/// How the objective weights are chosen: a fixed pair, or scaled with the
/// workload so larger batches lean toward throughput and small ones toward
/// fidelity. The dynamic rule is w1 = n / (n + pivot), so a batch of exactly
/// `pivot_jobs` jobs weighs both objectives equally.
struct WeightPolicy {
  bool dynamic = false;
  double w1 = 0.5;
  double w2 = 0.5;
  double pivot_jobs = 20.0;
};

inline Weights dynamic_weights(std::size_t job_count, const WeightPolicy& policy = {}) {
  if (job_count < 1) fail(Errc::invalid_argument, "dynamic weights need at least one job");
  if (!(policy.pivot_jobs > 0.0)) fail(Errc::invalid_argument, "weight pivot must be positive");
  const double n = static_cast<double>(job_count);
  const double w1 = n / (n + policy.pivot_jobs);
  return {w1, 1.0 - w1};
}

inline Weights resolve_weights(std::size_t job_count, const WeightPolicy& policy) {
  if (policy.dynamic) return dynamic_weights(job_count, policy);
  Weights w{policy.w1, policy.w2};
  validate_weights(w);
  return w;
}

struct GaConfig {
  int population_size = 10;
  int generations = 100;
  double mutation_rate = 0.2;  // per-gene resample probability
  int elite_size = 2;          // individuals copied unchanged each generation
  std::uint64_t seed = 42;
  WeightPolicy weights{};
  int workers = 1;  // threads for fitness evaluation; never affects results
};

inline void validate_ga_config(const GaConfig& c) {
  if (c.population_size < 1) fail(Errc::invalid_argument, "population size must be >= 1");
  if (c.generations < 0) fail(Errc::invalid_argument, "generation count must be >= 0");
  if (!(c.mutation_rate >= 0.0 && c.mutation_rate <= 1.0))
    fail(Errc::invalid_argument, "mutation rate must lie in [0, 1]");
  if (c.elite_size < 0 || c.elite_size >= c.population_size)
    fail(Errc::invalid_argument, "elite size must lie in [0, population size)");
  if (c.workers < 1) fail(Errc::invalid_argument, "worker count must be >= 1");
}

/// One candidate: an option index per job, plus cached fitness once evaluated.
struct Individual {
  std::vector<int> genes;
  std::optional<double> fitness;
};

struct GenerationStats {
  int generation = 0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
};

struct EvolveResult {
  ScheduleStrategy best;
  SolutionMetrics best_metrics;
  std::vector<int> best_genes;
  std::vector<GenerationStats> history;  // entry 0 is the initial population
  Weights weights;                       // the weights the run optimized under
  int uniform_selection_fallbacks = 0;   // selections that hit the zero-fitness fallback
};

/// Random population: every gene drawn uniformly from the option list.
inline std::vector<Individual> initialize_population(const GaConfig& config, std::size_t job_count,
                                                     std::size_t option_count, Rng& rng) {
  validate_ga_config(config);
  if (option_count == 0) fail(Errc::empty_options, "cannot initialize over zero mapping options");
  if (job_count == 0) fail(Errc::empty_jobs, "cannot initialize genomes for zero jobs");
  std::vector<Individual> population(static_cast<std::size_t>(config.population_size));
  for (auto& ind : population) {
    ind.genes.resize(job_count);
    for (auto& g : ind.genes) g = rng.uniform_int(static_cast<int>(option_count));
  }
  return population;
}

/// Fitness-proportional selection with replacement: each draw lands on
/// individual k with probability fitness_k / total. A population whose
/// fitness sums to zero falls back to uniform draws (reported through
/// fell_back so callers can count it). Fitness must be evaluated and
/// nonnegative.
inline std::vector<std::size_t> roulette_select(const std::vector<Individual>& population,
                                                std::size_t count, Rng& rng,
                                                bool* fell_back = nullptr) {
  if (population.empty()) fail(Errc::invalid_argument, "cannot select from an empty population");
  double total = 0.0;
  for (const auto& ind : population) {
    if (!ind.fitness) fail(Errc::invalid_argument, "selection requires evaluated fitness");
    if (*ind.fitness < 0.0) fail(Errc::invalid_argument, "selection requires nonnegative fitness");
    total += *ind.fitness;
  }
  std::vector<std::size_t> picks;
  picks.reserve(count);
  if (total <= 0.0) {
    if (fell_back) *fell_back = true;
    for (std::size_t i = 0; i < count; ++i)
      picks.push_back(static_cast<std::size_t>(rng.uniform_int(static_cast<int>(population.size()))));
    return picks;
  }
  if (fell_back) *fell_back = false;
  for (std::size_t i = 0; i < count; ++i) {
    const double spin = rng.uniform01() * total;
    double acc = 0.0;
    std::size_t chosen = population.size() - 1;  // float-sum slack lands on the last slot
    for (std::size_t k = 0; k < population.size(); ++k) {
      acc += *population[k].fitness;
      if (spin < acc) {
        chosen = k;
        break;
      }
    }
    picks.push_back(chosen);
  }
  return picks;
}

/// Single-point crossover at a fixed cut: children swap the gene suffix from
/// the cut onward. The cut must lie strictly inside the genome.
inline std::pair<Individual, Individual> crossover_at(const Individual& a, const Individual& b,
                                                      std::size_t cut) {
  if (a.genes.size() != b.genes.size())
    fail(Errc::length_mismatch, "crossover parents must have equal genome lengths");
  if (cut < 1 || cut >= a.genes.size())
    fail(Errc::invalid_argument, "crossover cut must lie strictly inside the genome");
  Individual first, second;
  first.genes = a.genes;
  second.genes = b.genes;
  for (std::size_t i = cut; i < a.genes.size(); ++i) std::swap(first.genes[i], second.genes[i]);
  return {std::move(first), std::move(second)};
}

/// Crossover at a uniformly random interior cut. One-gene genomes have no
/// interior cut, so the parents pass through unchanged (cached fitness and
/// all).
inline std::pair<Individual, Individual> crossover(const Individual& a, const Individual& b,
                                                   Rng& rng) {
  if (a.genes.size() != b.genes.size())
    fail(Errc::length_mismatch, "crossover parents must have equal genome lengths");
  if (a.genes.empty()) fail(Errc::invalid_argument, "cannot cross over empty genomes");
  if (a.genes.size() < 2) return {a, b};
  const std::size_t cut = 1 + static_cast<std::size_t>(rng.uniform_int(static_cast<int>(a.genes.size()) - 1));
  return crossover_at(a, b, cut);
}

/// Independently resamples each gene with probability mutation_rate. The
/// replacement is drawn uniformly over all options, so a resampled gene can
/// land on its old value. Cached fitness survives only if no gene was touched.
inline Individual mutate(const Individual& individual, double mutation_rate,
                         std::size_t option_count, Rng& rng) {
  if (option_count == 0) fail(Errc::empty_options, "cannot mutate over zero mapping options");
  if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0))
    fail(Errc::invalid_argument, "mutation rate must lie in [0, 1]");
  Individual out;
  out.genes = individual.genes;
  bool touched = false;
  for (auto& g : out.genes) {
    if (rng.bernoulli(mutation_rate)) {
      g = rng.uniform_int(static_cast<int>(option_count));
      touched = true;
    }
  }
  if (!touched) out.fitness = individual.fitness;
  return out;
}

namespace detail {

/// Evaluates every unevaluated individual, going through a run-wide cache so
/// a gene vector is never simulated twice. Misses are farmed out to worker
/// threads when configured; results are written back by index, so the
/// outcome is identical to the sequential path.
template <typename FitnessFn>
void ensure_evaluated(std::vector<Individual>& population,
                      std::map<std::vector<int>, double>& cache, const FitnessFn& fitness_of,
                      int workers) {
  std::vector<std::size_t> misses;
  for (std::size_t i = 0; i < population.size(); ++i) {
    if (population[i].fitness) continue;
    auto it = cache.find(population[i].genes);
    if (it != cache.end()) {
      population[i].fitness = it->second;
    } else {
      misses.push_back(i);
    }
  }
  // The same genome can miss twice in one batch; evaluating it twice is
  // wasteful but harmless, and keeps the write-back order-independent.
  if (workers <= 1 || misses.size() < 2) {
    for (std::size_t i : misses) population[i].fitness = fitness_of(population[i].genes);
  } else {
    const std::size_t thread_count = std::min<std::size_t>(static_cast<std::size_t>(workers), misses.size());
    std::vector<double> results(misses.size());
    std::vector<std::thread> pool;
    pool.reserve(thread_count);
    for (std::size_t w = 0; w < thread_count; ++w) {
      pool.emplace_back([&, w]() {
        for (std::size_t k = w; k < misses.size(); k += thread_count)
          results[k] = fitness_of(population[misses[k]].genes);
      });
    }
    for (auto& t : pool) t.join();
    for (std::size_t k = 0; k < misses.size(); ++k) population[misses[k]].fitness = results[k];
  }
  for (std::size_t i : misses) cache[population[i].genes] = *population[i].fitness;
}

inline std::vector<std::size_t> by_fitness_desc(const std::vector<Individual>& population) {
  std::vector<std::size_t> order(population.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return *population[a].fitness > *population[b].fitness;
  });
  return order;
}

}  // namespace detail

/// Evolves a population of strategies for a fixed job list, backend pool, and
/// split ratio. Each generation carries the top elite_size individuals over
/// unchanged and refills the rest with mutated crossover children of
/// roulette-selected parents; elitism makes the best-so-far fitness
/// non-decreasing. Fully deterministic for a given config.
inline EvolveResult evolve(const GaConfig& config, const std::vector<JobSpec>& jobs,
                           const std::vector<BackendProfile>& backends, double split_ratio) {
  validate_ga_config(config);
  if (jobs.empty()) fail(Errc::empty_jobs, "cannot optimize an empty job list");
  const auto options = enumerate_mapping_options(backends);
  const Weights weights = resolve_weights(jobs.size(), config.weights);

  std::map<std::vector<int>, double> cache;
  auto fitness_of = [&](const std::vector<int>& genes) {
    return evaluate(decode_strategy(genes, options, split_ratio), jobs, backends, weights).fitness;
  };

  Rng rng(config.seed);
  auto population = initialize_population(config, jobs.size(), options.size(), rng);

  EvolveResult result;
  result.weights = weights;
  auto record = [&](int generation) {
    double best = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (const auto& ind : population) {
      best = std::max(best, *ind.fitness);
      sum += *ind.fitness;
    }
    result.history.push_back({generation, best, sum / static_cast<double>(population.size())});
  };

  detail::ensure_evaluated(population, cache, fitness_of, config.workers);
  record(0);

  for (int generation = 1; generation <= config.generations; ++generation) {
    const auto order = detail::by_fitness_desc(population);
    std::vector<Individual> next;
    next.reserve(static_cast<std::size_t>(config.population_size));
    for (int e = 0; e < config.elite_size; ++e)
      next.push_back(population[order[static_cast<std::size_t>(e)]]);

    while (next.size() < static_cast<std::size_t>(config.population_size)) {
      bool fell_back = false;
      const auto parents = roulette_select(population, 2, rng, &fell_back);
      if (fell_back) ++result.uniform_selection_fallbacks;
      auto [first, second] = crossover(population[parents[0]], population[parents[1]], rng);
      next.push_back(mutate(first, config.mutation_rate, options.size(), rng));
      if (next.size() < static_cast<std::size_t>(config.population_size))
        next.push_back(mutate(second, config.mutation_rate, options.size(), rng));
    }

    population = std::move(next);
    detail::ensure_evaluated(population, cache, fitness_of, config.workers);
    record(generation);
  }

  const std::size_t best_index = detail::by_fitness_desc(population).front();
  result.best_genes = population[best_index].genes;
  result.best = decode_strategy(result.best_genes, options, split_ratio);
  result.best_metrics = evaluate(result.best, jobs, backends, weights);
  return result;
}

}  // namespace splitsched
