#include "splitsched/scheduler.hpp"

#include <algorithm>
#include <map>

#include <gtest/gtest.h>

#include "splitsched/rng.hpp"
#include "test_util.hpp"

using namespace splitsched;
using testutil::error_code;

namespace {

std::vector<BackendProfile> synthetic_pool(int count) {
  std::vector<BackendProfile> pool;
  for (int i = 0; i < count; ++i)
    pool.push_back({i, "S" + std::to_string(i + 1), 0.0, 0.0, 0.0, 1.0, 0.5 + 0.04 * i});
  return pool;
}

}  // namespace

TEST(EnumerateOptions, CountsSinglesPlusPairs) {
  for (int count = 1; count <= 10; ++count) {
    const auto options = enumerate_mapping_options(synthetic_pool(count));
    EXPECT_EQ(options.size(), static_cast<std::size_t>(count + count * (count - 1) / 2));
  }
}

TEST(EnumerateOptions, ListsSinglesThenCanonicalPairs) {
  // Scores ascend with id, so every pair already has the noisier backend first.
  const auto options = enumerate_mapping_options(testutil::scored_pool());
  ASSERT_EQ(options.size(), 6u);
  EXPECT_EQ(options[0], MappingOption::single(0));
  EXPECT_EQ(options[1], MappingOption::single(1));
  EXPECT_EQ(options[2], MappingOption::single(2));
  EXPECT_EQ(options[3], MappingOption::split(0, 1));
  EXPECT_EQ(options[4], MappingOption::split(0, 2));
  EXPECT_EQ(options[5], MappingOption::split(1, 2));
}

TEST(EnumerateOptions, CanonicalizesPairsByScore) {
  // Scores descend with id: every pair flips so the low-score side is stage 1.
  std::vector<BackendProfile> pool{
      {0, "A", 0.0, 0.0, 0.0, 1.0, 0.9},
      {1, "B", 0.0, 0.0, 0.0, 1.0, 0.8},
      {2, "C", 0.0, 0.0, 0.0, 1.0, 0.7},
  };
  const auto options = enumerate_mapping_options(pool);
  EXPECT_EQ(options[3], MappingOption::split(1, 0));
  EXPECT_EQ(options[4], MappingOption::split(2, 0));
  EXPECT_EQ(options[5], MappingOption::split(2, 1));
  // A score tie keeps the lower id in stage 1.
  pool[1].score = 0.9;
  EXPECT_EQ(enumerate_mapping_options(pool)[3], MappingOption::split(0, 1));
}

TEST(EnumerateOptions, RejectsBadPools) {
  EXPECT_EQ(error_code([] { enumerate_mapping_options({}); }), Errc::empty_backends);
  EXPECT_EQ(error_code([] { enumerate_mapping_options(testutil::stock_pool()); }),
            Errc::missing_score);
  auto pool = testutil::scored_pool();
  pool[1].id = 0;
  EXPECT_EQ(error_code([&] { enumerate_mapping_options(pool); }), Errc::invalid_argument);
}

TEST(SimulateTimeline, PacksASingleBackendBackToBack) {
  const auto pool = testutil::scored_pool();
  const auto jobs = testutil::stock_jobs(3, 100);
  ScheduleStrategy s;
  s.assignments.assign(3, MappingOption::single(1));
  const auto [events, makespan] = simulate_timeline(jobs, s, pool);
  ASSERT_EQ(events.size(), 3u);
  EXPECT_EQ(makespan, 300.0);
  for (int j = 0; j < 3; ++j) {
    EXPECT_EQ(events[j].job_id, j);
    EXPECT_EQ(events[j].backend_id, 1);
    EXPECT_EQ(events[j].start, 100.0 * j);  // FIFO by job id when released together
    EXPECT_EQ(events[j].finish, 100.0 * (j + 1));
  }
}

TEST(SimulateTimeline, StageTwoWaitsForStageOne) {
  const auto pool = testutil::scored_pool();
  const auto jobs = testutil::stock_jobs(1, 150);
  ScheduleStrategy s;
  s.assignments = {MappingOption::split(0, 2)};
  s.split_ratio = 0.2;  // 120 noisy, 30 clean
  const auto [events, makespan] = simulate_timeline(jobs, s, pool);
  ASSERT_EQ(events.size(), 2u);
  EXPECT_EQ(events[0].stage, 1);
  EXPECT_EQ(events[0].finish, 120.0);
  EXPECT_EQ(events[1].stage, 2);
  EXPECT_EQ(events[1].start, 120.0);
  EXPECT_EQ(events[1].finish, 150.0);
  EXPECT_EQ(makespan, 150.0);
}

TEST(SimulateTimeline, HonorsIterationTimes) {
  auto pool = testutil::scored_pool();
  pool[2].iter_time = 0.5;
  const auto jobs = testutil::stock_jobs(1, 100);
  ScheduleStrategy s;
  s.assignments = {MappingOption::split(0, 2)};
  s.split_ratio = 0.5;
  const auto [events, makespan] = simulate_timeline(jobs, s, pool);
  EXPECT_EQ(events[0].finish, 50.0);
  EXPECT_EQ(events[1].finish, 50.0 + 50 * 0.5);
  EXPECT_EQ(makespan, 75.0);
}

TEST(SimulateTimeline, FiveJobGoldenTrace) {
  const auto pool = testutil::scored_pool();
  const auto jobs = testutil::stock_jobs(5, 150);
  ScheduleStrategy s;
  s.split_ratio = 0.5;
  s.assignments = {MappingOption::split(1, 2), MappingOption::split(0, 1),
                   MappingOption::single(2), MappingOption::split(1, 2),
                   MappingOption::split(0, 1)};
  const auto [events, makespan] = simulate_timeline(jobs, s, pool);
  const std::vector<TimelineEvent> expected{
      {0, 1, 1, 0.0, 75.0},   {0, 2, 2, 150.0, 225.0}, {1, 1, 0, 0.0, 75.0},
      {1, 2, 1, 150.0, 225.0}, {2, 1, 2, 0.0, 150.0},  {3, 1, 1, 75.0, 150.0},
      {3, 2, 2, 225.0, 300.0}, {4, 1, 0, 75.0, 150.0}, {4, 2, 1, 225.0, 300.0},
  };
  EXPECT_EQ(events, expected);
  EXPECT_EQ(makespan, 300.0);
}

TEST(SimulateTimeline, RandomStrategiesKeepTheInvariants) {
  const auto pool = testutil::scored_pool();
  const auto options = enumerate_mapping_options(pool);
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const int job_count = 1 + rng.uniform_int(8);
    const auto jobs = testutil::stock_jobs(job_count, 10 + rng.uniform_int(200));
    ScheduleStrategy s;
    s.split_ratio = rng.uniform(0.05, 0.95);
    for (int j = 0; j < job_count; ++j)
      s.assignments.push_back(options[static_cast<std::size_t>(rng.uniform_int(6))]);

    const auto [events, makespan] = simulate_timeline(jobs, s, pool);

    // Stage order per job, and per-backend windows never overlap.
    std::map<int, std::vector<std::pair<double, double>>> windows;
    std::map<int, const TimelineEvent*> stage1;
    for (const auto& e : events) {
      EXPECT_LT(e.start, e.finish);
      windows[e.backend_id].emplace_back(e.start, e.finish);
      if (e.stage == 1) stage1[e.job_id] = &e;
    }
    for (const auto& e : events)
      if (e.stage == 2) EXPECT_GE(e.start, stage1.at(e.job_id)->finish);
    for (auto& [backend, spans] : windows) {
      std::sort(spans.begin(), spans.end());
      for (std::size_t i = 1; i < spans.size(); ++i)
        EXPECT_GE(spans[i].first, spans[i - 1].second - 1e-9);
    }
    EXPECT_GE(makespan, makespan_lower_bound(jobs, pool) - 1e-9);
  }
}

TEST(Throughput, JobsOverMakespan) {
  EXPECT_DOUBLE_EQ(throughput(5, 300.0), 5.0 / 300.0);
  EXPECT_EQ(error_code([] { throughput(5, 0.0); }), Errc::zero_makespan);
  EXPECT_EQ(error_code([] { throughput(5, -2.0); }), Errc::zero_makespan);
}

TEST(JobFidelity, SplitQualityTracksTheCleanerStage) {
  const auto pool = testutil::scored_pool();
  EXPECT_DOUBLE_EQ(job_fidelity(MappingOption::single(0), pool), 0.7);
  EXPECT_DOUBLE_EQ(job_fidelity(MappingOption::split(0, 2), pool), 0.9);
  EXPECT_DOUBLE_EQ(job_fidelity(MappingOption::split(0, 1), pool), 0.8);
  EXPECT_EQ(error_code([&] { job_fidelity(MappingOption::single(7), pool); }),
            Errc::unknown_backend);
}

TEST(AverageFidelity, MeansThePerJobScores) {
  const auto pool = testutil::scored_pool();
  ScheduleStrategy s;
  s.assignments = {MappingOption::single(0), MappingOption::split(1, 2)};
  EXPECT_NEAR(average_fidelity(s, testutil::stock_jobs(2), pool), (0.7 + 0.9) / 2.0, 1e-15);
}

TEST(MakespanLowerBound, TakesTheBindingBound) {
  const auto pool = testutil::scored_pool();  // three unit-speed backends
  // Load bound binds: 5 * 150 / 3 = 250 > 150.
  EXPECT_DOUBLE_EQ(makespan_lower_bound(testutil::stock_jobs(5, 150), pool), 250.0);
  // Longest-job bound binds: one job of 150 vs 150 / 3.
  EXPECT_DOUBLE_EQ(makespan_lower_bound(testutil::stock_jobs(1, 150), pool), 150.0);

  auto mixed = testutil::scored_pool();
  mixed[2].iter_time = 0.5;  // aggregate speed 1 + 1 + 2 = 4
  EXPECT_DOUBLE_EQ(makespan_lower_bound(testutil::stock_jobs(8, 100), mixed),
                   std::max(100 * 0.5, 800.0 / 4.0));
  EXPECT_EQ(error_code([&] { makespan_lower_bound({}, pool); }), Errc::empty_jobs);
  EXPECT_EQ(error_code([] { makespan_lower_bound(testutil::stock_jobs(1), {}); }),
            Errc::empty_backends);
}

TEST(Baselines, MethodOnePutsEverythingOnTheBest) {
  const auto pool = testutil::scored_pool();
  const auto s = method1_strategy(testutil::stock_jobs(4), pool);
  ASSERT_EQ(s.assignments.size(), 4u);
  for (const auto& m : s.assignments) EXPECT_EQ(m, MappingOption::single(2));
}

TEST(Baselines, MethodTwoRoundRobinsInScoreOrder) {
  const auto pool = testutil::scored_pool();
  const auto s = method2_strategy(testutil::stock_jobs(5), pool);
  ASSERT_EQ(s.assignments.size(), 5u);
  EXPECT_EQ(s.assignments[0], MappingOption::single(2));
  EXPECT_EQ(s.assignments[1], MappingOption::single(1));
  EXPECT_EQ(s.assignments[2], MappingOption::single(0));
  EXPECT_EQ(s.assignments[3], MappingOption::single(2));
  EXPECT_EQ(s.assignments[4], MappingOption::single(1));
}

TEST(WeightedFitness, CombinesTheTwoObjectives) {
  EXPECT_DOUBLE_EQ(weighted_fitness(0.8, 0.9, {0.5, 0.5}), 0.85);
  EXPECT_DOUBLE_EQ(weighted_fitness(0.8, 0.9, {1.0, 0.0}), 0.8);
  EXPECT_EQ(error_code([] { weighted_fitness(0.8, 0.9, {0.6, 0.5}); }), Errc::invalid_argument);
  EXPECT_EQ(error_code([] { weighted_fitness(0.8, 0.9, {-0.1, 1.1}); }), Errc::invalid_argument);
}

TEST(Evaluate, GoldenTraceMetrics) {
  const auto pool = testutil::scored_pool();
  const auto jobs = testutil::stock_jobs(5, 150);
  ScheduleStrategy s;
  s.split_ratio = 0.5;
  s.assignments = {MappingOption::split(1, 2), MappingOption::split(0, 1),
                   MappingOption::single(2), MappingOption::split(1, 2),
                   MappingOption::split(0, 1)};
  const auto m = evaluate(s, jobs, pool, {0.5, 0.5});
  EXPECT_DOUBLE_EQ(m.makespan, 300.0);
  EXPECT_NEAR(m.throughput, 5.0 / 300.0, 1e-15);
  EXPECT_NEAR(m.th_norm, 250.0 / 300.0, 1e-12);
  EXPECT_NEAR(m.fidelity, 0.86, 1e-12);
  EXPECT_NEAR(m.fitness, 0.5 * 250.0 / 300.0 + 0.5 * 0.86, 1e-12);
}

TEST(Dominates, RequiresWeakDominanceWithOneStrictAxis) {
  SolutionMetrics a, b;
  a.throughput = 0.5;
  a.fidelity = 0.9;
  b.throughput = 0.5;
  b.fidelity = 0.8;
  EXPECT_TRUE(dominates(a, b));
  EXPECT_FALSE(dominates(b, a));
  b.fidelity = 0.9;
  EXPECT_FALSE(dominates(a, b));  // equal points do not dominate
  b.throughput = 0.6;
  b.fidelity = 0.3;
  EXPECT_FALSE(dominates(a, b));  // trade-off, neither wins
  EXPECT_FALSE(dominates(b, a));
}

TEST(DecodeStrategy, MapsGenesThroughTheOptionList) {
  const auto pool = testutil::scored_pool();
  const auto options = enumerate_mapping_options(pool);
  const auto s = decode_strategy({5, 0, 2}, options, 0.4);
  EXPECT_EQ(s.split_ratio, 0.4);
  EXPECT_EQ(s.assignments[0], MappingOption::split(1, 2));
  EXPECT_EQ(s.assignments[1], MappingOption::single(0));
  EXPECT_EQ(s.assignments[2], MappingOption::single(2));
  EXPECT_EQ(error_code([&] { decode_strategy({6}, options, 0.4); }), Errc::invalid_argument);
  EXPECT_EQ(error_code([&] { decode_strategy({-1}, options, 0.4); }), Errc::invalid_argument);
  EXPECT_EQ(error_code([&] { decode_strategy({0}, {}, 0.4); }), Errc::empty_options);
}

TEST(BruteForce, SweepsTheWholeSpaceAndFindsTheFrontier) {
  const auto pool = testutil::scored_pool();
  const auto jobs = testutil::stock_jobs(2, 150);
  const auto result = brute_force_frontier(jobs, pool, 0.5, {0.5, 0.5}, 1000000, true);
  EXPECT_EQ(result.strategy_count, 36u);  // 6 options ^ 2 jobs
  ASSERT_EQ(result.points.size(), 36u);

  // The frontier is exactly the non-dominated subset of all points.
  for (const auto& p : result.points) {
    bool dominated = false;
    for (const auto& q : result.points)
      if (dominates(q.metrics, p.metrics)) dominated = true;
    EXPECT_EQ(p.pareto, !dominated);
  }
  for (const auto& f : result.frontier)
    for (const auto& q : result.points) EXPECT_FALSE(dominates(q.metrics, f.metrics));

  // Frontier points are unique and sorted by ascending throughput.
  for (std::size_t i = 1; i < result.frontier.size(); ++i) {
    EXPECT_LT(result.frontier[i - 1].metrics.throughput, result.frontier[i].metrics.throughput);
    EXPECT_GT(result.frontier[i - 1].metrics.fidelity, result.frontier[i].metrics.fidelity);
  }

  // The reported best is the fitness maximum over all points.
  double max_fitness = 0.0;
  for (const auto& p : result.points) max_fitness = std::max(max_fitness, p.metrics.fitness);
  EXPECT_DOUBLE_EQ(result.best.metrics.fitness, max_fitness);
}

TEST(BruteForce, IsDeterministic) {
  const auto pool = testutil::scored_pool();
  const auto jobs = testutil::stock_jobs(3, 150);
  const auto a = brute_force_frontier(jobs, pool, 0.5);
  const auto b = brute_force_frontier(jobs, pool, 0.5);
  ASSERT_EQ(a.frontier.size(), b.frontier.size());
  for (std::size_t i = 0; i < a.frontier.size(); ++i) {
    EXPECT_EQ(a.frontier[i].metrics, b.frontier[i].metrics);
    EXPECT_EQ(a.frontier[i].strategy, b.frontier[i].strategy);
  }
  EXPECT_EQ(a.best.strategy, b.best.strategy);
}

TEST(BruteForce, RefusesOversizedSpaces) {
  const auto pool = testutil::scored_pool();
  EXPECT_EQ(error_code([&] {
              brute_force_frontier(testutil::stock_jobs(2), pool, 0.5, {0.5, 0.5}, 35);
            }),
            Errc::space_too_large);
  EXPECT_EQ(error_code([&] { brute_force_frontier({}, pool, 0.5); }), Errc::empty_jobs);
}

TEST(DeviationDistribution, MeasuresShortfallFromTheBestBackend) {
  const auto pool = testutil::scored_pool();
  const auto jobs = testutil::stock_jobs(5);
  const auto m1 = deviation_distribution(method1_strategy(jobs, pool), jobs, pool);
  for (double d : m1) EXPECT_DOUBLE_EQ(d, 0.0);
  const auto m2 = deviation_distribution(method2_strategy(jobs, pool), jobs, pool);
  const std::vector<double> expected{0.0, 0.9 - 0.8, 0.9 - 0.7, 0.0, 0.9 - 0.8};
  ASSERT_EQ(m2.size(), expected.size());
  for (std::size_t i = 0; i < m2.size(); ++i) EXPECT_NEAR(m2[i], expected[i], 1e-15);
}
