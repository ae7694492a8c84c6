#include "splitsched/io.hpp"

#include <gtest/gtest.h>

#include "splitsched/experiments.hpp"
#include "test_util.hpp"

using namespace splitsched;
using testutil::error_code;
using testutil::ScopedDir;

TEST(FormatNumber, ShortestRoundTrip) {
  EXPECT_EQ(detail::format_number(75.0), "75");
  EXPECT_EQ(detail::format_number(0.5), "0.5");
  EXPECT_EQ(detail::format_number(0.1), "0.1");
  EXPECT_EQ(detail::format_number(-1.86), "-1.86");
  EXPECT_EQ(detail::format_number(250.0 / 300.0), "0.8333333333333334");
  EXPECT_EQ(detail::format_number(0), "0");
}

TEST(CsvField, QuotesOnlyWhenNeeded) {
  EXPECT_EQ(detail::csv_field("B1+B3"), "B1+B3");
  EXPECT_EQ(detail::csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(detail::csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
}

TEST(TimelineCsv, RendersEventsAsRows) {
  const std::vector<TimelineEvent> events{{0, 1, 1, 0.0, 75.0}, {0, 2, 2, 150.0, 225.0}};
  EXPECT_EQ(timeline_csv(events),
            "job_id,stage,backend_id,start,finish\n"
            "0,1,1,0,75\n"
            "0,2,2,150,225\n");
}

TEST(LoadBackends, ParsesTheStockFile) {
  ScopedDir dir("backends");
  write_file(dir.file("b.json"), R"([
    {"id": 0, "name": "B1", "one_q_error": 3.38e-4, "two_q_error": 3.12e-2,
     "readout_error": 2.35e-2, "iter_time": 1.0},
    {"id": 1, "name": "B2", "one_q_error": 3.2e-4, "two_q_error": 1.5e-2,
     "readout_error": 1.2e-2, "iter_time": 1.0, "score": 0.8}
  ])");
  const auto pool = load_backends_file(dir.file("b.json"));
  ASSERT_EQ(pool.size(), 2u);
  EXPECT_EQ(pool[0].name, "B1");
  EXPECT_DOUBLE_EQ(pool[0].two_q_error, 3.12e-2);
  EXPECT_FALSE(pool[0].score.has_value());
  ASSERT_TRUE(pool[1].score.has_value());
  EXPECT_DOUBLE_EQ(*pool[1].score, 0.8);
}

TEST(LoadBackends, RejectsBadDocuments) {
  ScopedDir dir("badbackends");
  EXPECT_EQ(error_code([&] { load_backends_file(dir.file("missing.json")); }), Errc::parse_error);

  write_file(dir.file("garbled.json"), "[{");
  EXPECT_EQ(error_code([&] { load_backends_file(dir.file("garbled.json")); }), Errc::parse_error);

  write_file(dir.file("object.json"), R"({"id": 0})");
  EXPECT_EQ(error_code([&] { load_backends_file(dir.file("object.json")); }), Errc::invalid_field);

  write_file(dir.file("empty.json"), "[]");
  EXPECT_EQ(error_code([&] { load_backends_file(dir.file("empty.json")); }), Errc::empty_backends);

  write_file(dir.file("nofield.json"), R"([{"id": 0, "name": "B1"}])");
  EXPECT_EQ(error_code([&] { load_backends_file(dir.file("nofield.json")); }), Errc::invalid_field);

  write_file(dir.file("badtype.json"), R"([
    {"id": 0, "name": "B1", "one_q_error": "tiny", "two_q_error": 0.01,
     "readout_error": 0.01, "iter_time": 1.0}
  ])");
  EXPECT_EQ(error_code([&] { load_backends_file(dir.file("badtype.json")); }), Errc::invalid_field);

  write_file(dir.file("range.json"), R"([
    {"id": 0, "name": "B1", "one_q_error": 1.5, "two_q_error": 0.01,
     "readout_error": 0.01, "iter_time": 1.0}
  ])");
  EXPECT_EQ(error_code([&] { load_backends_file(dir.file("range.json")); }), Errc::invalid_field);

  write_file(dir.file("dup.json"), R"([
    {"id": 0, "name": "B1", "one_q_error": 0.0, "two_q_error": 0.0,
     "readout_error": 0.0, "iter_time": 1.0},
    {"id": 0, "name": "B2", "one_q_error": 0.0, "two_q_error": 0.0,
     "readout_error": 0.0, "iter_time": 1.0}
  ])");
  EXPECT_EQ(error_code([&] { load_backends_file(dir.file("dup.json")); }), Errc::invalid_field);
}

TEST(LoadJobs, ParsesAndSortsById) {
  ScopedDir dir("jobs");
  write_file(dir.file("j.json"), R"([
    {"id": 1, "total_iterations": 100, "reference_value": -1.5},
    {"id": 0, "total_iterations": 150, "reference_value": -1.86}
  ])");
  const auto jobs = load_jobs_file(dir.file("j.json"));
  ASSERT_EQ(jobs.size(), 2u);
  EXPECT_EQ(jobs[0].id, 0);
  EXPECT_EQ(jobs[0].total_iterations, 150);
  EXPECT_EQ(jobs[1].id, 1);
}

TEST(LoadJobs, RequiresDenseIdsFromZero) {
  ScopedDir dir("jobids");
  write_file(dir.file("gap.json"), R"([
    {"id": 0, "total_iterations": 10, "reference_value": -1.0},
    {"id": 2, "total_iterations": 10, "reference_value": -1.0}
  ])");
  EXPECT_EQ(error_code([&] { load_jobs_file(dir.file("gap.json")); }), Errc::invalid_field);

  write_file(dir.file("empty.json"), "[]");
  EXPECT_EQ(error_code([&] { load_jobs_file(dir.file("empty.json")); }), Errc::empty_jobs);

  write_file(dir.file("zeroref.json"),
             R"([{"id": 0, "total_iterations": 10, "reference_value": 0.0}])");
  EXPECT_EQ(error_code([&] { load_jobs_file(dir.file("zeroref.json")); }), Errc::invalid_field);

  write_file(dir.file("noiter.json"),
             R"([{"id": 0, "total_iterations": 0, "reference_value": -1.0}])");
  EXPECT_EQ(error_code([&] { load_jobs_file(dir.file("noiter.json")); }), Errc::invalid_field);
}

TEST(StrategyText, FormatsAndParsesRoundTrip) {
  const auto pool = testutil::scored_pool();
  ScheduleStrategy s;
  s.split_ratio = 0.4;
  s.assignments = {MappingOption::split(1, 2), MappingOption::single(0),
                   MappingOption::split(0, 2)};
  const std::string text = format_strategy(s, pool);
  EXPECT_EQ(text, "B2+B3,B1,B1+B3");
  const auto parsed = parse_strategy(text, pool, 0.4);
  EXPECT_EQ(parsed, s);
}

TEST(StrategyText, RejectsMalformedInput) {
  const auto pool = testutil::scored_pool();
  EXPECT_EQ(error_code([&] { parse_strategy("", pool); }), Errc::parse_error);
  EXPECT_EQ(error_code([&] { parse_strategy("B1,,B2", pool); }), Errc::parse_error);
  EXPECT_EQ(error_code([&] { parse_strategy("B1+B2+B3", pool); }), Errc::parse_error);
  EXPECT_EQ(error_code([&] { parse_strategy("B1+", pool); }), Errc::parse_error);
  EXPECT_EQ(error_code([&] { parse_strategy("B9", pool); }), Errc::unknown_backend);
}

TEST(WriteFile, CreatesParentDirectories) {
  ScopedDir dir("writer");
  const auto nested = dir.path() / "a" / "b" / "out.csv";
  write_file(nested, "x,y\n1,2\n");
  EXPECT_EQ(read_file(nested), "x,y\n1,2\n");
}

TEST(RunConfig, LoadsOverridesAndKeepsDefaults) {
  ScopedDir dir("config");
  write_file(dir.file("run.json"), R"({
    "seed": 7,
    "split_ratios": [0.3, 0.6],
    "ga": {"generations": 50, "weights": "dynamic"}
  })");
  const auto config = load_run_config(dir.file("run.json"));
  EXPECT_EQ(config.seed, 7u);
  ASSERT_EQ(config.split_ratios.size(), 2u);
  EXPECT_DOUBLE_EQ(config.split_ratios[0], 0.3);
  EXPECT_EQ(config.ga.generations, 50);
  EXPECT_TRUE(config.ga.weights.dynamic);
  EXPECT_EQ(config.ga.population_size, 10);  // untouched default
  EXPECT_EQ(config.benchmark_circuits, 5);
}

TEST(RunConfig, ParsesFixedWeightPairs) {
  ScopedDir dir("configw");
  write_file(dir.file("run.json"), R"({"ga": {"weights": [0.7, 0.3]}})");
  const auto config = load_run_config(dir.file("run.json"));
  EXPECT_FALSE(config.ga.weights.dynamic);
  EXPECT_DOUBLE_EQ(config.ga.weights.w1, 0.7);
  EXPECT_DOUBLE_EQ(config.ga.weights.w2, 0.3);
}

TEST(RunConfig, RejectsBadFields) {
  ScopedDir dir("configbad");
  write_file(dir.file("ratios.json"), R"({"split_ratios": [1.5]})");
  EXPECT_EQ(error_code([&] { load_run_config(dir.file("ratios.json")); }),
            Errc::ratio_out_of_range);
  write_file(dir.file("weights.json"), R"({"ga": {"weights": "balanced"}})");
  EXPECT_EQ(error_code([&] { load_run_config(dir.file("weights.json")); }), Errc::invalid_field);
  write_file(dir.file("seed.json"), R"({"seed": "forty-two"})");
  EXPECT_EQ(error_code([&] { load_run_config(dir.file("seed.json")); }), Errc::invalid_field);
  write_file(dir.file("toplevel.json"), "[1, 2]");
  EXPECT_EQ(error_code([&] { load_run_config(dir.file("toplevel.json")); }), Errc::invalid_field);
}

TEST(BackendScoresCsv, ListsThePoolInRankOrder) {
  const auto csv = backend_scores_csv(testutil::scored_pool());
  const auto first_row = csv.substr(csv.find('\n') + 1);
  EXPECT_EQ(first_row.substr(0, 7), "1,2,B3,");  // rank 1 is backend id 2
}

TEST(TrajectoryRows, TagBackendsBySegment) {
  const JobSpec job{0, 100, -1.86};
  const BackendProfile noisy{0, "N", 0.0, 0.02, 0.0, 1.0, std::nullopt};
  const BackendProfile clean{1, "C", 0.0, 0.0, 0.0, 1.0, std::nullopt};
  const auto traj = run_segments(job, {{noisy, 2}, {clean, 2}});
  std::string rows;
  append_trajectory_rows(rows, "split", traj);
  std::istringstream lines(rows);
  std::string line;
  std::vector<std::string> parsed;
  while (std::getline(lines, line)) parsed.push_back(line);
  ASSERT_EQ(parsed.size(), 4u);
  EXPECT_EQ(parsed[0].substr(0, 10), "split,1,0,");
  EXPECT_EQ(parsed[1].substr(0, 10), "split,2,0,");
  EXPECT_EQ(parsed[2].substr(0, 10), "split,3,1,");
  EXPECT_EQ(parsed[3].substr(0, 10), "split,4,1,");
}
