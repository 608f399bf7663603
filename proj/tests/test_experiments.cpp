#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "hotcold/config.hpp"
#include "hotcold/experiments.hpp"
#include "hotcold/report.hpp"

using namespace hotcold;

namespace {

ExperimentGrid miniGrid() {
  ExperimentGrid g;
  g.sws_values = {2, 3};
  g.sigma_values = {0, 2};
  g.runs_per_point = 2;
  g.master_seed = 9;
  g.base.duration_s = 20.0;
  g.workers = 2;
  return g;
}

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string golden(const std::string& name) {
  return readFile(std::string(HOTCOLD_GOLDEN_DIR) + "/" + name);
}

template <typename Writer>
std::string render(Writer&& w) {
  std::ostringstream out;
  w(out);
  return out.str();
}

ExperimentConfig parse(const std::string& text, const std::vector<std::string>& overrides = {}) {
  std::istringstream in(text);
  return parseConfig(in, overrides);
}

}  // namespace

TEST(TrackerKind, RoundTrip) {
  for (auto k : {TrackerKind::kHotCold, TrackerKind::kTrilateration, TrackerKind::kControl})
    EXPECT_EQ(parseTrackerKind(toString(k)), k);
  EXPECT_THROW(parseTrackerKind("kalman"), std::invalid_argument);
}

TEST(ExperimentGrid, Validation) {
  ExperimentGrid g;
  EXPECT_NO_THROW(g.validate());
  g.sigma_values.clear();
  EXPECT_THROW(g.validate(), std::invalid_argument);
  g = {};
  g.runs_per_point = 0;
  EXPECT_THROW(g.validate(), std::invalid_argument);
  g = {};
  g.sws_values.clear();
  EXPECT_THROW(g.validate(), std::invalid_argument);
  g.trackers = {TrackerKind::kControl};
  EXPECT_NO_THROW(g.validate());
}

TEST(EnumeratePoints, OrderAndCount) {
  const auto points = enumeratePoints(miniGrid());
  ASSERT_EQ(points.size(), 2u * 2u + 2u + 2u);
  EXPECT_EQ(points[0].seriesName(), "hotcold_sws2");
  EXPECT_EQ(points[0].sigma_db, 0.0);
  EXPECT_EQ(points[1].sigma_db, 2.0);
  EXPECT_EQ(points[2].seriesName(), "hotcold_sws3");
  EXPECT_EQ(points[4].seriesName(), "trilateration");
  EXPECT_EQ(points[6].seriesName(), "control");
}

TEST(Summarize, SampleStandardDeviation) {
  const KpiStats s = summarize({2, 4, 4, 4, 5, 5, 7, 9});
  EXPECT_DOUBLE_EQ(s.mean, 5.0);
  EXPECT_NEAR(s.stddev, std::sqrt(32.0 / 7.0), 1e-12);
  EXPECT_EQ(summarize({3.0}).stddev, 0.0);
  EXPECT_TRUE(std::isnan(summarize({}).mean));
}

TEST(RunGrid, RerunAndWorkerCountIdentical) {
  ExperimentGrid g = miniGrid();
  const GridResult a = runGrid(g);
  g.workers = 1;
  const GridResult b = runGrid(g);
  ASSERT_EQ(a.points.size(), b.points.size());
  EXPECT_EQ(render([&](auto& o) { writeGridRunsCsv(o, a); }),
            render([&](auto& o) { writeGridRunsCsv(o, b); }));
}

TEST(RunGrid, PointsShareRunSeeds) {
  const GridResult r = runGrid(miniGrid());
  for (const auto& p : r.points) {
    ASSERT_EQ(p.seeds.size(), 2u);
    EXPECT_EQ(p.seeds[0], runSeed(9, 0));
    EXPECT_EQ(p.seeds[1], runSeed(9, 1));
  }
  EXPECT_NE(runSeed(9, 0), runSeed(9, 1));
}

TEST(RunGrid, FailingRunIsRecordedNotFatal) {
  ExperimentGrid g = miniGrid();
  g.base.duration_s = 20.25;  // not a whole number of cycles
  const GridResult r = runGrid(g);
  for (const auto& p : r.points) {
    for (std::size_t i = 0; i < p.runs.size(); ++i) {
      EXPECT_FALSE(p.runs[i].has_value());
      EXPECT_FALSE(p.errors[i].empty());
    }
  }
  const std::string csv = render([&](auto& o) { writeGridRunsCsv(o, r); });
  EXPECT_NE(csv.find("multiple of the cycle period"), std::string::npos);
}

TEST(RunGrid, AggregatesMatchPerRunMetrics) {
  const GridResult r = runGrid(miniGrid());
  for (const auto& p : r.points) {
    std::vector<double> d;
    for (const auto& m : p.runs) d.push_back(m->average_distance_m);
    EXPECT_DOUBLE_EQ(p.average_distance.mean, (d[0] + d[1]) / 2.0);
    EXPECT_NEAR(p.average_distance.stddev, std::abs(d[0] - d[1]) / std::sqrt(2.0), 1e-12);
  }
}

TEST(RunGrid, WorldForPointAppliesSweepValues) {
  const ExperimentGrid g = miniGrid();
  const WorldConfig w = worldForPoint(g, {TrackerKind::kHotCold, 3, 2.0}, 123);
  EXPECT_EQ(std::get<HotColdConfig>(w.tracker).sws, 3);
  EXPECT_EQ(w.channel.shadowing_sigma_db, 2.0);
  EXPECT_EQ(w.seed, 123u);
  EXPECT_TRUE(std::holds_alternative<StaticControl>(
      worldForPoint(g, {TrackerKind::kControl, 0, 0.0}, 1).tracker));
}

TEST(SwsDifference, NonNegativeWithZeroAtBest) {
  const GridResult r = runGrid(miniGrid());
  for (Kpi kpi : {Kpi::kAverageDistance, Kpi::kCyclesInRange, Kpi::kCyclesInHalt}) {
    const SwsDifferenceTable t = swsDifferenceTable(r, kpi);
    ASSERT_EQ(t.sws_values, (std::vector<int>{2, 3}));
    for (std::size_t j = 0; j < t.sigma_values.size(); ++j) {
      double smallest = 1e300;
      for (std::size_t i = 0; i < t.sws_values.size(); ++i) {
        EXPECT_GE(t.difference[i][j], 0.0);
        smallest = std::min(smallest, t.difference[i][j]);
      }
      EXPECT_EQ(smallest, 0.0);
    }
  }
  // Difference from the minimum distance recomputed from the raw points.
  const SwsDifferenceTable t = swsDifferenceTable(r, Kpi::kAverageDistance);
  const double a = r.find(TrackerKind::kHotCold, 2, 2.0)->average_distance.mean;
  const double b = r.find(TrackerKind::kHotCold, 3, 2.0)->average_distance.mean;
  EXPECT_DOUBLE_EQ(t.difference[0][1], a - std::min(a, b));
  EXPECT_DOUBLE_EQ(t.difference[1][1], b - std::min(a, b));
}

TEST(GoldenCsv, MiniGrid) {
  const GridResult r = runGrid(miniGrid());
  EXPECT_EQ(render([&](auto& o) {
              writeSwsDifferenceCsv(o, swsDifferenceTable(r, Kpi::kAverageDistance));
            }),
            golden("mini_fig5.csv"));
  EXPECT_EQ(render([&](auto& o) { writeSigmaComparisonCsv(o, r, Kpi::kCyclesInRange); }),
            golden("mini_fig9.csv"));
  EXPECT_EQ(render([&](auto& o) { writeGridRunsCsv(o, r); }), golden("mini_grid_runs.csv"));
}

TEST(GoldenCsv, RotationSweepSlice) {
  const auto sweep = analysis::rotationSweep(135, 139, 0, 4);
  EXPECT_EQ(render([&](auto& o) { writeRotationHeatmapCsv(o, sweep); }),
            golden("mini_fig2.csv"));
}

TEST(TraceCsv, HeaderAndDeterminism) {
  WorldConfig w;
  w.duration_s = 10.0;
  w.channel.shadowing_sigma_db = 2.0;
  const std::string a = render([&](auto& o) { writeTraceCsv(o, runSimulation(w).trace); });
  const std::string b = render([&](auto& o) { writeTraceCsv(o, runSimulation(w).trace); });
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.substr(0, a.find('\n')),
            "time_s,robot_x,robot_y,robot_heading_deg,target_x,target_y,rssi_dbm,in_range,"
            "in_halt,decision");
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 21);
}

TEST(MetricsJson, Fields) {
  const auto j = metricsJson(runSimulation(WorldConfig{}).metrics);
  EXPECT_EQ(j["total_cycles"], 2000);
  EXPECT_TRUE(j.contains("average_distance_m"));
  EXPECT_TRUE(j.contains("cycles_in_range_pct"));
  WorldConfig empty;
  empty.duration_s = 0.0;
  const std::string text = metricsJson(runSimulation(empty).metrics).dump();
  EXPECT_NE(text.find("\"average_distance_m\":null"), std::string::npos);
}

TEST(Scenario, StaticTargetInitialDistance) {
  const ScenarioResult r = runScenario(ScenarioPreset::kStaticTarget, 1, 0.0, 1);
  EXPECT_NEAR(r.iterations[0].front().distance_m, 39.0512, 1e-4);
  EXPECT_EQ(r.iterations[0].front().time_s, 0.0);
  EXPECT_EQ(r.iterations[0].size(), 121u);
  EXPECT_DOUBLE_EQ(r.iterations[0][1].time_s, 0.5);
}

TEST(Scenario, NoiseFreeStaticTargetCloses) {
  const ScenarioResult r = runScenario(ScenarioPreset::kStaticTarget, 1, 0.0, 1);
  const auto& s = r.iterations[0];
  EXPECT_LT(s.back().distance_m, s.front().distance_m);
}

TEST(Scenario, NoiseFreeStaticTargetReachesHaltBand) {
  // The start heading points away from the target, so the windowed search
  // needs a longer horizon than the preset's 60 s.
  WorldConfig w = scenarioWorld(ScenarioPreset::kStaticTarget, 0.0, 1);
  w.duration_s = 120.0;
  const auto r = runSimulation(w);
  const bool reached = std::any_of(r.trace.begin(), r.trace.end(), [](const TraceRecord& t) {
    return distance(t.robot.position, t.target) <= 3.0;
  });
  EXPECT_TRUE(reached);
}

TEST(Scenario, ZigzagDistanceInitiallyIncreases) {
  const ScenarioResult r = runScenario(ScenarioPreset::kZigzag, 1, 0.0, 1);
  const auto& s = r.iterations[0];
  EXPECT_GT(s[4].distance_m, s[0].distance_m);
}

TEST(Scenario, StraightLineHonoursWaypointTimes) {
  const WorldConfig w = scenarioWorld(ScenarioPreset::kStraightLine, 0.0, 1);
  const auto& path = std::get<FixedPathMobility>(w.mobility);
  EXPECT_TRUE(path.positionAt(28.0).isApprox(Vec2(50, 35)));
  EXPECT_TRUE(path.positionAt(14.0).isApprox(Vec2(27.5, 20)));
  EXPECT_EQ(w.robot_start.position, Vec2(30, 5));
  EXPECT_EQ(w.totalCycles(), 120);
  EXPECT_NEAR(w.robotStepM(), 10.0 / 3.6 * 0.5, 1e-12);
}

TEST(Scenario, PresetNames) {
  EXPECT_EQ(parseScenario("scenario2"), ScenarioPreset::kStraightLine);
  EXPECT_EQ(parseScenario("3"), ScenarioPreset::kZigzag);
  EXPECT_EQ(toString(ScenarioPreset::kStaticTarget), "scenario1");
  EXPECT_THROW(parseScenario("scenario4"), std::invalid_argument);
}

TEST(Scenario, IterationsDiffer) {
  const ScenarioResult r = runScenario(ScenarioPreset::kZigzag, 2, 2.0, 1);
  ASSERT_EQ(r.iterations.size(), 2u);
  bool differ = false;
  for (std::size_t i = 0; i < r.iterations[0].size(); ++i)
    differ |= r.iterations[0][i].distance_m != r.iterations[1][i].distance_m;
  EXPECT_TRUE(differ);
}

TEST(Config, DefaultTextParsesToDefaults) {
  const ExperimentConfig a = parse(defaultConfigText());
  const ExperimentConfig b = defaultConfig();
  EXPECT_EQ(a.version, kConfigVersion);
  EXPECT_EQ(a.world.duration_s, b.world.duration_s);
  EXPECT_EQ(a.world.channel.rx_sensitivity_dbm, b.world.channel.rx_sensitivity_dbm);
  EXPECT_EQ(a.hotcold.sws, b.hotcold.sws);
  EXPECT_EQ(a.hotcold.rotation_angle_deg, 137.0);
  EXPECT_EQ(a.trilateration.k_observations, 3);
  EXPECT_EQ(a.grid.sws_values, b.grid.sws_values);
  EXPECT_EQ(a.grid.sigma_values, b.grid.sigma_values);
  EXPECT_EQ(a.grid.trackers, b.grid.trackers);
  EXPECT_EQ(a.scenario_iterations, 4);
  EXPECT_EQ(a.scenario_sigma_db, 2.0);
  EXPECT_TRUE(std::holds_alternative<HotColdConfig>(a.world.tracker));
  EXPECT_FALSE(a.world.halt_threshold_dbm.has_value());
}

TEST(Config, OverridesApply) {
  const ExperimentConfig c = configFromOverrides(
      {"channel.shadowing_sigma_db=3", "tracker.type=trilateration", "grid.sws_values=1,5,9",
       "hotcold.rotation_direction=CW", "world.seed=42"});
  EXPECT_EQ(c.world.channel.shadowing_sigma_db, 3.0);
  EXPECT_TRUE(std::holds_alternative<TrilaterationConfig>(c.world.tracker));
  EXPECT_EQ(c.grid.sws_values, (std::vector<int>{1, 5, 9}));
  EXPECT_EQ(c.hotcold.rotation_direction, RotationDirection::kCw);
  EXPECT_EQ(c.world.seed, 42u);
  EXPECT_EQ(c.grid.base.channel.shadowing_sigma_db, 3.0);
}

TEST(Config, OverrideBeatsFile) {
  const ExperimentConfig c = parse("[hotcold]\nsws = 6\n", {"hotcold.sws=2"});
  EXPECT_EQ(c.hotcold.sws, 2);
}

TEST(Config, PathAndObstacles) {
  const ExperimentConfig c =
      parse("[world]\nmobility = path\npath = 0:5:5;10:5:11.5\nobstacles = 10:10:12:20;1:1:2:2\n");
  const auto& path = std::get<FixedPathMobility>(c.world.mobility);
  ASSERT_EQ(path.waypoints.size(), 2u);
  EXPECT_EQ(path.waypoints[1].position, Vec2(5, 11.5));
  ASSERT_EQ(c.world.obstacles.size(), 2u);
  EXPECT_EQ(c.world.obstacles[0].max, Vec2(12, 20));
}

TEST(Config, StaticTargetAndRobotStart) {
  const ExperimentConfig c = parse(
      "[world]\nmobility = static\ntarget_x = 5\ntarget_y = 6\nrobot_x = 1\nrobot_heading_deg = 90\n");
  EXPECT_EQ(std::get<StaticMobility>(c.world.mobility).position, Vec2(5, 6));
  EXPECT_EQ(c.world.robot_start.position, Vec2(1, 50));
  EXPECT_NEAR(c.world.robot_start.heading, deg2rad(90.0), 1e-12);
}

TEST(Config, SharedHaltThresholdAndStep) {
  const ExperimentConfig c = parse("[hotcold]\nhalt_threshold_dbm = -60\nstep_size_m = 0.5\n");
  EXPECT_EQ(c.world.haltThresholdDbm(), -60.0);
  EXPECT_NEAR(c.world.robotStepM(), 0.5, 1e-12);
  EXPECT_THROW(parse("[hotcold]\nhalt_threshold_dbm = -60\n[trilateration]\nhalt_threshold_dbm = -55\n"),
               ConfigError);
}

TEST(Config, Errors) {
  EXPECT_THROW(parse("[world]\nbogus = 1\n"), ConfigError);
  EXPECT_THROW(parse("[nope]\nx = 1\n"), ConfigError);
  EXPECT_THROW(parse("[world]\nduration_s = ten\n"), ConfigError);
  EXPECT_THROW(parse("[hotcold]\nsws = 0\n"), ConfigError);
  EXPECT_THROW(parse("version = 2\n"), ConfigError);
  EXPECT_THROW(parse("[tracker]\ntype = kalman\n"), ConfigError);
  EXPECT_THROW(parse("[world]\nmobility = path\n"), ConfigError);
  EXPECT_THROW(parse("[world]\ntarget_x = 3\n"), ConfigError);
  EXPECT_THROW(parse("[channel]\nshadowing_sigma_db = -1\n"), ConfigError);
  EXPECT_THROW(configFromOverrides({"sws=3"}), ConfigError);
  EXPECT_THROW(configFromOverrides({"hotcold.sws"}), ConfigError);
  EXPECT_THROW(loadConfig("/nonexistent/hotcold.ini"), ConfigError);
}
