#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "hotcold/simulation.hpp"

using namespace hotcold;

namespace {

WorldConfig staticTargetWorld(const Vec2& target, const Pose2d& robot, TrackerConfig tracker) {
  WorldConfig w;
  w.mobility = StaticMobility{target};
  w.robot_start = robot;
  w.tracker = std::move(tracker);
  return w;
}

HotColdConfig hotCold(int sws) {
  HotColdConfig cfg;
  cfg.sws = sws;
  return cfg;
}

TraceRecord record(const Vec2& robot, const Vec2& target, bool in_range, bool in_halt) {
  TraceRecord r;
  r.robot = Pose2d(robot, 0.0);
  r.target = target;
  r.in_range = in_range;
  r.in_halt = in_halt;
  return r;
}

}  // namespace

TEST(WorldConfig, ReferenceStepsAndCycles) {
  const WorldConfig w;
  EXPECT_DOUBLE_EQ(w.robotStepM(), 1.0);
  EXPECT_DOUBLE_EQ(w.targetStepM(), 0.5);
  EXPECT_EQ(w.totalCycles(), 2000);
  EXPECT_NEAR(w.haltThresholdDbm(), -51.41, 0.01);
}

TEST(WorldConfig, ExplicitHaltThresholdWins) {
  WorldConfig w;
  w.halt_threshold_dbm = -60.0;
  EXPECT_DOUBLE_EQ(w.haltThresholdDbm(), -60.0);
}

TEST(WorldConfig, Validation) {
  WorldConfig w;
  w.duration_s = 10.25;
  EXPECT_THROW(w.validate(), std::invalid_argument);
  w = {};
  w.cycle_period_s = 0.0;
  EXPECT_THROW(w.validate(), std::invalid_argument);
  w = {};
  w.robot_speed_kmh = -1.0;
  EXPECT_THROW(w.validate(), std::invalid_argument);
  w = {};
  w.mobility = FixedPathMobility{{{1.0, Vec2(0, 0)}, {1.0, Vec2(1, 1)}}};
  EXPECT_THROW(w.validate(), std::invalid_argument);
  w = {};
  w.obstacles.push_back({Vec2(5, 5), Vec2(4, 6)});
  EXPECT_THROW(w.validate(), std::invalid_argument);
}

TEST(ComputeMetrics, SingleCycle) {
  const auto m = computeMetrics({record(Vec2(0, 0), Vec2(3, 4), true, false)});
  EXPECT_DOUBLE_EQ(m.average_distance_m, 5.0);
  EXPECT_EQ(m.total_cycles, 1);
  EXPECT_DOUBLE_EQ(m.percentInRange(), 100.0);
}

TEST(ComputeMetrics, AllHalted) {
  std::vector<TraceRecord> trace(4, record(Vec2(0, 0), Vec2(1, 0), true, true));
  EXPECT_DOUBLE_EQ(computeMetrics(trace).percentInHalt(), 100.0);
}

TEST(ComputeMetrics, MixedTraceMatchesHandComputation) {
  const std::vector<TraceRecord> trace{record(Vec2(0, 0), Vec2(6, 8), true, false),
                                       record(Vec2(1, 1), Vec2(1, 3), true, true),
                                       record(Vec2(0, 0), Vec2(0, 150), false, false),
                                       record(Vec2(2, 2), Vec2(2, 2), true, true)};
  const auto m = computeMetrics(trace);
  EXPECT_DOUBLE_EQ(m.average_distance_m, (10.0 + 2.0 + 150.0 + 0.0) / 4.0);
  EXPECT_EQ(m.cycles_in_range, 3);
  EXPECT_EQ(m.cycles_in_halt, 2);
  EXPECT_DOUBLE_EQ(m.percentInRange(), 75.0);
  EXPECT_DOUBLE_EQ(m.percentInHalt(), 50.0);
}

TEST(ComputeMetrics, EmptyTraceIsNaNWithZeroCounts) {
  const auto m = computeMetrics({});
  EXPECT_TRUE(std::isnan(m.average_distance_m));
  EXPECT_EQ(m.total_cycles, 0);
  EXPECT_EQ(m.percentInRange(), 0.0);
}

TEST(RunSimulation, ZeroDuration) {
  WorldConfig w;
  w.duration_s = 0.0;
  const auto r = runSimulation(w);
  EXPECT_TRUE(r.trace.empty());
  EXPECT_EQ(r.metrics.total_cycles, 0);
  EXPECT_TRUE(std::isnan(r.metrics.average_distance_m));
}

TEST(RunSimulation, ReferenceRunHasTwoThousandCycles) {
  const auto r = runSimulation(WorldConfig{});
  EXPECT_EQ(r.metrics.total_cycles, 2000);
  EXPECT_LE(r.metrics.cycles_in_halt, r.metrics.cycles_in_range);
  EXPECT_LE(r.metrics.cycles_in_range, r.metrics.total_cycles);
  EXPECT_GE(r.metrics.average_distance_m, 0.0);
  EXPECT_DOUBLE_EQ(r.trace.front().time_s, 0.5);
  EXPECT_DOUBLE_EQ(r.trace.back().time_s, 1000.0);
}

TEST(RunSimulation, StaticControlKeepsPose) {
  WorldConfig w;
  w.tracker = StaticControl{};
  w.channel.shadowing_sigma_db = 3.0;
  const auto r = runSimulation(w);
  for (const auto& rec : r.trace) {
    ASSERT_EQ(rec.robot.position, w.robot_start.position);
    ASSERT_EQ(rec.robot.heading, w.robot_start.heading);
  }
}

TEST(RunSimulation, StaticControlStaticTargetDistanceIsExact) {
  const auto r = runSimulation(
      staticTargetWorld(Vec2(80, 90), Pose2d(50, 50, 0), StaticControl{}));
  EXPECT_DOUBLE_EQ(r.metrics.average_distance_m, 50.0);
}

TEST(RunSimulation, NoiseFreeHotColdClosesOnTargetAhead) {
  WorldConfig w = staticTargetWorld(Vec2(75, 50), Pose2d(25, 50, 0), hotCold(4));
  const auto r = runSimulation(w);
  double previous = 50.0;
  bool halted = false;
  for (const auto& rec : r.trace) {
    const double d = distance(rec.robot.position, rec.target);
    if (rec.in_halt) {
      halted = true;
      break;
    }
    if (rec.decision == "idle") {
      ASSERT_EQ(d, previous);
    } else {
      ASSERT_LT(d, previous) << "t = " << rec.time_s;
    }
    previous = d;
  }
  EXPECT_TRUE(halted);
}

TEST(RunSimulation, NoiseFreeTrilaterationReachesTargetAhead) {
  WorldConfig w = staticTargetWorld(Vec2(75, 50), Pose2d(25, 50, 0), TrilaterationConfig{});
  const auto r = runSimulation(w);
  EXPECT_GT(r.metrics.cycles_in_halt, 0);
  EXPECT_DOUBLE_EQ(r.metrics.percentInRange(), 100.0);
}

TEST(RunSimulation, ConvergesToStaticTargetFromInRangeStarts) {
  Rng rng(8);
  std::uniform_real_distribution<double> coord(0.0, 100.0), heading(0.0, kTwoPi<double>);
  for (int sws : {2, 3}) {
    int trials = 0;
    while (trials < 100) {
      const Vec2 target(coord(rng), coord(rng));
      const Pose2d start(coord(rng), coord(rng), heading(rng));
      if (distance(start.position, target) > 95.0) continue;
      ++trials;
      WorldConfig w = staticTargetWorld(target, start, hotCold(sws));
      w.duration_s = 250.0;  // 500 cycles
      Simulation sim(w);
      bool halted = false;
      while (!sim.done() && !halted) {
        sim.step();
        halted = sim.state().trace.back().in_halt;
      }
      EXPECT_TRUE(halted) << "sws " << sws << " target " << target.transpose() << " start "
                          << start.position.transpose();
    }
  }
}

TEST(RunSimulation, SwsOneComparesTwoSamplesFromOnePosition) {
  // With one-sample windows the robot only steps after each comparison, so
  // both compared samples are taken at the same spot. A static noise-free
  // target then always produces a tie and the robot never turns.
  WorldConfig w = staticTargetWorld(Vec2(20, 80), Pose2d(50, 50, 0), hotCold(1));
  w.duration_s = 100.0;
  const auto r = runSimulation(w);
  for (const auto& rec : r.trace) {
    ASSERT_TRUE(rec.decision == "forward" || rec.decision == "idle" ||
                rec.decision.rfind("replay", 0) == 0 || rec.decision == "none")
        << rec.decision;
    ASSERT_EQ(rec.robot.heading, 0.0);
  }
}

TEST(RunSimulation, OutOfRangeReplaysLastDecision) {
  // Target behind a robot that is about to leave range while heading away.
  WorldConfig w = staticTargetWorld(Vec2(0, 50), Pose2d(99, 50, 0), hotCold(4));
  w.width_m = 300.0;
  w.duration_s = 5.0;
  const auto r = runSimulation(w);
  ASSERT_TRUE(r.trace[0].in_range);
  EXPECT_EQ(r.trace[0].decision, "forward");
  for (std::size_t i = 1; i < r.trace.size(); ++i) {
    EXPECT_FALSE(r.trace[i].in_range);
    EXPECT_EQ(r.trace[i].decision, "replay:forward");
    EXPECT_NEAR(r.trace[i].robot.position.x(), 100.0 + static_cast<double>(i), 1e-9);
  }
}

TEST(RunSimulation, OutOfRangeWithoutHistoryStaysPut) {
  WorldConfig w = staticTargetWorld(Vec2(0, 0), Pose2d(150, 0, 0), hotCold(4));
  w.width_m = 200.0;
  w.duration_s = 5.0;
  const auto r = runSimulation(w);
  for (const auto& rec : r.trace) {
    EXPECT_EQ(rec.decision, "none");
    EXPECT_EQ(rec.robot.position, Vec2(150, 0));
  }
}

TEST(RunSimulation, RobotMayLeaveBoundsTargetMayNot) {
  // A long first window keeps the robot walking straight past the edge.
  HotColdConfig hc;
  hc.sws = 10;
  WorldConfig w = staticTargetWorld(Vec2(20, 50), Pose2d(95, 50, 0), hc);
  w.duration_s = 5.0;
  const auto r = runSimulation(w);
  EXPECT_GT(r.trace.back().robot.position.x(), 100.0);

  WorldConfig rw;
  rw.duration_s = 2000.0;
  rw.target_speed_kmh = 30.0;
  const auto moving = runSimulation(rw);
  for (const auto& rec : moving.trace) ASSERT_TRUE(rw.bounds().contains(rec.target));
}

TEST(RunSimulation, DeterministicForSeed) {
  WorldConfig w;
  w.channel.shadowing_sigma_db = 3.0;
  w.seed = 77;
  const auto a = runSimulation(w);
  const auto b = runSimulation(w);
  ASSERT_EQ(a.trace.size(), b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    ASSERT_EQ(a.trace[i].robot.position, b.trace[i].robot.position);
    ASSERT_EQ(a.trace[i].rssi_dbm, b.trace[i].rssi_dbm);
    ASSERT_EQ(a.trace[i].decision, b.trace[i].decision);
  }
  w.seed = 78;
  const auto c = runSimulation(w);
  EXPECT_NE(a.trace[10].target, c.trace[10].target);
}

TEST(RunSimulation, HaltCyclesMatchThreshold) {
  WorldConfig w;
  w.channel.shadowing_sigma_db = 2.0;
  const auto r = runSimulation(w);
  for (const auto& rec : r.trace)
    ASSERT_EQ(rec.in_halt, rec.in_range && rec.rssi_dbm > w.haltThresholdDbm());
}

TEST(RandomWaypoint, StepsTowardWaypoint) {
  Rng rng(1);
  TargetState t;
  t.pose = Pose2d(10, 10, 0);
  t.waypoint = Vec2(20, 10);
  const TargetState next = randomWaypointStep(t, Rect{Vec2(0, 0), Vec2(100, 100)}, 0.5, rng);
  EXPECT_NEAR(next.pose.position.x(), 10.5, 1e-12);
  EXPECT_NEAR(next.pose.position.y(), 10.0, 1e-12);
  EXPECT_EQ(*next.waypoint, Vec2(20, 10));
}

TEST(RandomWaypoint, ArrivalDrawsNewWaypointInBounds) {
  Rng rng(2);
  TargetState t;
  t.pose = Pose2d(19.8, 10, 0);
  t.waypoint = Vec2(20, 10);
  const Rect bounds{Vec2(0, 0), Vec2(100, 100)};
  const TargetState next = randomWaypointStep(t, bounds, 0.5, rng);
  EXPECT_EQ(next.pose.position, Vec2(20, 10));
  ASSERT_TRUE(next.waypoint.has_value());
  EXPECT_NE(*next.waypoint, Vec2(20, 10));
  EXPECT_TRUE(bounds.contains(*next.waypoint));
}

TEST(RandomWaypoint, ZeroSpeedHoldsPosition) {
  Rng rng(3);
  TargetState t;
  t.pose = Pose2d(40, 60, 0);
  for (int i = 0; i < 100; ++i) t = randomWaypointStep(t, Rect{Vec2(0, 0), Vec2(100, 100)}, 0.0, rng);
  EXPECT_EQ(t.pose.position, Vec2(40, 60));
}

TEST(RandomWaypoint, WaypointsAreUniform) {
  Rng rng(4);
  const Rect bounds{Vec2(0, 0), Vec2(100, 100)};
  TargetState t;
  t.pose = Pose2d(50, 50, 0);
  constexpr int kBins = 10;
  constexpr int kDraws = 10'000;
  std::vector<int> counts(kBins * kBins, 0);
  for (int i = 0; i < kDraws; ++i) {
    // A step longer than the diagonal arrives every time.
    t = randomWaypointStep(t, bounds, 1000.0, rng);
    const Vec2 w = *t.waypoint;
    ASSERT_TRUE(bounds.contains(w));
    const int bx = std::min(kBins - 1, static_cast<int>(w.x() / 10.0));
    const int by = std::min(kBins - 1, static_cast<int>(w.y() / 10.0));
    ++counts[by * kBins + bx];
  }
  const double expected = static_cast<double>(kDraws) / (kBins * kBins);
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  const boost::math::chi_squared dist(kBins * kBins - 1);
  EXPECT_GT(boost::math::cdf(boost::math::complement(dist, chi2)), 0.001);
}

TEST(FixedPath, InterpolatesAndHolds) {
  const FixedPathMobility path{{{0.0, Vec2(5, 5)}, {10.0, Vec2(5, 11.5)}, {30.0, Vec2(30, 25)}}};
  EXPECT_TRUE(path.positionAt(-1.0).isApprox(Vec2(5, 5)));
  EXPECT_TRUE(path.positionAt(5.0).isApprox(Vec2(5, 8.25)));
  EXPECT_TRUE(path.positionAt(20.0).isApprox(Vec2(17.5, 18.25)));
  EXPECT_TRUE(path.positionAt(100.0).isApprox(Vec2(30, 25)));
}

TEST(ObstacleAvoidance, Rules) {
  const auto both = obstacleAvoidance(20, 20);
  ASSERT_TRUE(both.has_value());
  EXPECT_DOUBLE_EQ(both->backward_m, 0.10);
  EXPECT_DOUBLE_EQ(both->rotate_deg, 45.0);

  const auto right = obstacleAvoidance(100, 20);
  ASSERT_TRUE(right.has_value());
  EXPECT_DOUBLE_EQ(right->backward_m, 0.10);
  EXPECT_DOUBLE_EQ(right->rotate_deg, 10.0);

  const auto left = obstacleAvoidance(20, 100);
  ASSERT_TRUE(left.has_value());
  EXPECT_DOUBLE_EQ(left->rotate_deg, -10.0);

  EXPECT_FALSE(obstacleAvoidance(200, 200).has_value());
  EXPECT_FALSE(obstacleAvoidance(25, 25).has_value());
}

TEST(CastRay, HitsAndMisses) {
  const std::vector<Rect> walls{{Vec2(10, -1), Vec2(11, 1)}};
  EXPECT_NEAR(castRay(Vec2(0, 0), 0.0, walls), 10.0, 1e-12);
  EXPECT_TRUE(std::isinf(castRay(Vec2(0, 0), deg2rad(180.0), walls)));
  EXPECT_TRUE(std::isinf(castRay(Vec2(0, 0), deg2rad(90.0), walls)));
  EXPECT_NEAR(castRay(Vec2(0, 0), deg2rad(5.0), walls), 10.0 / std::cos(deg2rad(5.0)), 1e-9);
}

TEST(RunSimulation, WallTriggersAvoidanceAndIsNeverCrossed) {
  WorldConfig w = staticTargetWorld(Vec2(90, 50), Pose2d(50, 50, 0), hotCold(4));
  w.obstacles.push_back({Vec2(55, 40), Vec2(56, 60)});
  w.duration_s = 30.0;
  const auto r = runSimulation(w);
  bool avoided = false;
  for (const auto& rec : r.trace) {
    avoided |= rec.decision.rfind("avoid:", 0) == 0;
    ASSERT_FALSE(w.obstacles[0].contains(rec.robot.position));
  }
  EXPECT_TRUE(avoided);
}

TEST(DeriveSeed, StreamsDiffer) {
  EXPECT_NE(deriveSeed(1, 1), deriveSeed(1, 2));
  EXPECT_NE(deriveSeed(1, 1), deriveSeed(2, 1));
  EXPECT_EQ(deriveSeed(5, 3), deriveSeed(5, 3));
}
