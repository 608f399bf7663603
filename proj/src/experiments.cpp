#include "hotcold/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

namespace hotcold {

std::string toString(TrackerKind kind) {
  switch (kind) {
    case TrackerKind::kHotCold:
      return "hotcold";
    case TrackerKind::kTrilateration:
      return "trilateration";
    case TrackerKind::kControl:
      return "control";
  }
  return "unknown";
}

TrackerKind parseTrackerKind(const std::string& name) {
  if (name == "hotcold") return TrackerKind::kHotCold;
  if (name == "trilateration") return TrackerKind::kTrilateration;
  if (name == "control") return TrackerKind::kControl;
  throw std::invalid_argument("unknown tracker '" + name + "'");
}

void ExperimentGrid::validate() const {
  if (sigma_values.empty()) throw std::invalid_argument("grid: sigma_values is empty");
  if (trackers.empty()) throw std::invalid_argument("grid: trackers is empty");
  if (runs_per_point < 1) throw std::invalid_argument("grid: runs_per_point must be >= 1");
  const bool has_hotcold =
      std::find(trackers.begin(), trackers.end(), TrackerKind::kHotCold) != trackers.end();
  if (has_hotcold && sws_values.empty()) throw std::invalid_argument("grid: sws_values is empty");
  for (int sws : sws_values)
    if (sws < 1) throw std::invalid_argument("grid: sws values must be >= 1");
  for (double sigma : sigma_values)
    if (!(sigma >= 0.0)) throw std::invalid_argument("grid: sigma values must be >= 0");
}

std::string GridPoint::seriesName() const {
  if (tracker == TrackerKind::kHotCold) return fmt::format("hotcold_sws{}", sws);
  return toString(tracker);
}

const PointResult* GridResult::find(TrackerKind tracker, int sws, double sigma_db) const {
  for (const auto& p : points) {
    if (p.point.tracker != tracker) continue;
    if (tracker == TrackerKind::kHotCold && p.point.sws != sws) continue;
    if (std::abs(p.point.sigma_db - sigma_db) > 1e-12) continue;
    return &p;
  }
  return nullptr;
}

std::vector<GridPoint> enumeratePoints(const ExperimentGrid& grid) {
  std::vector<GridPoint> points;
  for (TrackerKind kind : grid.trackers) {
    if (kind == TrackerKind::kHotCold) {
      for (int sws : grid.sws_values)
        for (double sigma : grid.sigma_values) points.push_back({kind, sws, sigma});
    } else {
      for (double sigma : grid.sigma_values) points.push_back({kind, 0, sigma});
    }
  }
  return points;
}

std::uint64_t runSeed(std::uint64_t master_seed, int run) {
  return deriveSeed(master_seed, 1000 + static_cast<std::uint64_t>(run));
}

WorldConfig worldForPoint(const ExperimentGrid& grid, const GridPoint& point,
                          std::uint64_t seed) {
  WorldConfig world = grid.base;
  world.channel.shadowing_sigma_db = point.sigma_db;
  world.seed = seed;
  switch (point.tracker) {
    case TrackerKind::kHotCold: {
      HotColdConfig cfg = grid.hotcold;
      cfg.sws = point.sws;
      world.tracker = cfg;
      break;
    }
    case TrackerKind::kTrilateration:
      world.tracker = grid.trilateration;
      break;
    case TrackerKind::kControl:
      world.tracker = StaticControl{};
      break;
  }
  return world;
}

KpiStats summarize(const std::vector<double>& values) {
  KpiStats s;
  if (values.empty()) {
    s.mean = std::nan("");
    return s;
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
  }
  return s;
}

GridResult runGrid(const ExperimentGrid& grid) {
  grid.validate();
  const std::vector<GridPoint> points = enumeratePoints(grid);
  const int runs = grid.runs_per_point;

  GridResult result;
  result.points.resize(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto& pr = result.points[i];
    pr.point = points[i];
    pr.runs.resize(static_cast<std::size_t>(runs));
    pr.errors.resize(static_cast<std::size_t>(runs));
    for (int r = 0; r < runs; ++r) pr.seeds.push_back(runSeed(grid.master_seed, r));
  }

  const int tasks = static_cast<int>(points.size()) * runs;
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int task = next++; task < tasks; task = next++) {
      auto& pr = result.points[static_cast<std::size_t>(task / runs)];
      const auto r = static_cast<std::size_t>(task % runs);
      try {
        const WorldConfig world = worldForPoint(grid, pr.point, pr.seeds[r]);
        Simulation sim(world);
        sim.run();
        pr.runs[r] = computeMetrics(sim.state().trace);
      } catch (const std::exception& e) {
        pr.errors[r] = e.what();
      }
    }
  };

  unsigned workers = grid.workers ? grid.workers : std::thread::hardware_concurrency();
  workers = std::clamp(workers, 1u, static_cast<unsigned>(std::max(tasks, 1)));
  {
    std::vector<std::jthread> pool;
    for (unsigned i = 1; i < workers; ++i) pool.emplace_back(worker);
    worker();
  }

  for (auto& pr : result.points) {
    std::vector<double> dist, range, halt;
    for (const auto& m : pr.runs) {
      if (!m) continue;
      dist.push_back(m->average_distance_m);
      range.push_back(m->percentInRange());
      halt.push_back(m->percentInHalt());
    }
    pr.average_distance = summarize(dist);
    pr.percent_in_range = summarize(range);
    pr.percent_in_halt = summarize(halt);
  }
  return result;
}

ScenarioPreset parseScenario(const std::string& name) {
  if (name == "scenario1" || name == "1") return ScenarioPreset::kStaticTarget;
  if (name == "scenario2" || name == "2") return ScenarioPreset::kStraightLine;
  if (name == "scenario3" || name == "3") return ScenarioPreset::kZigzag;
  throw std::invalid_argument("unknown scenario '" + name + "'");
}

std::string toString(ScenarioPreset preset) {
  return fmt::format("scenario{}", static_cast<int>(preset));
}

WorldConfig scenarioWorld(ScenarioPreset preset, double sigma_db, std::uint64_t seed) {
  WorldConfig w;
  w.duration_s = 60.0;
  w.cycle_period_s = 0.5;
  w.robot_speed_kmh = 10.0;
  w.target_speed_kmh = 5.0;
  w.halt_distance_m = 3.0;
  w.channel.shadowing_sigma_db = sigma_db;
  w.seed = seed;
  HotColdConfig hc;
  hc.sws = 4;
  hc.rotation_angle_deg = 137.0;
  w.tracker = hc;

  switch (preset) {
    case ScenarioPreset::kStaticTarget:
      w.mobility = StaticMobility{Vec2(5.0, 5.0)};
      w.robot_start = Pose2d(30.0, 35.0, deg2rad(50.0));
      break;
    case ScenarioPreset::kStraightLine:
      // Timed waypoints win over the nominal walking speed.
      w.mobility = FixedPathMobility{{{0.0, Vec2(5.0, 5.0)}, {28.0, Vec2(50.0, 35.0)}}};
      w.robot_start = Pose2d(30.0, 5.0, 0.0);
      break;
    case ScenarioPreset::kZigzag:
      w.mobility = FixedPathMobility{{{0.0, Vec2(5.0, 5.0)},
                                      {10.0, Vec2(5.0, 11.5)},
                                      {30.0, Vec2(30.0, 25.0)},
                                      {50.5, Vec2(5.0, 35.0)}}};
      w.robot_start = Pose2d(30.0, 5.0, 0.0);
      break;
  }
  return w;
}

ScenarioResult runScenario(ScenarioPreset preset, int iterations, double sigma_db,
                           std::uint64_t master_seed) {
  if (iterations < 1) throw std::invalid_argument("scenario: iterations must be >= 1");
  ScenarioResult out;
  out.preset = preset;
  for (int it = 0; it < iterations; ++it) {
    Simulation sim(scenarioWorld(preset, sigma_db, runSeed(master_seed, it)));
    std::vector<ScenarioSample> samples;
    samples.push_back(
        {0.0, distance(sim.state().robot.position, sim.state().target.pose.position)});
    sim.run();
    for (const auto& rec : sim.state().trace)
      samples.push_back({rec.time_s, distance(rec.robot.position, rec.target)});
    out.iterations.push_back(std::move(samples));
  }
  return out;
}

}  // namespace hotcold
