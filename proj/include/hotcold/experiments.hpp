#ifndef HOTCOLD_EXPERIMENTS_HPP_
#define HOTCOLD_EXPERIMENTS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hotcold/simulation.hpp"

namespace hotcold {

enum class TrackerKind { kHotCold, kTrilateration, kControl };

std::string toString(TrackerKind kind);
TrackerKind parseTrackerKind(const std::string& name);

/// Parameter grid for the comparison experiments. `base` supplies every world
/// setting not swept here; its tracker-specific settings (rotation angle,
/// trilateration window) are taken from `hotcold` and `trilateration`.
struct ExperimentGrid {
  std::vector<int> sws_values{3, 4, 5, 6, 7};
  std::vector<double> sigma_values{0, 1, 2, 3, 4, 5, 6};
  std::vector<TrackerKind> trackers{TrackerKind::kHotCold, TrackerKind::kTrilateration,
                                    TrackerKind::kControl};
  int runs_per_point = 5;
  std::uint64_t master_seed = 1;
  WorldConfig base;
  HotColdConfig hotcold;
  TrilaterationConfig trilateration;
  unsigned workers = 0;  // 0 = hardware concurrency

  void validate() const;
};

struct GridPoint {
  TrackerKind tracker = TrackerKind::kHotCold;
  int sws = 0;  // 0 for trackers without a samples window
  double sigma_db = 0.0;

  std::string seriesName() const;
};

struct KpiStats {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for a single run
};

struct PointResult {
  GridPoint point;
  std::vector<std::uint64_t> seeds;
  std::vector<std::optional<MetricsReport>> runs;  // nullopt on failure
  std::vector<std::string> errors;                 // parallel to runs
  KpiStats average_distance;
  KpiStats percent_in_range;
  KpiStats percent_in_halt;
};

struct GridResult {
  std::vector<PointResult> points;

  const PointResult* find(TrackerKind tracker, int sws, double sigma_db) const;
};

/// Points in deterministic order: tracker, then SWS (Hot-Cold only), then sigma.
std::vector<GridPoint> enumeratePoints(const ExperimentGrid& grid);

/// Seed of run `run` for any point. All points share the run seeds so every
/// tracker faces the same target path and the same unit shadowing draws.
std::uint64_t runSeed(std::uint64_t master_seed, int run);

WorldConfig worldForPoint(const ExperimentGrid& grid, const GridPoint& point,
                          std::uint64_t seed);

/// Runs every (point, run) pair on a bounded worker pool. Results do not
/// depend on scheduling. A failing run is recorded and skipped.
GridResult runGrid(const ExperimentGrid& grid);

KpiStats summarize(const std::vector<double>& values);

// ---------------------------------------------------------------------------
// Testbed scenarios
// ---------------------------------------------------------------------------

enum class ScenarioPreset { kStaticTarget = 1, kStraightLine = 2, kZigzag = 3 };

ScenarioPreset parseScenario(const std::string& name);
std::string toString(ScenarioPreset preset);

constexpr double kScenarioDefaultSigmaDb = 2.0;

/// World for one testbed iteration: 60 s, robot at 10 km/h running Hot-Cold
/// with SWS 4 and 137 degrees, target on the preset's timed path.
WorldConfig scenarioWorld(ScenarioPreset preset, double sigma_db, std::uint64_t seed);

struct ScenarioSample {
  double time_s = 0.0;
  double distance_m = 0.0;
};

struct ScenarioResult {
  ScenarioPreset preset = ScenarioPreset::kStaticTarget;
  std::vector<std::vector<ScenarioSample>> iterations;  // includes t = 0
};

ScenarioResult runScenario(ScenarioPreset preset, int iterations, double sigma_db,
                           std::uint64_t master_seed);

}  // namespace hotcold

#endif  // HOTCOLD_EXPERIMENTS_HPP_
