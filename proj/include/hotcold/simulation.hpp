#ifndef HOTCOLD_SIMULATION_HPP_
#define HOTCOLD_SIMULATION_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hotcold/channel.hpp"
#include "hotcold/decision.hpp"
#include "hotcold/geometry.hpp"
#include "hotcold/hot_cold_tracker.hpp"
#include "hotcold/trilateration.hpp"

namespace hotcold {

/// Axis-aligned rectangle, inclusive bounds.
struct Rect {
  Vec2 min = Vec2::Zero();
  Vec2 max = Vec2::Zero();

  bool contains(const Vec2& p) const {
    return (p.array() >= min.array()).all() && (p.array() <= max.array()).all();
  }
};

struct RandomWaypointMobility {};

struct TimedWaypoint {
  double time_s = 0.0;
  Vec2 position = Vec2::Zero();
};

/// Piecewise-linear path through timed waypoints; the target rests at the
/// first point before its time and at the last point afterwards.
struct FixedPathMobility {
  std::vector<TimedWaypoint> waypoints;

  Vec2 positionAt(double time_s) const;
};

struct StaticMobility {
  Vec2 position = Vec2::Zero();
};

using Mobility = std::variant<RandomWaypointMobility, FixedPathMobility, StaticMobility>;

/// Robot never moves; the reference control case.
struct StaticControl {};

using TrackerConfig = std::variant<HotColdConfig, TrilaterationConfig, StaticControl>;

std::string trackerName(const TrackerConfig& tracker);

struct WorldConfig {
  double width_m = 100.0;
  double height_m = 100.0;
  double duration_s = 1000.0;
  double cycle_period_s = 0.5;
  double robot_speed_kmh = 7.2;
  double target_speed_kmh = 3.6;
  double halt_distance_m = 3.0;
  /// When unset the halt threshold is the noise-free RSSI at halt_distance_m.
  std::optional<double> halt_threshold_dbm;
  ChannelParams channel;
  TrackerConfig tracker = HotColdConfig{};
  Mobility mobility = RandomWaypointMobility{};
  std::vector<Rect> obstacles;
  Pose2d robot_start{50.0, 50.0, 0.0};
  /// Random-waypoint start; drawn uniformly in the space when unset.
  std::optional<Vec2> target_start;
  std::uint64_t seed = 1;

  void validate() const;
  int totalCycles() const;
  double robotStepM() const { return robot_speed_kmh / 3.6 * cycle_period_s; }
  double targetStepM() const { return target_speed_kmh / 3.6 * cycle_period_s; }
  double haltThresholdDbm() const;
  Rect bounds() const { return {Vec2::Zero(), Vec2(width_m, height_m)}; }
};

struct TraceRecord {
  double time_s = 0.0;
  Pose2d robot;
  Vec2 target = Vec2::Zero();
  double rssi_dbm = 0.0;
  bool in_range = false;
  bool in_halt = false;
  std::string decision;
};

struct MetricsReport {
  double average_distance_m = 0.0;  // NaN when there are no cycles
  int cycles_in_range = 0;
  int cycles_in_halt = 0;
  int total_cycles = 0;

  double percentInRange() const;
  double percentInHalt() const;
};

MetricsReport computeMetrics(const std::vector<TraceRecord>& trace);

struct TargetState {
  Pose2d pose;
  std::optional<Vec2> waypoint;
};

/// Moves the target one cycle towards its waypoint. Reaching the waypoint
/// within the step snaps onto it and draws the next one uniformly in
/// `bounds` (no pause).
TargetState randomWaypointStep(const TargetState& target, const Rect& bounds, double step_m,
                               Rng& rng);

struct AvoidanceManeuver {
  double backward_m = 0.10;
  double rotate_deg = 0.0;
};

constexpr double kObstacleTriggerCm = 25.0;
constexpr double kSonarCeilingCm = 255.0;

/// Ultrasonic avoidance rule on the two front sensors (cm). Both blocked:
/// back off and turn 45 degrees; right only: turn left 10; left only: turn
/// right 10.
std::optional<AvoidanceManeuver> obstacleAvoidance(double left_cm, double right_cm);

/// Distance (m) from `origin` along `heading` to the first obstacle, or
/// infinity when the ray is clear.
double castRay(const Vec2& origin, double heading, const std::vector<Rect>& obstacles);

struct WorldState {
  double time_s = 0.0;
  int cycle = 0;
  Pose2d robot;
  TargetState target;
  std::variant<std::monostate, HotColdTracker, TrilaterationTracker> tracker;
  /// Motion replayed on cycles without a usable sample.
  std::optional<TrackerDecision> last_decision;
  Rng channel_rng;
  Rng mobility_rng;
  std::vector<TraceRecord> trace;
};

/// Single-threaded world stepping at the configured cycle period.
class Simulation {
 public:
  explicit Simulation(WorldConfig config);

  /// Advances one cycle: target motion, one broadcast, tracker decision,
  /// obstacle override, trace record.
  void step();
  bool done() const { return state_.cycle >= total_cycles_; }
  void run() {
    while (!done()) step();
  }

  const WorldState& state() const { return state_; }
  const WorldConfig& config() const { return config_; }

 private:
  void moveTarget();
  void execute(const TrackerDecision& decision);
  void forward(double step_m);

  WorldConfig config_;
  WorldState state_;
  int total_cycles_ = 0;
};

struct SimulationResult {
  MetricsReport metrics;
  std::vector<TraceRecord> trace;
};

SimulationResult runSimulation(const WorldConfig& config);

/// Stream seed for sub-stream `stream` of a run seeded with `seed`.
std::uint64_t deriveSeed(std::uint64_t seed, std::uint64_t stream);

}  // namespace hotcold

#endif  // HOTCOLD_SIMULATION_HPP_
