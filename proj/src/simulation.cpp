#include "hotcold/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace hotcold {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Vec2 uniformPoint(const Rect& bounds, Rng& rng) {
  std::uniform_real_distribution<double> ux(bounds.min.x(), bounds.max.x());
  std::uniform_real_distribution<double> uy(bounds.min.y(), bounds.max.y());
  const double x = ux(rng);
  const double y = uy(rng);
  return {x, y};
}

Vec2 clampTo(const Rect& bounds, const Vec2& p) {
  return p.cwiseMax(bounds.min).cwiseMin(bounds.max);
}

constexpr double kObstacleClearanceM = 0.01;
constexpr double kSonarHalfAngleDeg = 30.0;

}  // namespace

std::uint64_t deriveSeed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) + stream);
}

Vec2 FixedPathMobility::positionAt(double time_s) const {
  if (waypoints.empty()) throw std::logic_error("fixed path without waypoints");
  if (time_s <= waypoints.front().time_s) return waypoints.front().position;
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    const auto& a = waypoints[i - 1];
    const auto& b = waypoints[i];
    if (time_s <= b.time_s) {
      const double u = (time_s - a.time_s) / (b.time_s - a.time_s);
      return a.position + u * (b.position - a.position);
    }
  }
  return waypoints.back().position;
}

std::string trackerName(const TrackerConfig& tracker) {
  return std::visit(Overloaded{[](const HotColdConfig&) { return std::string("hotcold"); },
                               [](const TrilaterationConfig&) {
                                 return std::string("trilateration");
                               },
                               [](const StaticControl&) { return std::string("control"); }},
                    tracker);
}

void WorldConfig::validate() const {
  if (!(width_m > 0.0 && height_m > 0.0))
    throw std::invalid_argument("world: space dimensions must be > 0");
  if (!(cycle_period_s > 0.0)) throw std::invalid_argument("world: cycle period must be > 0");
  if (!(duration_s >= 0.0)) throw std::invalid_argument("world: duration must be >= 0");
  const double cycles = duration_s / cycle_period_s;
  if (std::abs(cycles - std::round(cycles)) > 1e-9)
    throw std::invalid_argument("world: duration must be a multiple of the cycle period");
  if (!(robot_speed_kmh >= 0.0 && target_speed_kmh >= 0.0))
    throw std::invalid_argument("world: speeds must be >= 0");
  if (!(halt_distance_m > 0.0)) throw std::invalid_argument("world: halt distance must be > 0");
  channel.validate();
  if (const auto* fixed = std::get_if<FixedPathMobility>(&mobility)) {
    if (fixed->waypoints.empty())
      throw std::invalid_argument("world: fixed path needs at least one waypoint");
    for (std::size_t i = 1; i < fixed->waypoints.size(); ++i)
      if (!(fixed->waypoints[i].time_s > fixed->waypoints[i - 1].time_s))
        throw std::invalid_argument("world: fixed path times must increase");
  }
  if (!robot_start.position.allFinite()) throw std::invalid_argument("world: robot start");
  for (const auto& r : obstacles)
    if (!(r.min.array() <= r.max.array()).all())
      throw std::invalid_argument("world: obstacle rectangle min must not exceed max");
}

int WorldConfig::totalCycles() const {
  return static_cast<int>(std::llround(duration_s / cycle_period_s));
}

double WorldConfig::haltThresholdDbm() const {
  return halt_threshold_dbm ? *halt_threshold_dbm : noiselessRssi(halt_distance_m, channel);
}

double MetricsReport::percentInRange() const {
  return total_cycles == 0 ? 0.0 : 100.0 * cycles_in_range / total_cycles;
}

double MetricsReport::percentInHalt() const {
  return total_cycles == 0 ? 0.0 : 100.0 * cycles_in_halt / total_cycles;
}

MetricsReport computeMetrics(const std::vector<TraceRecord>& trace) {
  MetricsReport m;
  m.total_cycles = static_cast<int>(trace.size());
  if (trace.empty()) {
    m.average_distance_m = std::numeric_limits<double>::quiet_NaN();
    return m;
  }
  double sum = 0.0;
  for (const auto& rec : trace) {
    sum += distance(rec.robot.position, rec.target);
    m.cycles_in_range += rec.in_range ? 1 : 0;
    m.cycles_in_halt += rec.in_halt ? 1 : 0;
  }
  m.average_distance_m = sum / static_cast<double>(trace.size());
  return m;
}

TargetState randomWaypointStep(const TargetState& target, const Rect& bounds, double step_m,
                               Rng& rng) {
  TargetState next = target;
  if (!next.waypoint) next.waypoint = uniformPoint(bounds, rng);
  if (step_m <= 0.0) return next;

  const Vec2 to_wp = *next.waypoint - next.pose.position;
  const double remaining = to_wp.norm();
  if (remaining <= step_m) {
    if (remaining > 0.0) next.pose = Pose2d(*next.waypoint, std::atan2(to_wp.y(), to_wp.x()));
    next.waypoint = uniformPoint(bounds, rng);
  } else {
    next.pose = Pose2d(next.pose.position + (step_m / remaining) * to_wp,
                       std::atan2(to_wp.y(), to_wp.x()));
  }
  next.pose.position = clampTo(bounds, next.pose.position);
  return next;
}

std::optional<AvoidanceManeuver> obstacleAvoidance(double left_cm, double right_cm) {
  const bool left_blocked = left_cm < kObstacleTriggerCm;
  const bool right_blocked = right_cm < kObstacleTriggerCm;
  if (left_blocked && right_blocked) return AvoidanceManeuver{0.10, 45.0};
  if (right_blocked) return AvoidanceManeuver{0.10, 10.0};
  if (left_blocked) return AvoidanceManeuver{0.10, -10.0};
  return std::nullopt;
}

double castRay(const Vec2& origin, double heading, const std::vector<Rect>& obstacles) {
  const Vec2 dir(std::cos(heading), std::sin(heading));
  double best = std::numeric_limits<double>::infinity();
  for (const auto& r : obstacles) {
    if (r.contains(origin)) return 0.0;
    double t_near = -std::numeric_limits<double>::infinity();
    double t_far = std::numeric_limits<double>::infinity();
    bool miss = false;
    for (int axis = 0; axis < 2 && !miss; ++axis) {
      if (std::abs(dir(axis)) < 1e-15) {
        if (origin(axis) < r.min(axis) || origin(axis) > r.max(axis)) miss = true;
        continue;
      }
      double t1 = (r.min(axis) - origin(axis)) / dir(axis);
      double t2 = (r.max(axis) - origin(axis)) / dir(axis);
      if (t1 > t2) std::swap(t1, t2);
      t_near = std::max(t_near, t1);
      t_far = std::min(t_far, t2);
      if (t_near > t_far) miss = true;
    }
    if (!miss && t_far >= 0.0 && t_near >= 0.0) best = std::min(best, t_near);
  }
  return best;
}

Simulation::Simulation(WorldConfig config) : config_(std::move(config)) {
  config_.validate();
  total_cycles_ = config_.totalCycles();

  state_.channel_rng.seed(deriveSeed(config_.seed, 1));
  state_.mobility_rng.seed(deriveSeed(config_.seed, 2));
  state_.robot = config_.robot_start;

  const Rect bounds = config_.bounds();
  std::visit(Overloaded{[&](const RandomWaypointMobility&) {
                          const Vec2 start = config_.target_start
                                                 ? *config_.target_start
                                                 : uniformPoint(bounds, state_.mobility_rng);
                          state_.target.pose = Pose2d(clampTo(bounds, start), 0.0);
                        },
                        [&](const FixedPathMobility& path) {
                          state_.target.pose = Pose2d(clampTo(bounds, path.positionAt(0.0)), 0.0);
                        },
                        [&](const StaticMobility& fixed) {
                          state_.target.pose = Pose2d(clampTo(bounds, fixed.position), 0.0);
                        }},
             config_.mobility);

  const double threshold = config_.haltThresholdDbm();
  const double step = config_.robotStepM();
  std::visit(Overloaded{[&](HotColdConfig cfg) {
                          cfg.halt_threshold_dbm = threshold;
                          cfg.step_size_m = step;
                          state_.tracker.emplace<HotColdTracker>(cfg);
                        },
                        [&](TrilaterationConfig cfg) {
                          cfg.halt_threshold_dbm = threshold;
                          cfg.step_size_m = step;
                          state_.tracker.emplace<TrilaterationTracker>(cfg);
                        },
                        [&](const StaticControl&) { state_.tracker.emplace<std::monostate>(); }},
             config_.tracker);

  state_.trace.reserve(static_cast<std::size_t>(total_cycles_));
}

void Simulation::moveTarget() {
  const Rect bounds = config_.bounds();
  const double next_time = state_.time_s + config_.cycle_period_s;
  std::visit(Overloaded{[&](const RandomWaypointMobility&) {
                          state_.target = randomWaypointStep(state_.target, bounds,
                                                             config_.targetStepM(),
                                                             state_.mobility_rng);
                        },
                        [&](const FixedPathMobility& path) {
                          const Vec2 next = clampTo(bounds, path.positionAt(next_time));
                          const Vec2 delta = next - state_.target.pose.position;
                          const double heading = delta.norm() > 0.0
                                                     ? std::atan2(delta.y(), delta.x())
                                                     : state_.target.pose.heading;
                          state_.target.pose = Pose2d(next, heading);
                        },
                        [](const StaticMobility&) {}},
             config_.mobility);
}

void Simulation::forward(double step_m) {
  if (!config_.obstacles.empty()) {
    const double hit = castRay(state_.robot.position, state_.robot.heading, config_.obstacles);
    step_m = std::min(step_m, std::max(0.0, hit - kObstacleClearanceM));
  }
  state_.robot = advance(state_.robot, step_m);
}

void Simulation::execute(const TrackerDecision& decision) {
  switch (decision.kind) {
    case TrackerDecision::Kind::kHalt:
      return;
    case TrackerDecision::Kind::kRotateThenMove:
      state_.robot = rotate(state_.robot, deg2rad(decision.angle_deg));
      [[fallthrough]];
    case TrackerDecision::Kind::kMoveForward:
      forward(config_.robotStepM());
      return;
  }
}

void Simulation::step() {
  if (done()) return;
  moveTarget();

  const RssiReading reading = rssi(state_.target.pose.position, state_.robot.position,
                                   config_.channel, state_.channel_rng);
  const bool in_halt = reading.in_range && reading.value_dbm > config_.haltThresholdDbm();

  std::optional<TrackerDecision> decision;
  std::string label;
  if (reading.in_range) {
    std::visit(Overloaded{[&](std::monostate) { label = "none"; },
                          [&](HotColdTracker& t) {
                            decision = t.ingest(reading.value_dbm);
                            label = decision ? toString(*decision) : "idle";
                          },
                          [&](TrilaterationTracker& t) {
                            t.recordObservation(state_.robot.position, reading.value_dbm,
                                                config_.channel);
                            decision = t.decide(state_.robot, reading.value_dbm);
                            label = toString(*decision);
                          }},
               state_.tracker);
    state_.last_decision = decision;
  } else {
    decision = state_.last_decision;
    label = decision ? "replay:" + toString(*decision) : "none";
  }

  std::optional<AvoidanceManeuver> maneuver;
  if (!config_.obstacles.empty() &&
      !std::holds_alternative<std::monostate>(state_.tracker)) {
    const double left = castRay(state_.robot.position,
                                state_.robot.heading + deg2rad(kSonarHalfAngleDeg),
                                config_.obstacles);
    const double right = castRay(state_.robot.position,
                                 state_.robot.heading - deg2rad(kSonarHalfAngleDeg),
                                 config_.obstacles);
    maneuver = obstacleAvoidance(std::min(left * 100.0, kSonarCeilingCm),
                                 std::min(right * 100.0, kSonarCeilingCm));
  }

  if (maneuver) {
    state_.robot = rotate(advance(state_.robot, -maneuver->backward_m),
                          deg2rad(maneuver->rotate_deg));
    label = fmt::format("avoid:{:.3f}", maneuver->rotate_deg);
  } else if (decision) {
    execute(*decision);
  }

  ++state_.cycle;
  state_.time_s = state_.cycle * config_.cycle_period_s;

  TraceRecord rec;
  rec.time_s = state_.time_s;
  rec.robot = state_.robot;
  rec.target = state_.target.pose.position;
  rec.rssi_dbm = reading.value_dbm;
  rec.in_range = reading.in_range;
  rec.in_halt = in_halt;
  rec.decision = std::move(label);
  state_.trace.push_back(std::move(rec));
}

SimulationResult runSimulation(const WorldConfig& config) {
  Simulation sim(config);
  sim.run();
  SimulationResult result;
  result.trace = sim.state().trace;
  result.metrics = computeMetrics(result.trace);
  return result;
}

}  // namespace hotcold
