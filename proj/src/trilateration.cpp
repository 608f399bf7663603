#include "hotcold/trilateration.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace hotcold {

void TrilaterationConfig::validate() const {
  if (k_observations < 3) throw std::invalid_argument("trilateration: K must be >= 3");
  if (!(min_spacing_m >= 0.0))
    throw std::invalid_argument("trilateration: min spacing must be >= 0");
  if (!(condition_threshold > 1.0))
    throw std::invalid_argument("trilateration: condition threshold must be > 1");
  if (!(step_size_m > 0.0)) throw std::invalid_argument("trilateration: step size must be > 0");
}

TrilaterationTracker::TrilaterationTracker(TrilaterationConfig cfg) : cfg_(cfg) {
  cfg_.validate();
}

bool TrilaterationTracker::recordObservation(const Vec2& robot_pos, double rssi_dbm,
                                             const ChannelParams& params) {
  const bool too_close =
      std::any_of(observations_.begin(), observations_.end(), [&](const auto& obs) {
        return distance(obs.position, robot_pos) < cfg_.min_spacing_m;
      });
  if (too_close) return false;

  observations_.push_back({robot_pos, invertRssiToDistance(rssi_dbm, params)});
  while (static_cast<int>(observations_.size()) > cfg_.k_observations) observations_.pop_front();

  if (static_cast<int>(observations_.size()) == cfg_.k_observations) {
    const std::vector<Observation<double>> window(observations_.begin(), observations_.end());
    const auto solved =
        estimateTarget<double>(std::span<const Observation<double>>(window), cfg_.condition_threshold);
    fresh_ = solved.has_value();
    if (solved) estimate_ = *solved;
  }
  return true;
}

TrackerDecision TrilaterationTracker::decide(const Pose2d& pose, double latest_rssi_dbm) const {
  if (latest_rssi_dbm > cfg_.halt_threshold_dbm) return TrackerDecision::halt();
  if (static_cast<int>(observations_.size()) < cfg_.k_observations)
    return TrackerDecision::moveForward();
  if (!fresh_) return TrackerDecision::rotateThenMove(cfg_.probe_turn_deg);

  const Vec2 to_target = *estimate_ - pose.position;
  if (to_target.norm() < 1e-9) return TrackerDecision::moveForward();
  const double turn = wrapPi(bearing(pose.position, *estimate_) - pose.heading);
  return TrackerDecision::rotateThenMove(rad2deg(turn));
}

}  // namespace hotcold
