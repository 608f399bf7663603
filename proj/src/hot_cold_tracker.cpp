#include "hotcold/hot_cold_tracker.hpp"

#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hotcold {

void HotColdConfig::validate() const {
  if (sws < 1) throw std::invalid_argument("hotcold: sws must be >= 1");
  if (!(rotation_angle_deg > 0.0 && rotation_angle_deg < 360.0))
    throw std::invalid_argument("hotcold: rotation angle must be in (0, 360)");
  if (!(step_size_m > 0.0)) throw std::invalid_argument("hotcold: step size must be > 0");
  if (!std::isfinite(halt_threshold_dbm))
    throw std::invalid_argument("hotcold: halt threshold must be finite");
}

double windowAverage(std::span<const double> samples) {
  assert(!samples.empty() && "window average of an empty window");
  return std::accumulate(samples.begin(), samples.end(), 0.0) /
         static_cast<double>(samples.size());
}

TrackerDecision decide(double first_average_dbm, double second_average_dbm,
                       const HotColdConfig& cfg) {
  if (first_average_dbm > second_average_dbm)
    return TrackerDecision::rotateThenMove(cfg.signedRotationDeg());
  return TrackerDecision::moveForward();
}

HotColdTracker::HotColdTracker(HotColdConfig cfg) : cfg_(cfg) {
  cfg_.validate();
  window_a_.reserve(cfg_.sws);
  window_b_.reserve(cfg_.sws);
}

std::optional<TrackerDecision> HotColdTracker::ingest(double rssi_dbm) {
  is_halt_ = false;
  auto& window = phase_ == Phase::kFillingFirst ? window_a_ : window_b_;
  window.push_back(rssi_dbm);
  const bool window_full = static_cast<int>(window.size()) == cfg_.sws;

  std::optional<TrackerDecision> out;
  if (rssi_dbm > cfg_.halt_threshold_dbm) {
    is_halt_ = true;
    out = TrackerDecision::halt();
  } else if (!window_full) {
    out = TrackerDecision::moveForward();
  }

  if (!window_full) return out;

  if (phase_ == Phase::kFillingFirst) {
    phase_ = Phase::kFillingSecond;
    return out;
  }

  const double first = windowAverage(window_a_);
  const double second = windowAverage(window_b_);
  last_averages_ = std::make_pair(first, second);
  window_a_.clear();
  window_b_.clear();
  phase_ = Phase::kFillingFirst;
  if (!is_halt_) out = decide(first, second, cfg_);
  return out;
}

}  // namespace hotcold
