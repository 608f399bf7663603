#ifndef HOTCOLD_HOT_COLD_TRACKER_HPP_
#define HOTCOLD_HOT_COLD_TRACKER_HPP_

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hotcold/decision.hpp"

namespace hotcold {

struct HotColdConfig {
  int sws = 4;
  double halt_threshold_dbm = -51.41;
  double rotation_angle_deg = 137.0;
  double step_size_m = 1.0;
  RotationDirection rotation_direction = RotationDirection::kCcw;

  /// Rotation applied on a Cold indication, signed by direction.
  double signedRotationDeg() const {
    return rotation_direction == RotationDirection::kCcw ? rotation_angle_deg
                                                          : -rotation_angle_deg;
  }

  void validate() const;
};

/// Mean of the indicator values in dBm (no conversion to milliwatts).
double windowAverage(std::span<const double> samples);

/// Cold (first window louder than the second) rotates; anything else,
/// including a tie, moves forward.
TrackerDecision decide(double first_average_dbm, double second_average_dbm,
                       const HotColdConfig& cfg);

/// Sample-driven Hot-Cold state machine. Two consecutive windows of `sws`
/// samples are averaged and compared. The robot steps after every in-window
/// sample except the last one of each window, and once more after the
/// comparison. A sample above the halt threshold freezes the robot for that
/// cycle; it still counts toward the window average.
class HotColdTracker {
 public:
  enum class Phase { kFillingFirst, kFillingSecond };

  explicit HotColdTracker(HotColdConfig cfg);

  /// Feeds one in-range sample. Returns the motion for this cycle, or nullopt
  /// when the robot stays put without being halted (end of the first window).
  std::optional<TrackerDecision> ingest(double rssi_dbm);

  const HotColdConfig& config() const { return cfg_; }
  Phase phase() const { return phase_; }
  bool isHalt() const { return is_halt_; }
  const std::vector<double>& firstWindow() const { return window_a_; }
  const std::vector<double>& secondWindow() const { return window_b_; }
  const std::optional<std::pair<double, double>>& lastAverages() const {
    return last_averages_;
  }

 private:
  HotColdConfig cfg_;
  std::vector<double> window_a_;
  std::vector<double> window_b_;
  Phase phase_ = Phase::kFillingFirst;
  bool is_halt_ = false;
  std::optional<std::pair<double, double>> last_averages_;
};

}  // namespace hotcold

#endif  // HOTCOLD_HOT_COLD_TRACKER_HPP_
