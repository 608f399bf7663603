#ifndef HOTCOLD_DECISION_HPP_
#define HOTCOLD_DECISION_HPP_

#include <string>

namespace hotcold {

enum class RotationDirection { kCcw, kCw };

/// Motion command emitted by a tracker for one cycle.
struct TrackerDecision {
  enum class Kind { kMoveForward, kRotateThenMove, kHalt };

  Kind kind = Kind::kMoveForward;
  double angle_deg = 0.0;  // signed, CCW positive; only for kRotateThenMove

  static TrackerDecision moveForward() { return {Kind::kMoveForward, 0.0}; }
  static TrackerDecision rotateThenMove(double angle_deg) {
    return {Kind::kRotateThenMove, angle_deg};
  }
  static TrackerDecision halt() { return {Kind::kHalt, 0.0}; }

  bool operator==(const TrackerDecision&) const = default;
};

/// Stable text form used in traces: "forward", "halt", "rotate:<deg>".
std::string toString(const TrackerDecision& decision);

}  // namespace hotcold

#endif  // HOTCOLD_DECISION_HPP_
