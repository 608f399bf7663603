#include "hotcold/decision.hpp"

#include <fmt/format.h>

namespace hotcold {

std::string toString(const TrackerDecision& decision) {
  switch (decision.kind) {
    case TrackerDecision::Kind::kMoveForward:
      return "forward";
    case TrackerDecision::Kind::kHalt:
      return "halt";
    case TrackerDecision::Kind::kRotateThenMove:
      return fmt::format("rotate:{:.3f}", decision.angle_deg);
  }
  return "unknown";
}

}  // namespace hotcold
