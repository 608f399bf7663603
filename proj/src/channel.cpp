#include "hotcold/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hotcold {

void ChannelParams::validate() const {
  if (!(frequency_hz > 0.0)) throw std::invalid_argument("channel: frequency must be > 0");
  if (!(path_loss_exponent > 0.0))
    throw std::invalid_argument("channel: path loss exponent must be > 0");
  if (!(shadowing_sigma_db >= 0.0))
    throw std::invalid_argument("channel: shadowing sigma must be >= 0");
  if (!(tx_power_dbm >= rx_sensitivity_dbm))
    throw std::invalid_argument("channel: tx power must not be below rx sensitivity");
}

double frequencyLossDb(const ChannelParams& params) {
  return 20.0 * std::log10(params.frequency_hz) +
         20.0 * std::log10(4.0 * std::numbers::pi / kSpeedOfLight);
}

double pathLoss(double distance_m, const ChannelParams& params, double shadow_db) {
  if (!(distance_m >= kMinChannelDistance))
    throw std::domain_error("pathLoss: distance below the model's minimum");
  return 10.0 * params.path_loss_exponent * std::log10(distance_m) + frequencyLossDb(params) +
         shadow_db;
}

RssiReading rssiWithShadow(double distance_m, const ChannelParams& params, double shadow_db) {
  const double d = std::max(distance_m, kMinChannelDistance);
  RssiReading r;
  r.value_dbm = params.linkBudgetDbm() - pathLoss(d, params, shadow_db);
  r.in_range = r.value_dbm >= params.rx_sensitivity_dbm;
  return r;
}

double noiselessRssi(double distance_m, const ChannelParams& params) {
  return rssiWithShadow(distance_m, params, 0.0).value_dbm;
}

double invertRssiToDistance(double value_dbm, const ChannelParams& params) {
  const double exponent = (params.linkBudgetDbm() - value_dbm - frequencyLossDb(params)) /
                          (10.0 * params.path_loss_exponent);
  return std::pow(10.0, exponent);
}

double maxRange(const ChannelParams& params) {
  return invertRssiToDistance(params.rx_sensitivity_dbm, params);
}

}  // namespace hotcold
