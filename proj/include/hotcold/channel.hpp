#ifndef HOTCOLD_CHANNEL_HPP_
#define HOTCOLD_CHANNEL_HPP_

#include <random>

#include "hotcold/geometry.hpp"

namespace hotcold {

/// Random engine used by every stochastic component. One engine per stream;
/// streams are never shared between simulation runs.
using Rng = std::mt19937_64;

constexpr double kSpeedOfLight = 299'792'458.0;  // m/s

/// Distances below this are clamped before evaluating the log-distance model.
constexpr double kMinChannelDistance = 0.1;  // m

/// Link parameters of the log-distance path loss model with log-normal
/// shadowing. Defaults are the reference simulation settings (2.4 GHz,
/// 0 dBm transmitter, 2 dBi receiver antenna, n = 2.8, -94 dBm sensitivity).
struct ChannelParams {
  double tx_power_dbm = 0.0;
  double tx_gain_dbi = 0.0;
  double rx_gain_dbi = 2.0;
  double frequency_hz = 2.4e9;
  double path_loss_exponent = 2.8;
  double shadowing_sigma_db = 0.0;
  double rx_sensitivity_dbm = -94.0;

  /// Transmit power plus both antenna gains.
  double linkBudgetDbm() const { return tx_power_dbm + tx_gain_dbi + rx_gain_dbi; }

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;
};

struct RssiReading {
  double value_dbm = 0.0;
  bool in_range = false;
};

/// Distance independent part of the path loss: 20 log f + 20 log(4 pi / c).
double frequencyLossDb(const ChannelParams& params);

/// PL = 10 n log10(d) + 20 log10(f) + 20 log10(4 pi / c) + X_g.
/// Throws std::domain_error for d below kMinChannelDistance.
double pathLoss(double distance_m, const ChannelParams& params, double shadow_db);

/// Zero-mean normal deviate with standard deviation `sigma_db`. A zero sigma
/// returns exactly 0 without consuming the stream.
template <typename Urbg>
double sampleShadowing(Urbg& rng, double sigma_db) {
  if (sigma_db == 0.0) return 0.0;
  std::normal_distribution<double> normal(0.0, sigma_db);
  return normal(rng);
}

/// Received power for a given shadowing sample; distance is clamped to
/// kMinChannelDistance.
RssiReading rssiWithShadow(double distance_m, const ChannelParams& params, double shadow_db);

/// Noise-free received power at the given distance.
double noiselessRssi(double distance_m, const ChannelParams& params);

/// One broadcast from the target: draws one shadowing sample from `rng`.
template <typename Urbg>
RssiReading rssi(const Vec2& target, const Vec2& robot, const ChannelParams& params, Urbg& rng) {
  const double shadow = sampleShadowing(rng, params.shadowing_sigma_db);
  return rssiWithShadow(distance(target, robot), params, shadow);
}

/// Inverts the noise-free model: the distance at which the mean RSSI equals
/// `value_dbm`.
double invertRssiToDistance(double value_dbm, const ChannelParams& params);

/// Distance at which the noise-free RSSI equals the receiver sensitivity.
double maxRange(const ChannelParams& params);

}  // namespace hotcold

#endif  // HOTCOLD_CHANNEL_HPP_
