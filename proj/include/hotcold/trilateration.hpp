#ifndef HOTCOLD_TRILATERATION_HPP_
#define HOTCOLD_TRILATERATION_HPP_

#include <Eigen/Dense>

#include <deque>
#include <optional>
#include <span>
#include <stdexcept>

#include "hotcold/channel.hpp"
#include "hotcold/decision.hpp"
#include "hotcold/geometry.hpp"

namespace hotcold {

template <typename Scalar>
struct Observation {
  Vector2<Scalar> position;  // where the robot stood, assumed exact
  Scalar est_distance;       // range inferred from RSSI
};

/// Linearized least-squares trilateration.
///
/// Each circle |p - p_i|^2 = d_i^2 is differenced against the last one, which
/// removes the quadratic term and leaves A x = b with rows
///   A_i = [2 (x_K - x_i), 2 (y_K - y_i)]
///   b_i = d_i^2 - d_K^2 + x_K^2 - x_i^2 + y_K^2 - y_i^2.
/// The estimate is (A^T A)^-1 A^T b. Returns nullopt (degenerate geometry)
/// when A^T A is singular or its condition number exceeds
/// `condition_threshold`. Requires at least three observations.
template <typename Scalar>
std::optional<Vector2<Scalar>> estimateTarget(std::span<const Observation<Scalar>> observations,
                                              Scalar condition_threshold = Scalar(1e6)) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, 2>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;

  if (observations.size() < 3)
    throw std::invalid_argument("estimateTarget: at least three observations required");

  const Eigen::Index rows = static_cast<Eigen::Index>(observations.size()) - 1;
  const auto& last = observations.back();
  const Vector2<Scalar>& pk = last.position;

  Matrix a(rows, 2);
  Vector b(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& obs = observations[static_cast<std::size_t>(i)];
    const Vector2<Scalar>& pi = obs.position;
    a.row(i) = Scalar(2) * (pk - pi).transpose();
    b(i) = obs.est_distance * obs.est_distance - last.est_distance * last.est_distance +
           pk.squaredNorm() - pi.squaredNorm();
  }

  const Matrix2 normal = a.transpose() * a;
  Eigen::SelfAdjointEigenSolver<Matrix2> eig(normal, Eigen::EigenvaluesOnly);
  const Scalar lambda_min = eig.eigenvalues()(0);
  const Scalar lambda_max = eig.eigenvalues()(1);
  if (!(lambda_min > Scalar(0)) || lambda_max / lambda_min > condition_threshold)
    return std::nullopt;

  return normal.ldlt().solve(a.transpose() * b);
}

struct TrilaterationConfig {
  int k_observations = 3;
  double min_spacing_m = 0.5;
  double condition_threshold = 1e6;
  double probe_turn_deg = 90.0;
  double halt_threshold_dbm = -51.41;
  double step_size_m = 1.0;

  void validate() const;
};

/// Reference tracker: keeps the last K range observations taken at its own
/// positions, re-solves after every new observation and steers straight at
/// the estimate.
///
/// While the window is still filling it drives forward. When a full window
/// is degenerate (a straight path makes every observation collinear) it turns
/// by `probe_turn_deg` so the next observation breaks the collinearity.
class TrilaterationTracker {
 public:
  explicit TrilaterationTracker(TrilaterationConfig cfg);

  /// Appends an observation unless it lies within min_spacing of a stored
  /// one, evicts the oldest beyond K and re-solves. Returns whether the
  /// observation was kept.
  bool recordObservation(const Vec2& robot_pos, double rssi_dbm, const ChannelParams& params);

  TrackerDecision decide(const Pose2d& pose, double latest_rssi_dbm) const;

  const std::deque<Observation<double>>& observations() const { return observations_; }
  const std::optional<Vec2>& currentEstimate() const { return estimate_; }
  /// True when the latest solve over a full window succeeded.
  bool estimateFresh() const { return fresh_; }
  const TrilaterationConfig& config() const { return cfg_; }

 private:
  TrilaterationConfig cfg_;
  std::deque<Observation<double>> observations_;
  std::optional<Vec2> estimate_;
  bool fresh_ = false;
};

}  // namespace hotcold

#endif  // HOTCOLD_TRILATERATION_HPP_
