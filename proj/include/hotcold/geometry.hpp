#ifndef HOTCOLD_GEOMETRY_HPP_
#define HOTCOLD_GEOMETRY_HPP_

#include <Eigen/Core>

#include <cmath>
#include <numbers>

namespace hotcold {

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;

using Vec2 = Vector2<double>;

template <typename Scalar>
constexpr Scalar kTwoPi = Scalar(2) * std::numbers::pi_v<Scalar>;

template <typename Scalar>
constexpr Scalar deg2rad(Scalar deg) {
  return deg * std::numbers::pi_v<Scalar> / Scalar(180);
}

template <typename Scalar>
constexpr Scalar rad2deg(Scalar rad) {
  return rad * Scalar(180) / std::numbers::pi_v<Scalar>;
}

/// Wraps an angle into [0, 2*pi).
template <typename Scalar>
Scalar wrapTwoPi(Scalar angle) {
  Scalar wrapped = std::fmod(angle, kTwoPi<Scalar>);
  if (wrapped < Scalar(0)) wrapped += kTwoPi<Scalar>;
  // fmod of a tiny negative value plus 2*pi can round up to 2*pi itself.
  if (wrapped >= kTwoPi<Scalar>) wrapped = Scalar(0);
  return wrapped;
}

/// Wraps an angle into (-pi, pi].
template <typename Scalar>
Scalar wrapPi(Scalar angle) {
  Scalar wrapped = wrapTwoPi(angle);
  if (wrapped > std::numbers::pi_v<Scalar>) wrapped -= kTwoPi<Scalar>;
  return wrapped;
}

/// Planar pose. Heading is measured counter-clockwise from +x and is kept in
/// [0, 2*pi) by every operation below.
template <typename Scalar>
struct Pose {
  Vector2<Scalar> position = Vector2<Scalar>::Zero();
  Scalar heading = Scalar(0);

  Pose() = default;
  Pose(const Vector2<Scalar>& p, Scalar h) : position(p), heading(wrapTwoPi(h)) {}
  Pose(Scalar x, Scalar y, Scalar h) : position(x, y), heading(wrapTwoPi(h)) {}

  Vector2<Scalar> direction() const {
    return Vector2<Scalar>(std::cos(heading), std::sin(heading));
  }
};

using Pose2d = Pose<double>;

/// In-place rotation; positive angles turn counter-clockwise.
template <typename Scalar>
Pose<Scalar> rotate(const Pose<Scalar>& pose, Scalar angle) {
  return Pose<Scalar>(pose.position, pose.heading + angle);
}

/// Translates the pose by `step` along its heading. Negative steps move
/// backwards (used by the obstacle maneuver).
template <typename Scalar>
Pose<Scalar> advance(const Pose<Scalar>& pose, Scalar step) {
  Pose<Scalar> out = pose;
  out.position += step * pose.direction();
  return out;
}

template <typename Derived1, typename Derived2>
typename Derived1::Scalar distance(const Eigen::MatrixBase<Derived1>& a,
                                   const Eigen::MatrixBase<Derived2>& b) {
  return (a - b).norm();
}

/// Heading (in [0, 2*pi)) of the ray from `from` towards `to`.
template <typename Derived1, typename Derived2>
typename Derived1::Scalar bearing(const Eigen::MatrixBase<Derived1>& from,
                                  const Eigen::MatrixBase<Derived2>& to) {
  const auto d = (to - from).eval();
  return wrapTwoPi(std::atan2(d.y(), d.x()));
}

}  // namespace hotcold

#endif  // HOTCOLD_GEOMETRY_HPP_
