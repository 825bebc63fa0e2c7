#pragma once

#include <cmath>
#include <numbers>

#include <Eigen/Core>

namespace gpf {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Wraps an angle into [-pi, pi).
inline double wrap_angle(double a) {
  double w = std::fmod(a + kPi, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  w -= kPi;
  // fmod can round up to exactly +pi for inputs just below an odd multiple.
  return w >= kPi ? -kPi : w;
}

/// Planar rigid transform of the robot frame in the world frame.
struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;

  Vec2 position() const { return {x, y}; }

  Vec2 to_world(const Vec2& p) const {
    const double c = std::cos(heading), s = std::sin(heading);
    return {x + c * p.x() - s * p.y(), y + s * p.x() + c * p.y()};
  }

  Vec2 to_local(const Vec2& p) const {
    const double c = std::cos(heading), s = std::sin(heading);
    const double dx = p.x() - x, dy = p.y() - y;
    return {c * dx + s * dy, -s * dx + c * dy};
  }
};

}  // namespace gpf
