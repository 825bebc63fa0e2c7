#pragma once

#include "gpf/geometry.hpp"
#include "gpf/nav.hpp"

namespace gpf::sim {

struct RobotState {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
  double t = 0.0;

  Pose2 pose() const { return {x, y, heading}; }
};

/// Exact unicycle motion under a constant command for dt seconds. Throws
/// InvalidInput when dt <= 0.
RobotState integrate(const RobotState& s, const MotionCommand& cmd, double dt);

}  // namespace gpf::sim
