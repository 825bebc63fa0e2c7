#include "gpf/sim/robot.hpp"

#include <cmath>

#include "gpf/errors.hpp"

namespace gpf::sim {

RobotState integrate(const RobotState& s, const MotionCommand& cmd, double dt) {
  if (!(dt > 0.0)) throw InvalidInput("integrate: dt must be > 0");
  RobotState out = s;
  const double h1 = s.heading + cmd.w * dt;
  if (std::abs(cmd.w) < 1e-9) {
    out.x += cmd.v * dt * std::cos(s.heading);
    out.y += cmd.v * dt * std::sin(s.heading);
  } else {
    const double rho = cmd.v / cmd.w;
    out.x += rho * (std::sin(h1) - std::sin(s.heading));
    out.y += rho * (std::cos(s.heading) - std::cos(h1));
  }
  out.heading = wrap_angle(h1);
  out.t = s.t + dt;
  return out;
}

}  // namespace gpf::sim
