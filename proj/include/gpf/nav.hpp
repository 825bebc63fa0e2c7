#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

#include "gpf/frontier.hpp"
#include "gpf/geometry.hpp"
#include "gpf/gp.hpp"

namespace gpf {

struct NavConfig {
  double k_dst = 5.0;
  double k_dir = 4.0;
  double k_a = 0.3;  ///< 1/s
  double k_b = 0.6;  ///< m/(rad s)
  double k_c = 1.2;  ///< 1/s
  double v_max = 1.0;
  double w_max = 1.5;
  double goal_radius = 0.5;
  /// Half-width of the straight corridor that must be free of predicted
  /// returns before the goal or a frontier is driven to.
  double corridor = 0.35;
  /// Commands steer to the bearing nearest the target whose corridor is clear
  /// for this many metres, searching up to max_deflection either side.
  double lookahead = 2.0;
  double max_deflection = kPi;
  /// Forward speed is zeroed while the corridor straight ahead is blocked
  /// within this distance, so the robot turns on the spot instead.
  double guard_distance = 0.5;

  void validate() const;
};

struct MotionCommand {
  double v = 0.0;
  double w = 0.0;
};

/// k_dst * (range + |goal - world|) + k_dir * theta^2
double frontier_cost(const GpFrontier& f, const Vec2& goal, const NavConfig& cfg);

/// Index of the cheapest frontier; ties go to the smaller |theta|, then the
/// earlier entry. nullopt for an empty list.
std::optional<std::size_t> select_frontier(std::span<const GpFrontier> frontiers, const Vec2& goal,
                                           const NavConfig& cfg);

/// v = clamp(k_a r - k_b |theta|, 0, v_max), w = clamp(k_c theta, -w_max, w_max).
MotionCommand motion_command(double target_theta, double target_range, const NavConfig& cfg);

enum class NavMode { kArrived, kGoal, kFrontier, kRecovery };

std::string_view to_string(NavMode mode);

struct NavDecision {
  MotionCommand cmd;
  NavMode mode = NavMode::kRecovery;
  double target_theta = 0.0;
  double steer_theta = 0.0;  ///< bearing actually commanded
  double target_range = 0.0;
  double cost = 0.0;  ///< NaN unless a frontier was chosen
  std::optional<std::size_t> frontier;
  bool terminal = false;
};

/// True when no predicted return on the ground ring lies closer than `dist`
/// inside the corridor of half-width `half_width` along robot-frame bearing
/// `theta`, and the predicted range on the bearing itself exceeds `dist`.
bool corridor_clear(const PredictionGrid& grid, double theta, double dist, double half_width);

/// Bearing nearest `theta` (within +-max_deflection, on the azimuth lattice)
/// whose corridor is clear for `dist`; nullopt when there is none.
std::optional<double> clear_bearing(const PredictionGrid& grid, double theta, double dist,
                                    double half_width, double max_deflection);

/// Goal within r_oc with a clear corridor (see corridor_clear) leading to
/// it. With the default corridor 0 this is plain line of sight on the ground
/// ring.
bool goal_visible(const PredictionGrid& grid, const Pose2& pose, const Vec2& goal,
                  double corridor = 0.0);

/// One control decision from the current scan only.
NavDecision navigation_step(const PredictionGrid& grid, std::span<const GpFrontier> frontiers,
                            const Pose2& pose, const Vec2& goal, const NavConfig& cfg);

}  // namespace gpf
