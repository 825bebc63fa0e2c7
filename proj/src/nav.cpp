#include "gpf/nav.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "gpf/errors.hpp"

namespace gpf {

void NavConfig::validate() const {
  if (!(k_dst > 0.0) || !(k_dir >= 0.0)) throw ConfigError("nav: k_dst must be > 0 and k_dir >= 0");
  if (!(k_a > 0.0) || !(k_b >= 0.0) || !(k_c > 0.0)) throw ConfigError("nav: controller gains must be positive");
  if (!(v_max > 0.0) || !(w_max > 0.0)) throw ConfigError("nav: v_max and w_max must be > 0");
  if (!(goal_radius > 0.0)) throw ConfigError("nav.goal_radius must be > 0");
  if (!(corridor >= 0.0) || !(lookahead > 0.0) || !(max_deflection >= 0.0) ||
      !(guard_distance >= 0.0))
    throw ConfigError("nav: corridor, lookahead, max_deflection and guard_distance must be non-negative");
}

double frontier_cost(const GpFrontier& f, const Vec2& goal, const NavConfig& cfg) {
  const double d_sum = f.range + (goal - f.world).norm();
  return cfg.k_dst * d_sum + cfg.k_dir * f.theta * f.theta;
}

std::optional<std::size_t> select_frontier(std::span<const GpFrontier> frontiers, const Vec2& goal,
                                           const NavConfig& cfg) {
  std::optional<std::size_t> best;
  double best_cost = 0.0;
  for (std::size_t i = 0; i < frontiers.size(); ++i) {
    const double c = frontier_cost(frontiers[i], goal, cfg);
    if (!best || c < best_cost ||
        (c == best_cost && std::abs(frontiers[i].theta) < std::abs(frontiers[*best].theta))) {
      best = i;
      best_cost = c;
    }
  }
  return best;
}

MotionCommand motion_command(double target_theta, double target_range, const NavConfig& cfg) {
  MotionCommand cmd;
  cmd.v = std::clamp(cfg.k_a * target_range - cfg.k_b * std::abs(target_theta), 0.0, cfg.v_max);
  cmd.w = std::clamp(cfg.k_c * target_theta, -cfg.w_max, cfg.w_max);
  return cmd;
}

std::string_view to_string(NavMode mode) {
  switch (mode) {
    case NavMode::kArrived: return "arrived";
    case NavMode::kGoal: return "goal";
    case NavMode::kFrontier: return "frontier";
    case NavMode::kRecovery: return "recovery";
  }
  return "unknown";
}

bool corridor_clear(const PredictionGrid& grid, double theta, double dist, double half_width) {
  if (grid.size() == 0) return true;
  if (frontier_range(grid, theta, grid.config.alpha_min) <= dist) return false;
  if (half_width <= 0.0) return true;
  const Vec2 u(std::cos(theta), std::sin(theta));
  for (int i = 0; i < grid.n_theta; ++i) {
    const double r = grid.config.r_oc - grid.mean_at(i, 0);
    if (r >= dist) continue;
    const double th = grid.config.theta_at(i);
    const Vec2 p(r * std::cos(th), r * std::sin(th));
    if (p.dot(u) > 0.0 && std::abs(u.x() * p.y() - u.y() * p.x()) < half_width) return false;
  }
  return true;
}

std::optional<double> clear_bearing(const PredictionGrid& grid, double theta, double dist,
                                    double half_width, double max_deflection) {
  if (corridor_clear(grid, theta, dist, half_width)) return theta;
  if (grid.size() == 0) return theta;
  const double step = grid.config.theta_step();
  const int steps = static_cast<int>(max_deflection / step);
  for (int k = 1; k <= steps; ++k) {
    for (const double sign : {1.0, -1.0}) {
      const double b = wrap_angle(theta + sign * k * step);
      if (corridor_clear(grid, b, dist, half_width)) return b;
    }
  }
  return std::nullopt;
}

bool goal_visible(const PredictionGrid& grid, const Pose2& pose, const Vec2& goal, double corridor) {
  const Vec2 local = pose.to_local(goal);
  const double dist = local.norm();
  if (dist > grid.config.r_oc) return false;
  return corridor_clear(grid, std::atan2(local.y(), local.x()), dist, corridor);
}

NavDecision navigation_step(const PredictionGrid& grid, std::span<const GpFrontier> frontiers,
                            const Pose2& pose, const Vec2& goal, const NavConfig& cfg) {
  NavDecision d;
  d.cost = std::numeric_limits<double>::quiet_NaN();
  const Vec2 local = pose.to_local(goal);
  const double dist = local.norm();
  if (dist <= cfg.goal_radius) {
    d.mode = NavMode::kArrived;
    d.terminal = true;
    return d;
  }
  if (goal_visible(grid, pose, goal)) {
    d.mode = NavMode::kGoal;
    d.target_theta = wrap_angle(std::atan2(local.y(), local.x()));
    d.target_range = dist;
  } else if (auto idx = select_frontier(frontiers, goal, cfg)) {
    const auto& f = frontiers[*idx];
    d.mode = NavMode::kFrontier;
    d.frontier = idx;
    d.target_theta = f.theta;
    d.target_range = f.range;
    d.cost = frontier_cost(f, goal, cfg);
  } else {
    d.mode = NavMode::kRecovery;
    d.cmd = {0.0, 0.5 * cfg.w_max};
    return d;
  }
  const double lookahead = std::min(d.target_range, cfg.lookahead);
  if (auto b = clear_bearing(grid, d.target_theta, lookahead, cfg.corridor, cfg.max_deflection)) {
    d.steer_theta = *b;
    d.cmd = motion_command(d.steer_theta, d.target_range, cfg);
    if (d.cmd.v > 0.0 && !corridor_clear(grid, 0.0, cfg.guard_distance, cfg.corridor)) d.cmd.v = 0.0;
  } else {
    // Boxed in: turn on the spot.
    d.steer_theta = d.target_theta;
    d.cmd = {0.0, std::copysign(0.5 * cfg.w_max, d.target_theta)};
  }
  return d;
}

}  // namespace gpf
