#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gpf/geometry.hpp"

namespace gpf::sim {

/// Axis-aligned box standing on the ground.
struct Rect {
  double x_min = 0.0, y_min = 0.0, x_max = 0.0, y_max = 0.0;
  double height = 2.0;
};

/// Vertical cylinder standing on the ground.
struct Circle {
  double cx = 0.0, cy = 0.0, radius = 0.0;
  double height = 2.0;
};

struct World {
  double x_min = -10.0, y_min = -10.0, x_max = 10.0, y_max = 10.0;
  std::vector<Rect> rects;
  std::vector<Circle> circles;

  bool contains(const Vec2& p) const {
    return p.x() >= x_min && p.x() <= x_max && p.y() >= y_min && p.y() <= y_max;
  }

  /// Distance from p to the nearest obstacle footprint (0 inside one).
  /// +inf for a world without obstacles.
  double clearance(const Vec2& p) const;

  /// Horizontal distance t >= 0 at which a rising beam first enters an
  /// obstacle: the beam leaves `p` at height `z0` along `heading` and climbs
  /// `slope` metres per metre, so it enters a footprint at t only when
  /// z0 + slope t does not exceed that obstacle's height.
  std::optional<double> first_hit(const Vec2& p, double heading, double slope = 0.0,
                                  double z0 = 0.0) const;

  void validate() const;
};

/// Perimeter walls of the given thickness, inside the bounds.
void add_boundary_walls(World& w, double thickness, double height);

/// Seeded clutter of boxes and cylinders. Obstacles keep
/// `keep_clear` metres away from each listed point.
struct ClutterSpec {
  std::uint64_t seed = 7;
  int count = 40;
  double min_size = 0.4;
  double max_size = 1.2;
  double min_gap = 1.2;  ///< free distance between obstacle footprints
  double keep_clear = 1.5;
  double height = 2.0;
};

World clutter_world(const ClutterSpec& spec, const std::vector<Vec2>& keep_clear_points);

}  // namespace gpf::sim
