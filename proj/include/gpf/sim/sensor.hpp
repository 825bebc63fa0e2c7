#pragma once

#include <random>
#include <vector>

#include "gpf/geometry.hpp"
#include "gpf/sim/world.hpp"

namespace gpf::sim {

/// Multi-ring spinning range sensor. Beams sit on the azimuth lattice
/// -pi + i * 2pi / n (n = round(2pi / res_theta)) and on the elevation rings
/// alpha_min + j * res_alpha up to alpha_max.
struct SensorConfig {
  double max_range = 5.0;
  double res_theta = deg_to_rad(0.35);
  double res_alpha = deg_to_rad(2.0);
  double alpha_min = 0.0;
  double alpha_max = deg_to_rad(15.0);
  double mount_height = 0.3;
  double rate_hz = 5.0;
  double noise_sd = 0.0;

  void validate() const;
  int n_theta() const;
  int n_alpha() const;
};

/// Returns in the sensor frame (x forward, z up, origin at the sensor).
/// Only hits closer than max_range are reported. `rng` is used only when
/// noise_sd > 0.
std::vector<Vec3> raycast_scan(const World& world, const Pose2& pose, const SensorConfig& sensor,
                               std::mt19937_64* rng = nullptr);

}  // namespace gpf::sim
