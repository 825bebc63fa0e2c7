#include "gpf/sim/sensor.hpp"

#include <cmath>

#include "gpf/errors.hpp"

namespace gpf::sim {

void SensorConfig::validate() const {
  if (!(max_range > 0.0)) throw ConfigError("sensor.max_range must be > 0");
  if (!(res_theta > 0.0) || !(res_alpha > 0.0)) throw ConfigError("sensor resolutions must be > 0");
  if (!(alpha_max >= alpha_min) || alpha_min < 0.0 || alpha_max >= kPi / 2)
    throw ConfigError("sensor elevation span must satisfy 0 <= alpha_min <= alpha_max < 90 deg");
  if (!(mount_height >= 0.0)) throw ConfigError("sensor.mount_height must be >= 0");
  if (!(rate_hz > 0.0)) throw ConfigError("sensor.rate_hz must be > 0");
  if (!(noise_sd >= 0.0)) throw ConfigError("sensor.noise_sd must be >= 0");
}

int SensorConfig::n_theta() const { return std::max(1, static_cast<int>(std::lround(kTwoPi / res_theta))); }

int SensorConfig::n_alpha() const {
  return static_cast<int>(std::floor((alpha_max - alpha_min) / res_alpha + 1e-9)) + 1;
}

std::vector<Vec3> raycast_scan(const World& world, const Pose2& pose, const SensorConfig& sensor,
                               std::mt19937_64* rng) {
  const int nt = sensor.n_theta(), na = sensor.n_alpha();
  const double step = kTwoPi / nt;
  std::normal_distribution<double> noise(0.0, sensor.noise_sd > 0.0 ? sensor.noise_sd : 1.0);
  const bool noisy = sensor.noise_sd > 0.0 && rng != nullptr;
  std::vector<Vec3> cloud;
  cloud.reserve(static_cast<std::size_t>(nt) * static_cast<std::size_t>(na));
  const Vec2 origin = pose.position();
  for (int j = 0; j < na; ++j) {
    const double alpha = sensor.alpha_min + j * sensor.res_alpha;
    const double ca = std::cos(alpha), sa = std::sin(alpha);
    for (int i = 0; i < nt; ++i) {
      const double theta = -kPi + i * step;
      const auto t = world.first_hit(origin, pose.heading + theta, sa / ca, sensor.mount_height);
      if (!t) continue;
      double r = *t / ca;
      if (noisy) r += noise(*rng);
      if (!(r > 0.0) || r >= sensor.max_range) continue;
      cloud.emplace_back(r * ca * std::cos(theta), r * ca * std::sin(theta), r * sa);
    }
  }
  return cloud;
}

}  // namespace gpf::sim
