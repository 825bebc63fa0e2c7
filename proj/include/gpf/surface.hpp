#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gpf/geometry.hpp"

namespace gpf {

/// Azimuth / elevation / range of a point relative to the sensor origin.
struct SphericalPoint {
  double theta = 0.0;  ///< azimuth in [-pi, pi)
  double alpha = 0.0;  ///< elevation
  double r = 0.0;      ///< range, >= 0
};

/// Throws InvalidInput for zero-norm or non-finite input.
SphericalPoint cartesian_to_spherical(const Vec3& p);
Vec3 spherical_to_cartesian(const SphericalPoint& s);

/// Geometry of the occupancy surface and of the (theta, alpha) lattice used
/// for binning and prediction. The azimuth lattice always closes the circle:
/// n_theta() cells of width 2*pi / n_theta().
struct SurfaceConfig {
  double r_oc = 5.0;
  double alpha_min = deg_to_rad(0.0);
  double alpha_max = deg_to_rad(15.0);
  double res_theta = deg_to_rad(0.35);
  double res_alpha = deg_to_rad(2.0);
  /// Training-set cap; azimuth binning is coarsened until it holds.
  std::size_t max_points = 4000;

  void validate() const;

  int n_theta() const;
  int n_alpha() const;
  double theta_step() const;
  double theta_at(int i) const;
  double alpha_at(int j) const;
  std::size_t cell_count() const {
    return static_cast<std::size_t>(n_theta()) * static_cast<std::size_t>(n_alpha());
  }

  /// Nearest lattice column for an azimuth (circular).
  int theta_index(double theta) const;
  /// Nearest lattice row, or -1 when alpha falls outside the elevation span.
  int alpha_index(double alpha) const;
};

/// Training set {(theta_i, alpha_i) -> oc_i} of a single scan. Rows of
/// `inputs` are sorted by lattice cell, azimuth-major.
struct OccupancySurface {
  SurfaceConfig config;
  Eigen::Matrix<double, Eigen::Dynamic, 2> inputs;
  Eigen::VectorXd targets;
  /// Azimuth cells merged per bin (1 = native resolution).
  int azimuth_binning = 1;

  std::size_t size() const { return static_cast<std::size_t>(targets.size()); }
  bool empty() const { return targets.size() == 0; }
  double radius(std::size_t i) const { return config.r_oc - targets(static_cast<Eigen::Index>(i)); }
};

/// Projects a sensor-frame point cloud onto the occupancy surface. Returns with
/// r >= r_oc are free space and dropped; each lattice cell keeps its nearest
/// return. Zero-norm or non-finite points and points outside the elevation
/// span are ignored.
OccupancySurface build_surface(std::span<const Vec3> cloud, const SurfaceConfig& cfg);

/// Reads `x y z` triples, one per line; blank lines and `#` comments skipped.
std::vector<Vec3> read_pointcloud(std::istream& in, const std::string& source = "<stream>");
std::vector<Vec3> load_pointcloud(const std::string& path);

}  // namespace gpf
