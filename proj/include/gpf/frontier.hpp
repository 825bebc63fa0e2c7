#pragma once

#include <iosfwd>
#include <vector>

#include "gpf/geometry.hpp"
#include "gpf/gp.hpp"

namespace gpf {

struct FrontierConfig {
  /// Cells with variance above k_m times the grid mean are frontier cells.
  double k_m = 0.4;
  /// Smaller regions are dropped as noise.
  int min_region_cells = 3;

  void validate() const;
};

/// Sub-goal candidate: centroid of one high-variance region.
struct GpFrontier {
  double theta = 0.0;  ///< robot frame azimuth
  double alpha = 0.0;
  double range = 0.0;  ///< r_oc - predicted occupancy at the centroid, in (0, r_oc]
  Vec2 world = Vec2::Zero();
  int region_size = 0;
};

/// Connected regions of flagged cells on an (n_theta x n_alpha) lattice,
/// storage j * n_theta + i, with 8-neighbourhoods and azimuth wrap-around.
/// Regions are numbered in order of their lowest storage index; unflagged
/// cells get -1.
struct RegionLabels {
  std::vector<int> label;
  int count = 0;
};

RegionLabels label_regions(const std::vector<char>& flags, int n_theta, int n_alpha);

/// k_m times the mean cell variance.
double variance_threshold(const PredictionGrid& grid, const FrontierConfig& cfg);

/// r_oc minus the bilinearly interpolated mean, clamped to (0, r_oc].
double frontier_range(const PredictionGrid& grid, double theta, double alpha);

/// Candidates in region order. Empty when no region survives.
std::vector<GpFrontier> extract_frontiers(const PredictionGrid& grid, const FrontierConfig& cfg,
                                          const Pose2& pose);

/// theta,alpha,mean,variance per lattice cell in storage order.
void write_grid_csv(std::ostream& out, const PredictionGrid& grid);
void write_frontiers_csv(std::ostream& out, const std::vector<GpFrontier>& frontiers);

}  // namespace gpf
