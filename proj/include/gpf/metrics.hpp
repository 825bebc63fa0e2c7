#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace gpf {

/// One row of a trajectory log.
struct TrajectorySample {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
  double v = 0.0;
  double w = 0.0;
  double r_min = 0.0;
  double frontier_theta = 0.0;  ///< NaN when no frontier was used
  double frontier_r = 0.0;
  double cost = 0.0;
};

struct MetricsReport {
  double t_tot = 0.0;
  double d_acc = 0.0;
  double c_chg = 0.0;
  double j_acc = 0.0;
  double r_obs = 0.0;
  bool success = false;
};

struct MetricsConfig {
  /// Speed floor inside the curvature ratio |w| / max(|v|, v_floor).
  double v_floor = 0.05;
};

/// Needs at least 4 samples with strictly increasing, evenly spaced t and
/// positive r_min; throws InvalidInput otherwise. `success` is left false.
MetricsReport compute_metrics(std::span<const TrajectorySample> log, const MetricsConfig& cfg = {});

/// Largest number of sign changes of w among samples lying within `radius`
/// of some sample's position (time order, |w| below `w_eps` ignored).
int max_local_turn_reversals(std::span<const TrajectorySample> log, double radius = 1.0,
                             double w_eps = 1e-3);

struct MetricsSummary {
  int runs = 0;
  int successes = 0;
  MetricsReport mean;
  MetricsReport stddev;  ///< sample standard deviation over successful runs
};

/// Statistics over the successful reports.
MetricsSummary summarize(std::span<const MetricsReport> reports);

extern const char* const kTrajectoryHeader;
void write_trajectory_csv(std::ostream& out, std::span<const TrajectorySample> log);
std::vector<TrajectorySample> read_trajectory_csv(std::istream& in, const std::string& source = "<stream>");

}  // namespace gpf
