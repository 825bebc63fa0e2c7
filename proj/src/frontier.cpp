#include "gpf/frontier.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "gpf/csv.hpp"
#include "gpf/errors.hpp"

namespace gpf {

void FrontierConfig::validate() const {
  if (!(k_m > 0.0)) throw ConfigError("frontier.k_m must be > 0");
  if (min_region_cells < 1) throw ConfigError("frontier.min_region_cells must be >= 1");
}

RegionLabels label_regions(const std::vector<char>& flags, int n_theta, int n_alpha) {
  const std::size_t cells = static_cast<std::size_t>(n_theta) * static_cast<std::size_t>(n_alpha);
  if (flags.size() != cells) throw InvalidInput("label_regions: flag count does not match lattice");
  RegionLabels out;
  out.label.assign(cells, -1);
  std::vector<int> stack;
  for (std::size_t seed = 0; seed < cells; ++seed) {
    if (!flags[seed] || out.label[seed] >= 0) continue;
    const int id = out.count++;
    out.label[seed] = id;
    stack.push_back(static_cast<int>(seed));
    while (!stack.empty()) {
      const int c = stack.back();
      stack.pop_back();
      const int i = c % n_theta, j = c / n_theta;
      for (int dj = -1; dj <= 1; ++dj) {
        const int nj = j + dj;
        if (nj < 0 || nj >= n_alpha) continue;
        for (int di = -1; di <= 1; ++di) {
          const int ni = (i + di + n_theta) % n_theta;
          const int nc = nj * n_theta + ni;
          if (flags[nc] && out.label[nc] < 0) {
            out.label[nc] = id;
            stack.push_back(nc);
          }
        }
      }
    }
  }
  return out;
}

double variance_threshold(const PredictionGrid& grid, const FrontierConfig& cfg) {
  if (grid.size() == 0) return 0.0;
  return cfg.k_m * grid.variance.mean();
}

double frontier_range(const PredictionGrid& grid, double theta, double alpha) {
  const double r_oc = grid.config.r_oc;
  return std::clamp(r_oc - grid.interpolate_mean(theta, alpha), 1e-6 * r_oc, r_oc);
}

std::vector<GpFrontier> extract_frontiers(const PredictionGrid& grid, const FrontierConfig& cfg,
                                          const Pose2& pose) {
  cfg.validate();
  if (grid.size() == 0) return {};
  const double threshold = variance_threshold(grid, cfg);
  std::vector<char> flags(grid.size());
  for (std::size_t c = 0; c < grid.size(); ++c)
    flags[c] = grid.variance(static_cast<Eigen::Index>(c)) > threshold ? 1 : 0;
  const RegionLabels regions = label_regions(flags, grid.n_theta, grid.n_alpha);

  struct Accum {
    double sum_cos = 0.0, sum_sin = 0.0, sum_theta = 0.0, sum_alpha = 0.0;
    int count = 0;
  };
  std::vector<Accum> acc(static_cast<std::size_t>(regions.count));
  for (int j = 0; j < grid.n_alpha; ++j) {
    const double alpha = grid.config.alpha_at(j);
    for (int i = 0; i < grid.n_theta; ++i) {
      const int id = regions.label[grid.index(i, j)];
      if (id < 0) continue;
      const double theta = grid.config.theta_at(i);
      auto& a = acc[static_cast<std::size_t>(id)];
      a.sum_cos += std::cos(theta);
      a.sum_sin += std::sin(theta);
      a.sum_theta += theta;
      a.sum_alpha += alpha;
      ++a.count;
    }
  }

  std::vector<GpFrontier> out;
  for (const auto& a : acc) {
    if (a.count < cfg.min_region_cells) continue;
    GpFrontier f;
    const double resultant = std::hypot(a.sum_cos, a.sum_sin);
    // A region closing the whole ring has no preferred direction; fall back
    // to the plain lattice mean.
    f.theta = resultant > 1e-9 * a.count ? wrap_angle(std::atan2(a.sum_sin, a.sum_cos))
                                         : a.sum_theta / a.count;
    f.alpha = a.sum_alpha / a.count;
    f.range = frontier_range(grid, f.theta, f.alpha);
    f.world = pose.to_world({f.range * std::cos(f.theta), f.range * std::sin(f.theta)});
    f.region_size = a.count;
    out.push_back(f);
  }
  return out;
}

void write_grid_csv(std::ostream& out, const PredictionGrid& grid) {
  out << "theta,alpha,mean,variance\n";
  for (int j = 0; j < grid.n_alpha; ++j)
    for (int i = 0; i < grid.n_theta; ++i)
      out << csv_row({format_number(grid.config.theta_at(i)), format_number(grid.config.alpha_at(j)),
                      format_number(grid.mean_at(i, j)), format_number(grid.variance_at(i, j))});
}

void write_frontiers_csv(std::ostream& out, const std::vector<GpFrontier>& frontiers) {
  out << "theta,alpha,range,x,y,region_size\n";
  for (const auto& f : frontiers)
    out << csv_row({format_number(f.theta), format_number(f.alpha), format_number(f.range),
                    format_number(f.world.x()), format_number(f.world.y()),
                    std::to_string(f.region_size)});
}

}  // namespace gpf
