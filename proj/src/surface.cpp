#include "gpf/surface.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <locale>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "gpf/errors.hpp"

namespace gpf {

SphericalPoint cartesian_to_spherical(const Vec3& p) {
  if (!p.allFinite()) throw InvalidInput("cartesian_to_spherical: non-finite point");
  const double r = p.norm();
  if (r <= 0.0) throw InvalidInput("cartesian_to_spherical: zero-norm point has no direction");
  const double s = std::clamp(p.z() / r, -1.0, 1.0);
  return {wrap_angle(std::atan2(p.y(), p.x())), std::asin(s), r};
}

Vec3 spherical_to_cartesian(const SphericalPoint& s) {
  const double c = std::cos(s.alpha);
  return {s.r * c * std::cos(s.theta), s.r * c * std::sin(s.theta), s.r * std::sin(s.alpha)};
}

void SurfaceConfig::validate() const {
  if (!(r_oc > 0.0)) throw ConfigError("surface.r_oc must be > 0");
  if (!(res_theta > 0.0) || !(res_alpha > 0.0))
    throw ConfigError("surface resolutions must be > 0");
  if (!(alpha_max >= alpha_min)) throw ConfigError("surface.alpha_max must be >= alpha_min");
  if (max_points == 0) throw ConfigError("surface.max_points must be > 0");
}

int SurfaceConfig::n_theta() const {
  return std::max(1, static_cast<int>(std::lround(kTwoPi / res_theta)));
}

int SurfaceConfig::n_alpha() const {
  return static_cast<int>(std::floor((alpha_max - alpha_min) / res_alpha + 1e-9)) + 1;
}

double SurfaceConfig::theta_step() const { return kTwoPi / n_theta(); }

double SurfaceConfig::theta_at(int i) const { return -kPi + i * theta_step(); }

double SurfaceConfig::alpha_at(int j) const { return alpha_min + j * res_alpha; }

int SurfaceConfig::theta_index(double theta) const {
  const int n = n_theta();
  const int i = static_cast<int>(std::floor((wrap_angle(theta) + kPi) / theta_step() + 0.5));
  return ((i % n) + n) % n;
}

int SurfaceConfig::alpha_index(double alpha) const {
  if (alpha < alpha_min - 0.5 * res_alpha || alpha > alpha_max + 1e-12) return -1;
  const int j = static_cast<int>(std::floor((alpha - alpha_min) / res_alpha + 0.5));
  return std::clamp(j, 0, n_alpha() - 1);
}

namespace {

struct Candidate {
  SphericalPoint s;
  int col = 0;
  int row = 0;
};

// Nearest return wins; exact ties fall back to the direction so the result
// does not depend on input order.
bool closer(const SphericalPoint& a, const SphericalPoint& b) {
  return std::tie(a.r, a.theta, a.alpha) < std::tie(b.r, b.theta, b.alpha);
}

std::vector<Candidate> bin_points(const std::vector<Candidate>& points, int n_alpha, int factor) {
  std::unordered_map<long long, Candidate> cells;
  cells.reserve(points.size());
  for (const auto& c : points) {
    const long long key = static_cast<long long>(c.col / factor) * n_alpha + c.row;
    auto [it, inserted] = cells.try_emplace(key, c);
    if (!inserted && closer(c.s, it->second.s)) it->second = c;
  }
  std::vector<std::pair<long long, Candidate>> sorted(cells.begin(), cells.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Candidate> out;
  out.reserve(sorted.size());
  for (auto& kv : sorted) out.push_back(kv.second);
  return out;
}

}  // namespace

OccupancySurface build_surface(std::span<const Vec3> cloud, const SurfaceConfig& cfg) {
  cfg.validate();
  std::vector<Candidate> occupied;
  occupied.reserve(cloud.size());
  for (const auto& p : cloud) {
    if (!p.allFinite() || p.squaredNorm() <= 0.0) continue;
    const SphericalPoint s = cartesian_to_spherical(p);
    if (s.r >= cfg.r_oc) continue;  // free space on the surface
    const int row = cfg.alpha_index(s.alpha);
    if (row < 0) continue;
    occupied.push_back({s, cfg.theta_index(s.theta), row});
  }

  const int n_alpha = cfg.n_alpha();
  int factor = 1;
  std::vector<Candidate> binned = bin_points(occupied, n_alpha, factor);
  while (binned.size() > cfg.max_points && factor < cfg.n_theta()) {
    ++factor;
    binned = bin_points(occupied, n_alpha, factor);
  }

  OccupancySurface surface;
  surface.config = cfg;
  surface.azimuth_binning = factor;
  const auto n = static_cast<Eigen::Index>(binned.size());
  surface.inputs.resize(n, 2);
  surface.targets.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& c = binned[static_cast<std::size_t>(i)];
    surface.inputs(i, 0) = c.s.theta;
    surface.inputs(i, 1) = c.s.alpha;
    surface.targets(i) = cfg.r_oc - c.s.r;
  }
  return surface;
}

std::vector<Vec3> read_pointcloud(std::istream& in, const std::string& source) {
  std::vector<Vec3> cloud;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    fields.imbue(std::locale::classic());
    double x = 0, y = 0, z = 0;
    std::string extra;
    if (!(fields >> x >> y >> z) || (fields >> extra))
      throw ConfigError("expected three numbers `x y z`", source, line_no);
    cloud.emplace_back(x, y, z);
  }
  return cloud;
}

std::vector<Vec3> load_pointcloud(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open point cloud", path);
  return read_pointcloud(in, path);
}

}  // namespace gpf
