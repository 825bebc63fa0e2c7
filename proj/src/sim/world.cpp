#include "gpf/sim/world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "gpf/errors.hpp"

namespace gpf::sim {

namespace {

double rect_distance(const Rect& r, const Vec2& p) {
  const double dx = std::max({r.x_min - p.x(), 0.0, p.x() - r.x_max});
  const double dy = std::max({r.y_min - p.y(), 0.0, p.y() - r.y_max});
  return std::hypot(dx, dy);
}

double circle_distance(const Circle& c, const Vec2& p) {
  return std::max(0.0, std::hypot(p.x() - c.cx, p.y() - c.cy) - c.radius);
}

// Entry distance of a ray into a box footprint (slab method).
std::optional<double> ray_rect(const Rect& r, const Vec2& o, const Vec2& d) {
  double t0 = 0.0, t1 = std::numeric_limits<double>::infinity();
  const double lo[2] = {r.x_min, r.y_min}, hi[2] = {r.x_max, r.y_max};
  for (int a = 0; a < 2; ++a) {
    if (std::abs(d[a]) < 1e-15) {
      if (o[a] < lo[a] || o[a] > hi[a]) return std::nullopt;
      continue;
    }
    double ta = (lo[a] - o[a]) / d[a], tb = (hi[a] - o[a]) / d[a];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return std::nullopt;
  }
  return t0;
}

std::optional<double> ray_circle(const Circle& c, const Vec2& o, const Vec2& d) {
  const Vec2 f = o - Vec2(c.cx, c.cy);
  const double b = f.dot(d);
  const double cc = f.squaredNorm() - c.radius * c.radius;
  const double disc = b * b - cc;
  if (disc < 0.0) return std::nullopt;
  const double t = -b - std::sqrt(disc);
  if (t >= 0.0) return t;
  return cc <= 0.0 ? std::optional<double>(0.0) : std::nullopt;
}

}  // namespace

double World::clearance(const Vec2& p) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& r : rects) best = std::min(best, rect_distance(r, p));
  for (const auto& c : circles) best = std::min(best, circle_distance(c, p));
  return best;
}

std::optional<double> World::first_hit(const Vec2& p, double heading, double slope,
                                       double z0) const {
  const Vec2 d(std::cos(heading), std::sin(heading));
  std::optional<double> best;
  auto consider = [&](std::optional<double> t, double height) {
    if (!t) return;
    // The beam only rises, so it meets an obstacle at its near face or not at all.
    if (z0 + slope * *t > height) return;
    if (!best || *t < *best) best = t;
  };
  for (const auto& r : rects) consider(ray_rect(r, p, d), r.height);
  for (const auto& c : circles) consider(ray_circle(c, p, d), c.height);
  return best;
}

void World::validate() const {
  if (!(x_max > x_min) || !(y_max > y_min)) throw ConfigError("world bounds are empty");
  for (const auto& r : rects) {
    if (!(r.x_max > r.x_min) || !(r.y_max > r.y_min) || !(r.height > 0.0))
      throw ConfigError("world: degenerate box");
    if (r.x_min < x_min - 1e-9 || r.x_max > x_max + 1e-9 || r.y_min < y_min - 1e-9 ||
        r.y_max > y_max + 1e-9)
      throw ConfigError("world: box outside the bounds");
  }
  for (const auto& c : circles) {
    if (!(c.radius > 0.0) || !(c.height > 0.0)) throw ConfigError("world: degenerate cylinder");
    if (c.cx - c.radius < x_min - 1e-9 || c.cx + c.radius > x_max + 1e-9 ||
        c.cy - c.radius < y_min - 1e-9 || c.cy + c.radius > y_max + 1e-9)
      throw ConfigError("world: cylinder outside the bounds");
  }
}

void add_boundary_walls(World& w, double thickness, double height) {
  w.rects.push_back({w.x_min, w.y_min, w.x_max, w.y_min + thickness, height});
  w.rects.push_back({w.x_min, w.y_max - thickness, w.x_max, w.y_max, height});
  w.rects.push_back({w.x_min, w.y_min + thickness, w.x_min + thickness, w.y_max - thickness, height});
  w.rects.push_back({w.x_max - thickness, w.y_min + thickness, w.x_max, w.y_max - thickness, height});
}

World clutter_world(const ClutterSpec& spec, const std::vector<Vec2>& keep_clear_points) {
  World w;
  add_boundary_walls(w, 0.5, spec.height);
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> size(spec.min_size, spec.max_size);
  std::uniform_real_distribution<double> pos(w.x_min + 1.5, w.x_max - 1.5);
  std::uniform_int_distribution<int> kind(0, 1);
  struct Placed {
    Vec2 centre;
    double radius;  // bounding circle
  };
  std::vector<Placed> placed;
  int attempts = 0;
  while (static_cast<int>(placed.size()) < spec.count && attempts < 100 * spec.count) {
    ++attempts;
    const bool box = kind(rng) == 0;
    const double a = size(rng), b = size(rng);
    const Vec2 c(pos(rng), pos(rng));
    const double radius = box ? 0.5 * std::hypot(a, b) : 0.5 * a;
    bool ok = true;
    for (const auto& p : keep_clear_points) ok = ok && (c - p).norm() > radius + spec.keep_clear;
    for (const auto& q : placed) ok = ok && (c - q.centre).norm() > radius + q.radius + spec.min_gap;
    if (!ok) continue;
    placed.push_back({c, radius});
    if (box) {
      w.rects.push_back({c.x() - 0.5 * a, c.y() - 0.5 * b, c.x() + 0.5 * a, c.y() + 0.5 * b, spec.height});
    } else {
      w.circles.push_back({c.x(), c.y(), 0.5 * a, spec.height});
    }
  }
  return w;
}

}  // namespace gpf::sim
