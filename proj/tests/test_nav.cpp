#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "gpf/errors.hpp"
#include "gpf/nav.hpp"

using namespace gpf;

namespace {

// Free everywhere: predicted range r_oc on every bearing.
PredictionGrid open_grid() {
  PredictionGrid g;
  g.config.res_theta = deg_to_rad(1.0);
  g.config.res_alpha = deg_to_rad(5.0);
  g.n_theta = g.config.n_theta();
  g.n_alpha = g.config.n_alpha();
  g.mean = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.config.cell_count()));
  g.variance = Eigen::VectorXd::Constant(g.mean.size(), 0.5);
  g.prior_variance = 1.0;
  return g;
}

// A return at `range` on every ground-ring bearing within +-half_deg of `theta_deg`.
void add_obstacle(PredictionGrid& g, double theta_deg, double half_deg, double range) {
  for (int i = 0; i < g.n_theta; ++i) {
    const double d = std::abs(wrap_angle(g.config.theta_at(i) - deg_to_rad(theta_deg)));
    if (d <= deg_to_rad(half_deg)) g.mean(static_cast<Eigen::Index>(g.index(i, 0))) = g.config.r_oc - range;
  }
}

GpFrontier make_frontier(double theta, double range, const Pose2& pose = {}) {
  GpFrontier f;
  f.theta = theta;
  f.range = range;
  f.world = pose.to_world({range * std::cos(theta), range * std::sin(theta)});
  f.region_size = 10;
  return f;
}

}  // namespace

TEST(Nav, CostWorkedExample) {
  NavConfig cfg;
  // Frontier 3 m ahead at the origin, goal 4 m to its left: d_sum = 3 + 4.
  GpFrontier f = make_frontier(0.0, 3.0);
  EXPECT_NEAR(frontier_cost(f, {3.0, 4.0}, cfg), 5.0 * 7.0, 1e-12);
  f = make_frontier(kPi / 2, 2.0);  // world (0, 2)
  EXPECT_NEAR(frontier_cost(f, {0.0, 5.0}, cfg), 5.0 * (2.0 + 3.0) + 4.0 * kPi * kPi / 4.0, 1e-12);
}

TEST(Nav, SelectCheapestAndEmpty) {
  NavConfig cfg;
  const Vec2 goal{10.0, 0.0};
  std::vector<GpFrontier> fs{make_frontier(1.0, 5.0), make_frontier(0.1, 5.0), make_frontier(-2.0, 5.0)};
  EXPECT_EQ(select_frontier(fs, goal, cfg), std::optional<std::size_t>(1));
  EXPECT_FALSE(select_frontier(std::span<const GpFrontier>{}, goal, cfg).has_value());
}

TEST(Nav, TieBreakPrefersSmallerTurnThenEarlierEntry) {
  NavConfig cfg;
  cfg.k_dir = 0.0;
  // Equal ranges and both 5 m from the goal, so d_sum ties.
  const Vec2 goal{0.0, 0.0};
  GpFrontier a = make_frontier(0.8, 2.0), b = make_frontier(0.2, 2.0);
  a.world = {3.0, 4.0};
  b.world = {4.0, 3.0};
  std::vector<GpFrontier> fs{a, b};
  EXPECT_EQ(select_frontier(fs, goal, cfg), std::optional<std::size_t>(1));
  std::vector<GpFrontier> same{b, b};
  EXPECT_EQ(select_frontier(same, goal, cfg), std::optional<std::size_t>(0));
}

TEST(Nav, SelectionInvariantUnderCostScalingAndPermutation) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> th(-kPi, kPi), r(0.5, 5.0), g(-10.0, 10.0), c(0.1, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<GpFrontier> fs;
    for (int k = 0; k < 6; ++k) fs.push_back(make_frontier(th(rng), r(rng)));
    const Vec2 goal{g(rng), g(rng)};
    NavConfig cfg;
    const auto base = select_frontier(fs, goal, cfg);
    ASSERT_TRUE(base.has_value());
    NavConfig scaled = cfg;
    const double s = c(rng);
    scaled.k_dst *= s;
    scaled.k_dir *= s;
    const auto other = select_frontier(fs, goal, scaled);
    EXPECT_EQ(fs[*base].theta, fs[*other].theta);

    std::vector<std::size_t> perm(fs.size());
    std::iota(perm.begin(), perm.end(), 0u);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<GpFrontier> shuffled;
    for (auto p : perm) shuffled.push_back(fs[p]);
    const auto sel = select_frontier(shuffled, goal, cfg);
    EXPECT_EQ(shuffled[*sel].theta, fs[*base].theta);
  }
}

TEST(Nav, FrontierBehindLosesToForwardOneWithinMargin) {
  NavConfig cfg;
  const double margin = cfg.k_dir * (kPi * kPi - kPi * kPi / 16.0) / cfg.k_dst;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0), gx(-10.0, 10.0);
  for (int trial = 0; trial < 500; ++trial) {
    const Vec2 goal{gx(rng), gx(rng)};
    const GpFrontier behind = make_frontier(-kPi, 1.0 + 4.0 * u(rng));
    const double d_behind = behind.range + (goal - behind.world).norm();
    // Forward frontier at |theta| <= pi/4 whose d_sum is within the margin (strictly).
    GpFrontier ahead = make_frontier((2.0 * u(rng) - 1.0) * kPi / 4.0, 1.0 + 4.0 * u(rng));
    const double d_ahead = ahead.range + (goal - ahead.world).norm();
    if (d_ahead - d_behind >= margin * 0.999) continue;
    std::vector<GpFrontier> fs{behind, ahead};
    EXPECT_EQ(select_frontier(fs, goal, cfg), std::optional<std::size_t>(1)) << "trial " << trial;
  }
}

TEST(Nav, MotionLawValues) {
  NavConfig cfg;
  auto c = motion_command(0.0, 5.0, cfg);
  EXPECT_DOUBLE_EQ(c.v, 1.0);  // k_a * 5 = 1.5, clamped
  EXPECT_DOUBLE_EQ(c.w, 0.0);
  c = motion_command(0.5, 2.0, cfg);
  EXPECT_NEAR(c.v, 0.3 * 2.0 - 0.6 * 0.5, 1e-12);
  EXPECT_NEAR(c.w, 0.6, 1e-12);
  c = motion_command(-kPi / 2, 5.0, cfg);
  EXPECT_NEAR(c.v, 1.5 - 0.6 * kPi / 2, 1e-12);
  EXPECT_DOUBLE_EQ(c.w, -1.5);
}

TEST(Nav, CommandsAlwaysWithinClamps) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> th(-kPi, kPi), r(0.0, 10.0);
  NavConfig cfg;
  for (int k = 0; k < 10000; ++k) {
    const auto c = motion_command(th(rng), r(rng), cfg);
    ASSERT_GE(c.v, 0.0);
    ASSERT_LE(c.v, cfg.v_max);
    ASSERT_LE(std::abs(c.w), cfg.w_max);
  }
}

TEST(Nav, ConfigValidation) {
  NavConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.k_dst = -1.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = NavConfig{};
  cfg.w_max = 0.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = NavConfig{};
  cfg.corridor = -0.1;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Nav, CorridorAndGoalVisibility) {
  PredictionGrid g = open_grid();
  const Pose2 origin{};
  EXPECT_TRUE(goal_visible(g, origin, {3.0, 0.0}));
  EXPECT_FALSE(goal_visible(g, origin, {6.0, 0.0}));  // beyond r_oc
  add_obstacle(g, 0.0, 2.0, 2.0);
  EXPECT_FALSE(goal_visible(g, origin, {3.0, 0.0}));
  EXPECT_TRUE(goal_visible(g, origin, {1.5, 0.0}));
  // Off the blocked bearing a single ray is free, but a 0.35 m corridor along
  // 9 degrees still clips the returns at 2 m (2 sin 7deg = 0.24).
  EXPECT_TRUE(corridor_clear(g, deg_to_rad(12.0), 3.0, 0.0));
  EXPECT_FALSE(corridor_clear(g, deg_to_rad(9.0), 3.0, 0.35));
  EXPECT_TRUE(corridor_clear(g, deg_to_rad(30.0), 3.0, 0.35));
  // Returns behind the robot never block.
  EXPECT_TRUE(corridor_clear(g, kPi, 3.0, 0.35));
}

TEST(Nav, ClearBearingSearchesOutward) {
  PredictionGrid g = open_grid();
  add_obstacle(g, 0.0, 20.0, 1.0);
  const auto b = clear_bearing(g, 0.0, 2.0, 0.1, kPi);
  ASSERT_TRUE(b.has_value());
  EXPECT_GT(std::abs(*b), deg_to_rad(20.0));
  EXPECT_LT(std::abs(*b), deg_to_rad(35.0));
  EXPECT_FALSE(clear_bearing(g, 0.0, 2.0, 0.1, deg_to_rad(10.0)).has_value());
  EXPECT_DOUBLE_EQ(*clear_bearing(open_grid(), 0.7, 2.0, 0.3, kPi), 0.7);
}

TEST(Nav, StepModes) {
  NavConfig cfg;
  PredictionGrid g = open_grid();
  const Pose2 pose{0.0, 0.0, 0.0};

  auto d = navigation_step(g, {}, pose, {0.3, 0.0}, cfg);
  EXPECT_EQ(d.mode, NavMode::kArrived);
  EXPECT_TRUE(d.terminal);

  d = navigation_step(g, {}, pose, {0.0, 3.0}, cfg);
  EXPECT_EQ(d.mode, NavMode::kGoal);
  EXPECT_NEAR(d.target_theta, kPi / 2, 1e-12);
  EXPECT_NEAR(d.target_range, 3.0, 1e-12);

  d = navigation_step(g, {}, pose, {8.0, 0.0}, cfg);
  EXPECT_EQ(d.mode, NavMode::kRecovery);
  EXPECT_EQ(d.cmd.v, 0.0);
  EXPECT_GT(d.cmd.w, 0.0);

  std::vector<GpFrontier> fs{make_frontier(0.2, 5.0), make_frontier(-2.5, 5.0)};
  d = navigation_step(g, fs, pose, {8.0, 0.0}, cfg);
  EXPECT_EQ(d.mode, NavMode::kFrontier);
  EXPECT_EQ(d.frontier, std::optional<std::size_t>(0));
  EXPECT_NEAR(d.cost, frontier_cost(fs[0], {8.0, 0.0}, cfg), 1e-12);
  EXPECT_DOUBLE_EQ(d.steer_theta, 0.2);
  EXPECT_FALSE(d.terminal);
}

TEST(Nav, StepSteersAroundAndStopsBeforeObstacle) {
  NavConfig cfg;
  PredictionGrid g = open_grid();
  add_obstacle(g, 0.0, 5.0, 1.0);
  std::vector<GpFrontier> fs{make_frontier(0.0, 5.0)};
  auto d = navigation_step(g, fs, Pose2{}, {8.0, 0.0}, cfg);
  EXPECT_EQ(d.mode, NavMode::kFrontier);
  EXPECT_GT(std::abs(d.steer_theta), deg_to_rad(5.0));

  // Wall right in front: turn but do not advance.
  PredictionGrid wall = open_grid();
  add_obstacle(wall, 0.0, 60.0, 0.4);
  d = navigation_step(wall, fs, Pose2{}, {8.0, 0.0}, cfg);
  EXPECT_EQ(d.cmd.v, 0.0);
  EXPECT_NE(d.cmd.w, 0.0);
}
