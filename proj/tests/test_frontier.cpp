#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "gpf/errors.hpp"
#include "gpf/frontier.hpp"
#include "oracles.hpp"

using namespace gpf;

namespace {

std::vector<char> random_flags(std::mt19937_64& rng, int cols, int rows, double density) {
  std::bernoulli_distribution b(density);
  std::vector<char> f(static_cast<std::size_t>(cols * rows));
  for (auto& c : f) c = b(rng) ? 1 : 0;
  return f;
}

// Small lattice: 72 azimuth columns of 5 degrees, 4 elevation rows.
PredictionGrid empty_grid() {
  PredictionGrid g;
  g.config.res_theta = deg_to_rad(5.0);
  g.config.res_alpha = deg_to_rad(5.0);
  g.config.alpha_min = 0.0;
  g.config.alpha_max = deg_to_rad(15.0);
  g.n_theta = g.config.n_theta();
  g.n_alpha = g.config.n_alpha();
  g.mean = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(g.config.cell_count()), 3.0);
  g.variance = Eigen::VectorXd::Constant(g.mean.size(), 0.01);
  g.prior_variance = 1.0;
  return g;
}

void open_sector(PredictionGrid& g, int i0, int i1) {
  for (int j = 0; j < g.n_alpha; ++j)
    for (int i = i0; i <= i1; ++i) {
      const auto c = static_cast<Eigen::Index>(g.index((i + g.n_theta) % g.n_theta, j));
      g.variance(c) = 1.0;
      g.mean(c) = 0.0;
    }
}

}  // namespace

TEST(Regions, MatchesBruteForceOnRandomGrids) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> cols(2, 40), rows(1, 8);
  std::uniform_real_distribution<double> density(0.05, 0.7);
  for (int trial = 0; trial < 100; ++trial) {
    const int c = cols(rng), r = rows(rng);
    const auto flags = random_flags(rng, c, r, density(rng));
    const RegionLabels got = label_regions(flags, c, r);
    const std::vector<int> want = oracle::components(flags, c, r);
    ASSERT_EQ(got.label, want) << "trial " << trial << " (" << c << "x" << r << ")";
    int max_label = -1;
    for (int l : want) max_label = std::max(max_label, l);
    EXPECT_EQ(got.count, max_label + 1);
  }
}

TEST(Regions, JoinsAcrossAzimuthSeam) {
  const int cols = 10, rows = 2;
  std::vector<char> f(cols * rows, 0);
  f[0] = 1;            // column 0, row 0
  f[cols + 9] = 1;     // column 9, row 1: diagonal neighbour through the seam
  const auto r = label_regions(f, cols, rows);
  EXPECT_EQ(r.count, 1);
  EXPECT_EQ(r.label[0], r.label[cols + 9]);
}

TEST(Regions, SizeMismatchThrows) {
  EXPECT_THROW(label_regions(std::vector<char>(5), 2, 2), InvalidInput);
}

TEST(Frontier, SingleSectorCentroidAndRange) {
  PredictionGrid g = empty_grid();
  open_sector(g, 40, 44);  // centred on theta_at(42)
  FrontierConfig cfg;
  const Pose2 pose{1.0, 2.0, kPi / 2};
  const auto fs = extract_frontiers(g, cfg, pose);
  ASSERT_EQ(fs.size(), 1u);
  EXPECT_NEAR(fs[0].theta, g.config.theta_at(42), 1e-12);
  EXPECT_EQ(fs[0].region_size, 5 * g.n_alpha);
  EXPECT_NEAR(fs[0].range, g.config.r_oc, 1e-9);
  const double t = kPi / 2 + fs[0].theta;
  EXPECT_NEAR(fs[0].world.x(), 1.0 + 5.0 * std::cos(t), 1e-9);
  EXPECT_NEAR(fs[0].world.y(), 2.0 + 5.0 * std::sin(t), 1e-9);
}

TEST(Frontier, CentroidWrapsAroundPi) {
  PredictionGrid g = empty_grid();
  open_sector(g, -3, 2);  // straddles theta = -pi
  const auto fs = extract_frontiers(g, FrontierConfig{}, Pose2{});
  ASSERT_EQ(fs.size(), 1u);
  // Plain averaging of the raw angles would land near zero.
  EXPECT_GT(std::abs(fs[0].theta), kPi - deg_to_rad(5.0));
}

TEST(Frontier, SmallRegionsDropped) {
  PredictionGrid g = empty_grid();
  g.variance(static_cast<Eigen::Index>(g.index(10, 0))) = 1.0;
  g.variance(static_cast<Eigen::Index>(g.index(11, 0))) = 1.0;
  FrontierConfig cfg;
  cfg.k_m = 2.0;  // two hot cells barely lift the mean; keep the background unflagged
  cfg.min_region_cells = 3;
  EXPECT_TRUE(extract_frontiers(g, cfg, Pose2{}).empty());
  cfg.min_region_cells = 2;
  EXPECT_EQ(extract_frontiers(g, cfg, Pose2{}).size(), 1u);
}

TEST(Frontier, UniformVarianceHasNoFrontierBelowUnitKm) {
  PredictionGrid g = empty_grid();
  FrontierConfig cfg;
  cfg.k_m = 1.0;
  EXPECT_TRUE(extract_frontiers(g, cfg, Pose2{}).empty());
}

TEST(Frontier, InvariantUnderVarianceScaling) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0), scale(1e-3, 1e3);
  for (int trial = 0; trial < 100; ++trial) {
    PredictionGrid g = empty_grid();
    for (Eigen::Index c = 0; c < g.variance.size(); ++c) {
      const double x = u(rng);
      g.variance(c) = x * x * x;  // skewed so regions form and break up
      g.mean(c) = 5.0 * u(rng);
    }
    FrontierConfig cfg;
    cfg.k_m = 0.5 + u(rng);
    const Pose2 pose{u(rng), u(rng), u(rng)};
    const auto base = extract_frontiers(g, cfg, pose);
    PredictionGrid scaled = g;
    scaled.variance *= scale(rng);
    const auto other = extract_frontiers(scaled, cfg, pose);
    ASSERT_EQ(base.size(), other.size()) << "trial " << trial;
    for (std::size_t k = 0; k < base.size(); ++k) {
      EXPECT_EQ(base[k].theta, other[k].theta);
      EXPECT_EQ(base[k].alpha, other[k].alpha);
      EXPECT_EQ(base[k].range, other[k].range);
      EXPECT_EQ(base[k].region_size, other[k].region_size);
    }
  }
}

TEST(Frontier, EveryCandidateComesFromFlaggedRegion) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PredictionGrid g = empty_grid();
  for (Eigen::Index c = 0; c < g.variance.size(); ++c) g.variance(c) = std::pow(u(rng), 4);
  FrontierConfig cfg;
  const double vth = variance_threshold(g, cfg);
  std::vector<char> flags(g.size());
  for (std::size_t c = 0; c < g.size(); ++c) flags[c] = g.variance(static_cast<Eigen::Index>(c)) > vth;
  const auto labels = oracle::components(flags, g.n_theta, g.n_alpha);
  std::vector<int> sizes;
  for (int l : labels)
    if (l >= 0) {
      if (l >= static_cast<int>(sizes.size())) sizes.resize(static_cast<std::size_t>(l) + 1, 0);
      ++sizes[static_cast<std::size_t>(l)];
    }
  std::vector<int> kept;
  for (int s : sizes)
    if (s >= cfg.min_region_cells) kept.push_back(s);
  const auto fs = extract_frontiers(g, cfg, Pose2{});
  ASSERT_EQ(fs.size(), kept.size());
  for (std::size_t k = 0; k < fs.size(); ++k) EXPECT_EQ(fs[k].region_size, kept[k]);
}

TEST(Frontier, RangeClampedToSurface) {
  PredictionGrid g = empty_grid();
  g.mean.setConstant(-2.0);
  EXPECT_DOUBLE_EQ(frontier_range(g, 0.3, 0.05), g.config.r_oc);
  g.mean.setConstant(9.0);
  const double r = frontier_range(g, 0.3, 0.05);
  EXPECT_GT(r, 0.0);
  EXPECT_LT(r, 1e-3);
}

TEST(Frontier, CsvHeaders) {
  std::ostringstream a, b;
  PredictionGrid g = empty_grid();
  write_grid_csv(a, g);
  write_frontiers_csv(b, {});
  EXPECT_EQ(a.str().substr(0, a.str().find('\n')), "theta,alpha,mean,variance");
  EXPECT_EQ(b.str(), "theta,alpha,range,x,y,region_size\n");
}
