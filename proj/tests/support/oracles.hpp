#pragma once

// Reference implementations used only by the tests. They avoid the library's
// numerical kernels on purpose: dense inverses via full-pivot LU, scalar
// kernel evaluation, brute-force search.

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gpf/gp.hpp"
#include "gpf/metrics.hpp"
#include "gpf/sim/world.hpp"

namespace oracle {

double rq(double t1, double a1, double t2, double a2, const gpf::KernelParams& k);

Eigen::MatrixXd gram(const gpf::SurfaceInputs& a, const gpf::SurfaceInputs& b,
                     const gpf::KernelParams& k);

struct Posterior {
  Eigen::VectorXd mean;
  Eigen::VectorXd variance;  // noisy-observation variance
};

Posterior dense_gp(const gpf::SurfaceInputs& x, const Eigen::VectorXd& y, const gpf::KernelParams& k,
                   double noise, const gpf::SurfaceInputs& q);

double log_marginal(const gpf::SurfaceInputs& x, const Eigen::VectorXd& y, const gpf::KernelParams& k,
                    double noise);

// log N(y | 0, Q + noise I) - tr(K - Q) / (2 noise) by dense algebra.
double dense_elbo(const gpf::SurfaceInputs& x, const Eigen::VectorXd& y, const gpf::SurfaceInputs& z,
                  const gpf::KernelParams& k, double noise);

// Components of a boolean grid (cols x rows, storage row * cols + col) under
// 8-connectivity with the column axis periodic. Union-find over all pairs of
// flagged cells at Chebyshev distance 1. Labels are canonical: component ids
// ordered by their smallest storage index, -1 for unflagged cells.
std::vector<int> components(const std::vector<char>& flags, int cols, int rows);

// True when (q, z) lies inside some obstacle: footprint containment with the
// point at or below the obstacle top.
bool inside_obstacle(const gpf::sim::World& w, const gpf::Vec2& q, double z);

// First sample t = k * step (t <= max_t) of a rising beam that lands inside an
// obstacle; -1 when none does.
double march_hit(const gpf::sim::World& w, const gpf::Vec2& p, double heading, double slope,
                 double z0, double step, double max_t);

// A motion with closed-form metrics, sampled on demand.
struct AnalyticTrajectory {
  std::string name;
  double duration = 0.0;
  std::function<double(double)> v, w, r_min;
  gpf::MetricsReport expected;
};

std::vector<AnalyticTrajectory> analytic_trajectories();

// Samples at `rate_hz` from t = 0 to the end. Positions come from integrating
// the unicycle with `substeps` midpoint steps per sample.
std::vector<gpf::TrajectorySample> sample(const AnalyticTrajectory& a, double rate_hz, int substeps = 20);

}  // namespace oracle
