#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "gpf/kernel.hpp"
#include "gpf/surface.hpp"

namespace gpf {

struct GpHyperparameters {
  KernelParams kernel;
  double noise_var = 0.01;
};

/// signal variance = var(y), noise = 0.01 var(y) (floored at 1e-6), alpha_rq = 1,
/// length scales ten lattice cells along each axis.
GpHyperparameters initial_hyperparameters(const OccupancySurface& surface);

/// Predictive distribution of noisy observations; `variance` includes the
/// noise term.
struct GpPrediction {
  Eigen::VectorXd mean;
  Eigen::VectorXd variance;
};

/// Exact zero-mean GP regression with dense factorization of K_nn + noise I.
/// Throws FitError if the system cannot be factorized, InvalidInput if n == 0.
GpPrediction full_gp_predict(const OccupancySurface& surface, const KernelParams& kernel,
                             double noise_var, const SurfaceInputs& query);

// ---------------------------------------------------------------------------
// Collapsed variational bound
//   F = log N(y | 0, Q_nn + noise I) - tr(K_nn - Q_nn) / (2 noise),
//   Q_nn = K_nm K_mm^-1 K_mn.

/// Order of `ElboGradient::log_hyper`.
enum HyperIndex { kLogSignal = 0, kLogLenTheta, kLogLenAlpha, kLogAlphaRq, kLogNoise, kNumHyper };

struct ElboGradient {
  double value = 0.0;
  Eigen::Matrix<double, kNumHyper, 1> log_hyper = Eigen::Matrix<double, kNumHyper, 1>::Zero();
  SurfaceInputs inducing;  ///< dF/dZ, same shape as Z; empty unless requested
};

double elbo(const SurfaceInputs& x, const Eigen::VectorXd& y, const SurfaceInputs& z,
            const GpHyperparameters& hyper);

ElboGradient elbo_gradient(const SurfaceInputs& x, const Eigen::VectorXd& y,
                           const SurfaceInputs& z, const GpHyperparameters& hyper,
                           bool with_inducing = true);

struct FitConfig {
  int num_inducing = 400;
  int max_iterations = 10;
  bool optimize_hyperparameters = true;
  bool optimize_inducing = true;
  /// The ascent objective is summed over azimuth sectors of about this many
  /// training points, each with its own share of the inducing inputs. A
  /// surface no larger than this is optimized on the exact bound.
  int block_size = 128;
  /// Stop once an accepted step gains less than this (relative).
  double tolerance = 1e-4;
  double step_size = 0.1;
  /// Starting hyperparameters, e.g. those of the previous scan.
  std::optional<GpHyperparameters> warm_start;

  void validate() const;
};

/// Fitted sparse model. Immutable once built; safe to query concurrently.
class VsgpModel {
 public:
  /// Prior-only model: zero mean, variance signal + noise everywhere.
  static VsgpModel prior(const GpHyperparameters& hyper);

  /// Posterior for fixed hyperparameters and inducing inputs.
  static VsgpModel condition(const SurfaceInputs& x, const Eigen::VectorXd& y,
                             const SurfaceInputs& z, const GpHyperparameters& hyper);

  const GpHyperparameters& hyperparameters() const { return hyper_; }
  const KernelParams& kernel() const { return hyper_.kernel; }
  double noise_var() const { return hyper_.noise_var; }
  double prior_variance() const { return hyper_.kernel.signal_var + hyper_.noise_var; }

  const SurfaceInputs& inducing() const { return inducing_; }
  std::size_t num_inducing() const { return static_cast<std::size_t>(inducing_.rows()); }
  std::size_t num_train() const { return num_train_; }

  /// Bound value at the final parameters (0 without data).
  double elbo() const { return elbo_; }
  /// Objective after each accepted ascent step; front() is the start point.
  const std::vector<double>& elbo_trace() const { return elbo_trace_; }
  bool converged() const { return converged_; }
  int iterations() const { return iterations_; }

  GpPrediction predict(const SurfaceInputs& query) const;

 private:
  friend VsgpModel fit(const OccupancySurface& surface, const FitConfig& cfg);

  GpHyperparameters hyper_;
  SurfaceInputs inducing_;
  std::size_t num_train_ = 0;
  Eigen::VectorXd mean_weights_;
  // Upper-triangular form of K_mm^-1 - Sigma with off-diagonal entries doubled,
  // so the latent variance reduction is the row-wise k^T U k.
  Eigen::MatrixXd var_form_;
  double elbo_ = 0.0;
  std::vector<double> elbo_trace_;
  bool converged_ = true;
  int iterations_ = 0;
};

/// Evenly spaced inducing inputs over the occupied part of the surface.
SurfaceInputs initial_inducing(const OccupancySurface& surface, int num_inducing);

/// Ascent on the collapsed bound over log-hyperparameters and inducing
/// inputs. Deterministic; an empty surface yields the prior model.
VsgpModel fit(const OccupancySurface& surface, const FitConfig& cfg);

/// Collapsed bound of `model` on the training set of `surface`.
double elbo(const OccupancySurface& surface, const VsgpModel& model);

/// Predicted occupancy mean and variance on the (theta, alpha) lattice.
/// Cell (i, j) is stored at j * n_theta + i.
struct PredictionGrid {
  SurfaceConfig config;
  int n_theta = 0;
  int n_alpha = 0;
  Eigen::VectorXd mean;      ///< clamped to [0, r_oc]
  Eigen::VectorXd variance;  ///< includes noise, >= 0
  double prior_variance = 0.0;

  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(n_theta) +
           static_cast<std::size_t>(i);
  }
  double mean_at(int i, int j) const { return mean(static_cast<Eigen::Index>(index(i, j))); }
  double variance_at(int i, int j) const {
    return variance(static_cast<Eigen::Index>(index(i, j)));
  }
  std::size_t size() const { return static_cast<std::size_t>(mean.size()); }

  /// Bilinear interpolation of the mean, periodic in azimuth, clamped in elevation.
  double interpolate_mean(double theta, double alpha) const;
};

/// Lattice cell centres in storage order.
SurfaceInputs grid_inputs(const SurfaceConfig& cfg);

PredictionGrid predict_grid(const VsgpModel& model, const SurfaceConfig& cfg);

}  // namespace gpf
