#pragma once

#include <Eigen/Core>

#include "gpf/geometry.hpp"

namespace gpf {

/// Rows are (theta, alpha) pairs on the occupancy surface.
using SurfaceInputs = Eigen::Matrix<double, Eigen::Dynamic, 2>;

/// Anisotropic rational-quadratic covariance
///   k(x, x') = s * (1 + d^2 / (2 a))^(-a),
///   d^2 = chord(dtheta)^2 / l_theta^2 + dalpha^2 / l_alpha^2,
/// chord(t) = 2 sin(t / 2). The chord is the wrapped azimuth difference
/// measured on the unit circle; unlike the arc length it keeps every Gram
/// matrix positive semi-definite for any length scale.
struct KernelParams {
  double signal_var = 1.0;
  double len_theta = deg_to_rad(3.5);
  double len_alpha = deg_to_rad(20.0);
  double alpha_rq = 1.0;

  bool valid() const {
    return signal_var > 0.0 && len_theta > 0.0 && len_alpha > 0.0 && alpha_rq > 0.0;
  }
};

double rq_kernel(const Vec2& x, const Vec2& x2, const KernelParams& k);

/// Dense cross-covariance, rows follow `a`, columns follow `b`.
Eigen::MatrixXd kernel_matrix(const SurfaceInputs& a, const SurfaceInputs& b, const KernelParams& k);

}  // namespace gpf
