#include "gpf/kernel.hpp"

#include <cmath>

#include "rq_simd.hpp"

namespace gpf {

double rq_kernel(const Vec2& x, const Vec2& x2, const KernelParams& k) {
  const double dt = 2.0 * std::sin(0.5 * wrap_angle(x.x() - x2.x())) / k.len_theta;
  const double da = (x.y() - x2.y()) / k.len_alpha;
  const double d2 = dt * dt + da * da;
  return k.signal_var * std::pow(1.0 + d2 / (2.0 * k.alpha_rq), -k.alpha_rq);
}

Eigen::MatrixXd kernel_matrix(const SurfaceInputs& a, const SurfaceInputs& b, const KernelParams& k) {
  const Eigen::Index rows = a.rows(), cols = b.rows();
  Eigen::MatrixXd out(rows, cols);
  const Eigen::VectorXd ca = a.col(0).array().cos(), sa = a.col(0).array().sin();
  const Eigen::VectorXd alpha = a.col(1);
  detail::RqColumn col{0.0, 0.0, 0.0, 1.0 / (k.len_theta * k.len_theta),
                       1.0 / (k.len_alpha * k.len_alpha), k.alpha_rq, k.signal_var};
  for (Eigen::Index j = 0; j < cols; ++j) {
    col.cos_theta = std::cos(b(j, 0));
    col.sin_theta = std::sin(b(j, 0));
    col.alpha = b(j, 1);
    detail::rq_column(ca.data(), sa.data(), alpha.data(), static_cast<std::size_t>(rows), col,
                      out.col(j).data());
  }
  return out;
}

}  // namespace gpf
