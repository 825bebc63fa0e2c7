#include "rq_simd.hpp"

#include <cmath>

namespace gpf::detail {

void rq_profile(const double* d2, std::size_t n, double alpha_rq, double signal_var, double* k,
                double* log_base) {
  const double inv_two_a = 0.5 / alpha_rq;
  if (log_base != nullptr) {
#pragma omp simd
    for (std::size_t i = 0; i < n; ++i) {
      const double lb = std::log(1.0 + d2[i] * inv_two_a);
      log_base[i] = lb;
      k[i] = signal_var * std::exp(-alpha_rq * lb);
    }
  } else {
#pragma omp simd
    for (std::size_t i = 0; i < n; ++i) {
      k[i] = signal_var * std::exp(-alpha_rq * std::log(1.0 + d2[i] * inv_two_a));
    }
  }
}

}  // namespace gpf::detail

namespace gpf::detail {

void rq_column(const double* cos_rows, const double* sin_rows, const double* alpha_rows,
               std::size_t n, const RqColumn& col, double* k) {
  // Copies so the stores to k cannot alias the parameters.
  const double ct = col.cos_theta, st = col.sin_theta, al = col.alpha;
  const double lt2 = col.inv_len_theta2, la2 = col.inv_len_alpha2;
  const double a = col.alpha_rq, s = col.signal_var, inv_two_a = 0.5 / a;
#pragma omp simd
  for (std::size_t i = 0; i < n; ++i) {
    const double chord2 = std::fmax(2.0 - 2.0 * (cos_rows[i] * ct + sin_rows[i] * st), 0.0);
    const double da = alpha_rows[i] - al;
    const double d2 = chord2 * lt2 + da * da * la2;
    k[i] = s * std::exp(-a * std::log(1.0 + d2 * inv_two_a));
  }
}

}  // namespace gpf::detail
