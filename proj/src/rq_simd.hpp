#pragma once

#include <cstddef>

namespace gpf::detail {

// Element-wise RQ profile over scaled squared distances:
//   log_base[i] = log(1 + d2[i] / (2 a)),  k[i] = s * exp(-a * log_base[i]).
// `log_base` may be null. Lives in its own translation unit so it can be
// built with vector math enabled.
void rq_profile(const double* d2, std::size_t n, double alpha_rq, double signal_var, double* k,
                double* log_base);

// One column of a cross-covariance: rows given by the cos / sin of their
// azimuth and their elevation, against a single column point.
struct RqColumn {
  double cos_theta;
  double sin_theta;
  double alpha;
  double inv_len_theta2;
  double inv_len_alpha2;
  double alpha_rq;
  double signal_var;
};

void rq_column(const double* cos_rows, const double* sin_rows, const double* alpha_rows,
               std::size_t n, const RqColumn& col, double* k);

}  // namespace gpf::detail
