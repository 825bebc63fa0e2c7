#include "gpf/gp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "gpf/errors.hpp"
#include "gpf/logging.hpp"
#include "rq_simd.hpp"

namespace gpf {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kJitterStart = 1e-8;
constexpr double kJitterMax = 1e-4;
// Smallest squared pivot, relative to the signal variance, for which an
// unjittered factor is kept when conditioning.
constexpr double kExactPivotMin = 1e-10;
const double kLog2Pi = std::log(kTwoPi);

// Covariance block between inducing inputs (rows) and another input set
// (columns) together with the pieces the chain rule needs.
struct KernelBlock {
  MatrixXd k;
  MatrixXd u_theta;   // chord(dtheta)^2 / l_theta^2
  MatrixXd u_alpha;   // dalpha^2 / l_alpha^2
  MatrixXd inv_base;  // 1 / (1 + d^2 / 2a)
  MatrixXd log_base;
  MatrixXd d_theta;   // sin(row - col): half the derivative of chord^2
  MatrixXd d_alpha;
};

KernelBlock kernel_block(const SurfaceInputs& rows, const SurfaceInputs& cols,
                         const KernelParams& kp) {
  const Index m = rows.rows(), n = cols.rows();
  KernelBlock b;
  b.k.resize(m, n);
  b.u_theta.resize(m, n);
  b.u_alpha.resize(m, n);
  b.log_base.resize(m, n);
  b.d_theta.resize(m, n);
  b.d_alpha.resize(m, n);
  const double inv_lt2 = 1.0 / (kp.len_theta * kp.len_theta), inv_la = 1.0 / kp.len_alpha;
  const Eigen::ArrayXd cr = rows.col(0).array().cos(), sr = rows.col(0).array().sin();
  Eigen::ArrayXd d2(m);
  for (Index j = 0; j < n; ++j) {
    const double cc = std::cos(cols(j, 0)), sc = std::sin(cols(j, 0));
    b.d_theta.col(j).array() = sr * cc - cr * sc;
    b.d_alpha.col(j).array() = rows.col(1).array() - cols(j, 1);
    b.u_theta.col(j).array() = (2.0 - 2.0 * (cr * cc + sr * sc)).max(0.0) * inv_lt2;
    b.u_alpha.col(j).array() = (b.d_alpha.col(j).array() * inv_la).square();
    d2 = b.u_theta.col(j).array() + b.u_alpha.col(j).array();
    detail::rq_profile(d2.data(), static_cast<std::size_t>(m), kp.alpha_rq, kp.signal_var,
                       b.k.col(j).data(), b.log_base.col(j).data());
  }
  b.inv_base = (-b.log_base.array()).exp().matrix();
  return b;
}

// Cholesky of k + jitter * scale * I, escalating the jitter tenfold up to the cap.
MatrixXd cholesky_with_jitter(MatrixXd& k, double scale, bool try_exact = false) {
  if (try_exact) {
    Eigen::LLT<MatrixXd> llt(k);
    if (llt.info() == Eigen::Success) {
      MatrixXd l = llt.matrixL();
      if (l.diagonal().array().square().minCoeff() >= kExactPivotMin * scale) return l;
    }
  }
  for (double rel = kJitterStart; rel <= kJitterMax * (1.0 + 1e-9); rel *= 10.0) {
    MatrixXd trial = k;
    trial.diagonal().array() += rel * scale;
    Eigen::LLT<MatrixXd> llt(trial);
    if (llt.info() == Eigen::Success) {
      k = std::move(trial);
      return llt.matrixL();
    }
  }
  throw FitError("covariance factorization failed after jitter escalation to " +
                 std::to_string(kJitterMax));
}

MatrixXd lower_cholesky(const MatrixXd& b) {
  Eigen::LLT<MatrixXd> llt(b);
  if (llt.info() != Eigen::Success) throw FitError("factorization of I + A A^T failed");
  return llt.matrixL();
}

// Shared factorization of the collapsed bound for fixed parameters.
struct Factorization {
  double value = 0.0;
  MatrixXd p;    // K_mm + jitter
  MatrixXd l;    // chol(p)
  MatrixXd l_inv;  // L^-1, only when conditioning
  MatrixXd a;    // L^-1 K_mn / sqrt(noise)
  MatrixXd aat;  // A A^T
  MatrixXd lb;   // chol(I + A A^T)
  VectorXd c;    // LB^-1 A y / sqrt(noise)
  VectorXd wt;   // LB^-T c
  VectorXd w;    // L^-T wt: predictive mean weights
};

Factorization factorize(MatrixXd kzz, const MatrixXd& kzx, const VectorXd& y,
                        const GpHyperparameters& h, bool try_exact = false) {
  const Index m = kzz.rows(), n = kzx.cols();
  const double s = h.kernel.signal_var, nu = h.noise_var, sq = std::sqrt(nu);
  Factorization f;
  f.l = cholesky_with_jitter(kzz, s, try_exact);
  f.p = std::move(kzz);
  if (try_exact) {
    // Conditioning needs L^-1 anyway, and the product beats the solve.
    f.l_inv = f.l.triangularView<Eigen::Lower>().solve(MatrixXd::Identity(m, m));
    f.a.noalias() = f.l_inv.triangularView<Eigen::Lower>() * kzx;
    f.a /= sq;
  } else {
    f.a = f.l.triangularView<Eigen::Lower>().solve(kzx) / sq;
  }
  f.aat = MatrixXd::Zero(m, m);
  f.aat.selfadjointView<Eigen::Lower>().rankUpdate(f.a);
  f.aat = f.aat.selfadjointView<Eigen::Lower>();
  f.lb = lower_cholesky(f.aat + MatrixXd::Identity(m, m));
  f.c = f.lb.triangularView<Eigen::Lower>().solve(f.a * y) / sq;
  f.wt = f.lb.transpose().triangularView<Eigen::Upper>().solve(f.c);
  f.w = f.l.transpose().triangularView<Eigen::Upper>().solve(f.wt);

  const double nd = static_cast<double>(n);
  f.value = -0.5 * nd * (kLog2Pi + std::log(nu)) - f.lb.diagonal().array().log().sum() -
            0.5 * y.squaredNorm() / nu + 0.5 * f.c.squaredNorm() - 0.5 * nd * s / nu +
            0.5 * f.aat.trace();
  if (!std::isfinite(f.value)) {
    throw FitError("non-finite collapsed bound (signal_var=" + std::to_string(s) +
                   " len_theta=" + std::to_string(h.kernel.len_theta) +
                   " len_alpha=" + std::to_string(h.kernel.len_alpha) +
                   " alpha_rq=" + std::to_string(h.kernel.alpha_rq) +
                   " noise=" + std::to_string(nu) + ")");
  }
  return f;
}

// Bound with no inducing inputs: Q_nn = 0.
double bound_without_inducing(Index n, const VectorXd& y, const GpHyperparameters& h) {
  const double nd = static_cast<double>(n), nu = h.noise_var;
  return -0.5 * nd * (kLog2Pi + std::log(nu)) - 0.5 * y.squaredNorm() / nu -
         0.5 * nd * h.kernel.signal_var / nu;
}

// Accumulates dF/dtheta for one covariance block given dF/dK (same shape).
// `z_scale` is 2 for K_mm (both arguments move with Z), 1 for K_mn.
void chain_rule(const KernelBlock& b, const MatrixXd& dk, const KernelParams& kp, double z_scale,
                ElboGradient& g, bool with_inducing) {
  const Eigen::ArrayXXd gk = dk.array() * b.k.array();
  const Eigen::ArrayXXd e = gk * b.inv_base.array();
  const Eigen::ArrayXXd d2 = b.u_theta.array() + b.u_alpha.array();
  g.log_hyper(kLogLenTheta) += (e * b.u_theta.array()).sum();
  g.log_hyper(kLogLenAlpha) += (e * b.u_alpha.array()).sum();
  g.log_hyper(kLogAlphaRq) +=
      (-kp.alpha_rq * (gk * b.log_base.array()).sum()) + 0.5 * (e * d2).sum();
  if (with_inducing) {
    const double lt2 = kp.len_theta * kp.len_theta, la2 = kp.len_alpha * kp.len_alpha;
    g.inducing.col(0) -= z_scale / lt2 * (e * b.d_theta.array()).rowwise().sum().matrix();
    g.inducing.col(1) -= z_scale / la2 * (e * b.d_alpha.array()).rowwise().sum().matrix();
  }
}

struct HyperBounds {
  Eigen::Matrix<double, kNumHyper, 1> lo, hi;
};

HyperBounds hyper_bounds(const SurfaceConfig& cfg) {
  HyperBounds b;
  b.lo << std::log(1e-6), std::log(0.25 * cfg.theta_step()), std::log(0.25 * cfg.res_alpha),
      std::log(0.05), std::log(1e-6);
  // Long length scales or heavy tails smooth over narrow openings, and with warm
  // starts the drift compounds from scan to scan.
  b.lo(kLogAlphaRq) = std::log(0.25);
  b.hi << std::log(1e4), std::log(std::min(kPi, 30.0 * cfg.res_theta)),
      std::log(30.0 * cfg.res_alpha), std::log(100.0), std::log(1e4);
  return b;
}

Eigen::Matrix<double, kNumHyper, 1> to_log(const GpHyperparameters& h) {
  Eigen::Matrix<double, kNumHyper, 1> v;
  v << std::log(h.kernel.signal_var), std::log(h.kernel.len_theta), std::log(h.kernel.len_alpha),
      std::log(h.kernel.alpha_rq), std::log(h.noise_var);
  return v;
}

GpHyperparameters from_log(const Eigen::Matrix<double, kNumHyper, 1>& v) {
  GpHyperparameters h;
  h.kernel.signal_var = std::exp(v(kLogSignal));
  h.kernel.len_theta = std::exp(v(kLogLenTheta));
  h.kernel.len_alpha = std::exp(v(kLogLenAlpha));
  h.kernel.alpha_rq = std::exp(v(kLogAlphaRq));
  h.noise_var = std::exp(v(kLogNoise));
  return h;
}

}  // namespace

// ---------------------------------------------------------------------------

GpHyperparameters initial_hyperparameters(const OccupancySurface& surface) {
  GpHyperparameters h;
  double var = 0.0;
  if (surface.size() > 1) {
    const double mean = surface.targets.mean();
    var = (surface.targets.array() - mean).square().sum() / static_cast<double>(surface.size());
  }
  h.kernel.signal_var = std::max(var, 1e-6);
  h.noise_var = std::max(0.01 * var, 1e-6);
  h.kernel.alpha_rq = 1.0;
  h.kernel.len_theta = 10.0 * surface.config.res_theta;
  h.kernel.len_alpha = 10.0 * surface.config.res_alpha;
  return h;
}

GpPrediction full_gp_predict(const OccupancySurface& surface, const KernelParams& kernel,
                             double noise_var, const SurfaceInputs& query) {
  if (surface.empty()) throw InvalidInput("full_gp_predict: empty training set");
  MatrixXd knn = kernel_matrix(surface.inputs, surface.inputs, kernel);
  knn.diagonal().array() += noise_var;
  MatrixXd l;
  if (Eigen::LLT<MatrixXd> llt(knn); llt.info() == Eigen::Success) {
    l = llt.matrixL();
  } else {
    l = cholesky_with_jitter(knn, kernel.signal_var);
  }
  const MatrixXd kxn = kernel_matrix(query, surface.inputs, kernel);
  const VectorXd half = l.triangularView<Eigen::Lower>().solve(surface.targets);
  const VectorXd alpha = l.transpose().triangularView<Eigen::Upper>().solve(half);
  const MatrixXd v = l.triangularView<Eigen::Lower>().solve(kxn.transpose());
  GpPrediction out;
  out.mean = kxn * alpha;
  out.variance = (kernel.signal_var - v.colwise().squaredNorm().transpose().array())
                     .max(0.0)
                     .matrix();
  out.variance.array() += noise_var;
  return out;
}

double elbo(const SurfaceInputs& x, const VectorXd& y, const SurfaceInputs& z,
            const GpHyperparameters& hyper) {
  if (x.rows() == 0) return 0.0;
  if (z.rows() == 0) return bound_without_inducing(x.rows(), y, hyper);
  return factorize(kernel_matrix(z, z, hyper.kernel), kernel_matrix(z, x, hyper.kernel), y, hyper)
      .value;
}

ElboGradient elbo_gradient(const SurfaceInputs& x, const VectorXd& y, const SurfaceInputs& z,
                           const GpHyperparameters& hyper, bool with_inducing) {
  const Index n = x.rows(), m = z.rows();
  const double s = hyper.kernel.signal_var, nu = hyper.noise_var;
  const double nd = static_cast<double>(n), md = static_cast<double>(m);
  ElboGradient g;
  if (with_inducing) g.inducing = SurfaceInputs::Zero(m, 2);
  if (n == 0) return g;
  if (m == 0) {
    g.value = bound_without_inducing(n, y, hyper);
    g.log_hyper(kLogSignal) = -0.5 * nd * s / nu;
    g.log_hyper(kLogNoise) = -0.5 * nd + 0.5 * (y.squaredNorm() + nd * s) / nu;
    return g;
  }

  const KernelBlock kzz = kernel_block(z, z, hyper.kernel);
  const KernelBlock kzx = kernel_block(z, x, hyper.kernel);
  const Factorization f = factorize(kzz.k, kzx.k, y, hyper);
  g.value = f.value;

  const MatrixXd eye = MatrixXd::Identity(m, m);
  const MatrixXd lb_inv = f.lb.triangularView<Eigen::Lower>().solve(eye);
  const MatrixXd b_inv = lb_inv.transpose() * lb_inv;
  const MatrixXd l_inv = f.l.triangularView<Eigen::Lower>().solve(eye);
  const MatrixXd t = eye - b_inv;  // I - B^-1

  // dF/dK_mm = 1/2 L^-T (I - B^-1 - wt wt^T - A A^T) L^-1
  MatrixXd dkzz = 0.5 * l_inv.transpose() * (t - f.wt * f.wt.transpose() - f.aat) * l_inv;
  dkzz = 0.5 * (dkzz + dkzz.transpose()).eval();
  // dF/dK_mn = (W K_mn + w r^T) / noise,  W = L^-T (I - B^-1) L^-1,  r = y - K_nm w
  const MatrixXd w_form = l_inv.transpose() * t * l_inv;
  const VectorXd resid = y - kzx.k.transpose() * f.w;
  const MatrixXd dkzx = (w_form * kzx.k + f.w * resid.transpose()) / nu;

  const double trace_binv = b_inv.trace();
  const double quad = y.dot(kzx.k.transpose() * f.w);  // b^T w
  const double dnu = -0.5 * (nd - md) / nu - 0.5 * trace_binv / nu +
                     0.5 * (y.squaredNorm() - quad) / (nu * nu) -
                     0.5 * f.wt.squaredNorm() / nu +
                     0.5 * (nd * s - nu * f.aat.trace()) / (nu * nu);
  g.log_hyper(kLogNoise) = nu * dnu;
  // Every covariance entry (jitter included) scales with s.
  g.log_hyper(kLogSignal) = (dkzz.array() * f.p.array()).sum() +
                            (dkzx.array() * kzx.k.array()).sum() - 0.5 * nd * s / nu;
  chain_rule(kzz, dkzz, hyper.kernel, 2.0, g, with_inducing);
  chain_rule(kzx, dkzx, hyper.kernel, 1.0, g, with_inducing);
  return g;
}

void FitConfig::validate() const {
  if (num_inducing < 1) throw ConfigError("fit.num_inducing must be >= 1");
  if (max_iterations < 0) throw ConfigError("fit.max_iterations must be >= 0");
  if (block_size < 1) throw ConfigError("fit.block_size must be >= 1");
  if (!(step_size > 0.0)) throw ConfigError("fit.step_size must be > 0");
  if (!(tolerance >= 0.0)) throw ConfigError("fit.tolerance must be >= 0");
}

// ---------------------------------------------------------------------------

VsgpModel VsgpModel::prior(const GpHyperparameters& hyper) {
  VsgpModel model;
  model.hyper_ = hyper;
  model.inducing_.resize(0, 2);
  model.elbo_trace_ = {0.0};
  return model;
}

VsgpModel VsgpModel::condition(const SurfaceInputs& x, const VectorXd& y, const SurfaceInputs& z,
                               const GpHyperparameters& hyper) {
  if (x.rows() != y.size()) throw InvalidInput("condition: inputs and targets differ in length");
  if (!hyper.kernel.valid() || !(hyper.noise_var > 0.0))
    throw InvalidInput("condition: hyperparameters must be positive");
  VsgpModel model;
  model.hyper_ = hyper;
  model.inducing_ = z;
  model.num_train_ = static_cast<std::size_t>(x.rows());
  const Index m = z.rows();
  if (x.rows() == 0 || m == 0) {
    model.inducing_.resize(0, 2);
    model.elbo_ = gpf::elbo(x, y, z, hyper);
    model.elbo_trace_ = {model.elbo_};
    return model;
  }
  const Factorization f =
      factorize(kernel_matrix(z, z, hyper.kernel), kernel_matrix(z, x, hyper.kernel), y, hyper, true);
  model.elbo_ = f.value;
  model.elbo_trace_ = {f.value};
  model.mean_weights_ = f.w;

  // K_mm^-1 - Sigma = L^-T L^-1 - Q^T Q with Q = LB^-1 L^-1.
  const MatrixXd& l_inv = f.l_inv;
  MatrixXd q = f.lb.triangularView<Eigen::Lower>().solve(l_inv);
  MatrixXd w_form = MatrixXd::Zero(m, m);
  w_form.selfadjointView<Eigen::Lower>().rankUpdate(l_inv.transpose(), 1.0);
  w_form.selfadjointView<Eigen::Lower>().rankUpdate(q.transpose(), -1.0);
  MatrixXd upper = MatrixXd::Zero(m, m);
  for (Index j = 0; j < m; ++j) {
    upper(j, j) = w_form(j, j);
    for (Index i = 0; i < j; ++i) upper(i, j) = 2.0 * w_form(j, i);
  }
  model.var_form_ = std::move(upper);
  return model;
}

GpPrediction VsgpModel::predict(const SurfaceInputs& query) const {
  const Index n = query.rows(), m = inducing_.rows();
  const double s = hyper_.kernel.signal_var, nu = hyper_.noise_var;
  GpPrediction out;
  out.mean = VectorXd::Zero(n);
  out.variance = VectorXd::Constant(n, s + nu);
  if (m == 0 || n == 0) return out;
  constexpr Index kBlock = 2048;
  for (Index start = 0; start < n; start += kBlock) {
    const Index len = std::min(kBlock, n - start);
    const SurfaceInputs q = query.middleRows(start, len);
    const MatrixXd ks = kernel_matrix(q, inducing_, hyper_.kernel);
    out.mean.segment(start, len).noalias() = ks * mean_weights_;
    const MatrixXd kw = ks * var_form_.triangularView<Eigen::Upper>();
    const Eigen::ArrayXd reduction = (kw.array() * ks.array()).rowwise().sum();
    out.variance.segment(start, len) = ((s - reduction).max(0.0).min(s) + nu).matrix();
  }
  return out;
}

SurfaceInputs initial_inducing(const OccupancySurface& surface, int num_inducing) {
  const auto n = static_cast<Index>(surface.size());
  const Index m = std::min<Index>(num_inducing, n);
  SurfaceInputs z(m, 2);
  for (Index k = 0; k < m; ++k) {
    const auto idx = static_cast<Index>(
        std::floor((static_cast<double>(k) + 0.5) * static_cast<double>(n) / static_cast<double>(m)));
    z.row(k) = surface.inputs.row(std::min(idx, n - 1));
  }
  return z;
}

namespace {

struct Block {
  SurfaceInputs x;
  VectorXd y;
  Index z_begin = 0;
  Index z_count = 0;
};

// Azimuth sectors over the (theta-sorted) training set; the inducing inputs
// picked from a sector's points belong to that sector.
std::vector<Block> make_blocks(const SurfaceInputs& x, const VectorXd& y, Index m, int block_size) {
  const Index n = x.rows();
  const Index count = std::max<Index>(1, (n + block_size - 1) / block_size);
  std::vector<Index> bounds(static_cast<std::size_t>(count) + 1);
  for (Index s = 0; s <= count; ++s)
    bounds[static_cast<std::size_t>(s)] = static_cast<Index>(std::llround(
        static_cast<double>(s) * static_cast<double>(n) / static_cast<double>(count)));
  std::vector<Block> blocks(static_cast<std::size_t>(count));
  // Inducing k was taken from data index floor((k + 0.5) n / m).
  Index k = 0;
  for (Index s = 0; s < count; ++s) {
    auto& b = blocks[static_cast<std::size_t>(s)];
    const Index lo = bounds[static_cast<std::size_t>(s)], hi = bounds[static_cast<std::size_t>(s) + 1];
    b.x = x.middleRows(lo, hi - lo);
    b.y = y.segment(lo, hi - lo);
    b.z_begin = k;
    while (k < m) {
      const auto idx = static_cast<Index>(std::floor((static_cast<double>(k) + 0.5) *
                                                     static_cast<double>(n) / static_cast<double>(m)));
      if (idx >= hi) break;
      ++k;
    }
    b.z_count = k - b.z_begin;
  }
  return blocks;
}

ElboGradient block_objective(const std::vector<Block>& blocks, const SurfaceInputs& z,
                             const GpHyperparameters& h, bool with_inducing) {
  ElboGradient total;
  if (with_inducing) total.inducing = SurfaceInputs::Zero(z.rows(), 2);
  for (const auto& b : blocks) {
    const SurfaceInputs zb = z.middleRows(b.z_begin, b.z_count);
    const ElboGradient g = elbo_gradient(b.x, b.y, zb, h, with_inducing);
    total.value += g.value;
    total.log_hyper += g.log_hyper;
    if (with_inducing) total.inducing.middleRows(b.z_begin, b.z_count) = g.inducing;
  }
  return total;
}

}  // namespace

VsgpModel fit(const OccupancySurface& surface, const FitConfig& cfg) {
  cfg.validate();
  surface.config.validate();
  const auto t_start = std::chrono::steady_clock::now();
  const HyperBounds bounds = hyper_bounds(surface.config);
  GpHyperparameters start = cfg.warm_start ? *cfg.warm_start : initial_hyperparameters(surface);
  Eigen::Matrix<double, kNumHyper, 1> theta =
      to_log(start).cwiseMax(bounds.lo).cwiseMin(bounds.hi);
  if (surface.empty()) return VsgpModel::prior(from_log(theta));

  // Sort by azimuth so sectors are contiguous.
  const auto n = static_cast<Index>(surface.size());
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return surface.inputs(a, 0) < surface.inputs(b, 0);
  });
  OccupancySurface sorted;
  sorted.config = surface.config;
  sorted.inputs.resize(n, 2);
  sorted.targets.resize(n);
  for (Index i = 0; i < n; ++i) {
    sorted.inputs.row(i) = surface.inputs.row(order[static_cast<std::size_t>(i)]);
    sorted.targets(i) = surface.targets(order[static_cast<std::size_t>(i)]);
  }

  SurfaceInputs z = initial_inducing(sorted, cfg.num_inducing);
  const std::vector<Block> blocks = make_blocks(sorted.inputs, sorted.targets, z.rows(), cfg.block_size);
  const bool opt_h = cfg.optimize_hyperparameters, opt_z = cfg.optimize_inducing;

  std::vector<double> trace;
  bool converged = true;
  int iterations = 0;
  if ((opt_h || opt_z) && cfg.max_iterations > 0) {
    ElboGradient current = block_objective(blocks, z, from_log(theta), opt_z);
    trace.push_back(current.value);
    const Index nz = opt_z ? 2 * z.rows() : 0;
    const Index dim = kNumHyper + nz;
    VectorXd m1 = VectorXd::Zero(dim), m2 = VectorXd::Zero(dim);
    constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-12;
    double lr = cfg.step_size;
    int t = 0;
    converged = false;
    auto pack = [&](const ElboGradient& g) {
      VectorXd v = VectorXd::Zero(dim);
      if (opt_h) v.head<kNumHyper>() = g.log_hyper;
      if (opt_z) {
        // Inducing moves are measured in length scales.
        const GpHyperparameters h = from_log(theta);
        v.segment(kNumHyper, z.rows()) = g.inducing.col(0) * h.kernel.len_theta;
        v.segment(kNumHyper + z.rows(), z.rows()) = g.inducing.col(1) * h.kernel.len_alpha;
      }
      return v;
    };
    VectorXd grad = pack(current);
    while (iterations < cfg.max_iterations) {
      ++t;
      m1 = kBeta1 * m1 + (1.0 - kBeta1) * grad;
      m2 = kBeta2 * m2 + (1.0 - kBeta2) * grad.cwiseAbs2();
      const VectorXd m1_hat = m1 / (1.0 - std::pow(kBeta1, t));
      const VectorXd m2_hat = m2 / (1.0 - std::pow(kBeta2, t));
      const VectorXd dir = m1_hat.array() / (m2_hat.array().sqrt() + kEps);

      bool accepted = false;
      for (int attempt = 0; attempt < 8 && !accepted; ++attempt, lr *= 0.5) {
        Eigen::Matrix<double, kNumHyper, 1> theta_new = theta;
        SurfaceInputs z_new = z;
        if (opt_h) theta_new = (theta + lr * dir.head<kNumHyper>()).cwiseMax(bounds.lo).cwiseMin(bounds.hi);
        if (opt_z) {
          const GpHyperparameters h = from_log(theta);
          for (Index k = 0; k < z.rows(); ++k) {
            z_new(k, 0) = wrap_angle(z(k, 0) + lr * h.kernel.len_theta * dir(kNumHyper + k));
            z_new(k, 1) = std::clamp(z(k, 1) + lr * h.kernel.len_alpha * dir(kNumHyper + z.rows() + k),
                                     surface.config.alpha_min, surface.config.alpha_max);
          }
        }
        ElboGradient trial;
        try {
          trial = block_objective(blocks, z_new, from_log(theta_new), opt_z);
        } catch (const FitError&) {
          continue;
        }
        if (trial.value > current.value) {
          const double gain = (trial.value - current.value) / std::max(1.0, std::abs(current.value));
          theta = theta_new;
          z = std::move(z_new);
          current = std::move(trial);
          grad = pack(current);
          trace.push_back(current.value);
          accepted = true;
          ++iterations;
          lr = std::min(2.0 * lr, 4.0 * cfg.step_size);  // undo this round's halving, then grow
          logger().debug("fit iter={} elbo={:.6f} gain={:.3e} lr={:.4f}", iterations, current.value,
                         gain, lr);
          if (gain < cfg.tolerance) converged = true;
        }
      }
      if (!accepted) converged = true;  // no ascent direction left at this step size
      if (converged) break;
    }
  }

  VsgpModel model = VsgpModel::condition(sorted.inputs, sorted.targets, z, from_log(theta));
  model.elbo_trace_ = trace.empty() ? std::vector<double>{model.elbo_} : std::move(trace);
  model.converged_ = converged;
  model.iterations_ = iterations;
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t_start).count();
  logger().debug("fit done n={} m={} iterations={} converged={} elbo={:.6f} ms={:.2f}", n, z.rows(),
                 iterations, converged, model.elbo_, ms);
  if (!converged) logger().info("fit converged=false iterations={}", iterations);
  return model;
}

double elbo(const OccupancySurface& surface, const VsgpModel& model) {
  return elbo(surface.inputs, surface.targets, model.inducing(), model.hyperparameters());
}

// ---------------------------------------------------------------------------

SurfaceInputs grid_inputs(const SurfaceConfig& cfg) {
  const int nt = cfg.n_theta(), na = cfg.n_alpha();
  SurfaceInputs x(static_cast<Index>(nt) * na, 2);
  for (int j = 0; j < na; ++j) {
    for (int i = 0; i < nt; ++i) {
      const Index r = static_cast<Index>(j) * nt + i;
      x(r, 0) = cfg.theta_at(i);
      x(r, 1) = cfg.alpha_at(j);
    }
  }
  return x;
}

PredictionGrid predict_grid(const VsgpModel& model, const SurfaceConfig& cfg) {
  cfg.validate();
  PredictionGrid grid;
  grid.config = cfg;
  grid.n_theta = cfg.n_theta();
  grid.n_alpha = cfg.n_alpha();
  grid.prior_variance = model.prior_variance();
  GpPrediction p = model.predict(grid_inputs(cfg));
  grid.mean = p.mean.cwiseMax(0.0).cwiseMin(cfg.r_oc);
  grid.variance = std::move(p.variance);
  return grid;
}

double PredictionGrid::interpolate_mean(double theta, double alpha) const {
  const double step = config.theta_step();
  const double u = (wrap_angle(theta) + kPi) / step;
  const int i0 = static_cast<int>(std::floor(u));
  const double fu = u - i0;
  const int ia = ((i0 % n_theta) + n_theta) % n_theta;
  const int ib = (ia + 1) % n_theta;
  double v = (alpha - config.alpha_min) / config.res_alpha;
  v = std::clamp(v, 0.0, static_cast<double>(n_alpha - 1));
  const int j0 = std::min(static_cast<int>(std::floor(v)), n_alpha - 1);
  const int j1 = std::min(j0 + 1, n_alpha - 1);
  const double fv = v - j0;
  const double top = (1.0 - fu) * mean_at(ia, j0) + fu * mean_at(ib, j0);
  const double bottom = (1.0 - fu) * mean_at(ia, j1) + fu * mean_at(ib, j1);
  return (1.0 - fv) * top + fv * bottom;
}

}  // namespace gpf
