#include "oracles.hpp"

#include <cmath>
#include <map>
#include <numeric>

#include <Eigen/LU>

namespace oracle {

double rq(double t1, double a1, double t2, double a2, const gpf::KernelParams& k) {
  // Azimuth enters through its embedding on the unit circle.
  const double ex = std::cos(t1) - std::cos(t2), ey = std::sin(t1) - std::sin(t2);
  const double d2 = (ex * ex + ey * ey) / (k.len_theta * k.len_theta) +
                    (a1 - a2) * (a1 - a2) / (k.len_alpha * k.len_alpha);
  return k.signal_var * std::pow(1.0 + d2 / (2.0 * k.alpha_rq), -k.alpha_rq);
}

Eigen::MatrixXd gram(const gpf::SurfaceInputs& a, const gpf::SurfaceInputs& b,
                     const gpf::KernelParams& k) {
  Eigen::MatrixXd g(a.rows(), b.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.rows(); ++j) g(i, j) = rq(a(i, 0), a(i, 1), b(j, 0), b(j, 1), k);
  return g;
}

Posterior dense_gp(const gpf::SurfaceInputs& x, const Eigen::VectorXd& y, const gpf::KernelParams& k,
                   double noise, const gpf::SurfaceInputs& q) {
  Eigen::MatrixXd c = gram(x, x, k);
  c.diagonal().array() += noise;
  const Eigen::MatrixXd c_inv = c.fullPivLu().inverse();
  const Eigen::MatrixXd kq = gram(q, x, k);
  Posterior p;
  p.mean = kq * (c_inv * y);
  p.variance.resize(q.rows());
  for (Eigen::Index i = 0; i < q.rows(); ++i)
    p.variance(i) = k.signal_var - kq.row(i).dot(c_inv * kq.row(i).transpose()) + noise;
  return p;
}

namespace {

double gaussian_logpdf(const Eigen::VectorXd& y, const Eigen::MatrixXd& c) {
  const auto lu = c.fullPivLu();
  const double logdet = lu.matrixLU().diagonal().array().abs().log().sum();
  const double quad = y.dot(lu.solve(y));
  return -0.5 * static_cast<double>(y.size()) * std::log(2.0 * M_PI) - 0.5 * logdet - 0.5 * quad;
}

}  // namespace

double log_marginal(const gpf::SurfaceInputs& x, const Eigen::VectorXd& y, const gpf::KernelParams& k,
                    double noise) {
  Eigen::MatrixXd c = gram(x, x, k);
  c.diagonal().array() += noise;
  return gaussian_logpdf(y, c);
}

double dense_elbo(const gpf::SurfaceInputs& x, const Eigen::VectorXd& y, const gpf::SurfaceInputs& z,
                  const gpf::KernelParams& k, double noise) {
  if (x.rows() == 0) return 0.0;
  const Eigen::MatrixXd knn = gram(x, x, k);
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(x.rows(), x.rows());
  if (z.rows() > 0) {
    const Eigen::MatrixXd kmm = gram(z, z, k);
    const Eigen::MatrixXd knm = gram(x, z, k);
    q = knm * kmm.fullPivLu().solve(knm.transpose());
  }
  Eigen::MatrixXd c = q;
  c.diagonal().array() += noise;
  return gaussian_logpdf(y, c) - (knn - q).trace() / (2.0 * noise);
}

namespace {

int find(std::vector<int>& parent, int i) {
  while (parent[i] != i) i = parent[i] = parent[parent[i]];
  return i;
}

}  // namespace

std::vector<int> components(const std::vector<char>& flags, int cols, int rows) {
  const int n = cols * rows;
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (int a = 0; a < n; ++a) {
    if (!flags[a]) continue;
    for (int b = a + 1; b < n; ++b) {
      if (!flags[b]) continue;
      const int ca = a % cols, ra = a / cols, cb = b % cols, rb = b / cols;
      int dc = std::abs(ca - cb);
      dc = std::min(dc, cols - dc);
      if (dc <= 1 && std::abs(ra - rb) <= 1) parent[find(parent, a)] = find(parent, b);
    }
  }
  std::vector<int> label(n, -1);
  std::map<int, int> ids;
  for (int i = 0; i < n; ++i) {
    if (!flags[i]) continue;
    const int root = find(parent, i);
    auto it = ids.find(root);
    if (it == ids.end()) it = ids.emplace(root, static_cast<int>(ids.size())).first;
    label[i] = it->second;
  }
  return label;
}

bool inside_obstacle(const gpf::sim::World& w, const gpf::Vec2& q, double z) {
  for (const auto& r : w.rects)
    if (q.x() >= r.x_min && q.x() <= r.x_max && q.y() >= r.y_min && q.y() <= r.y_max && z <= r.height)
      return true;
  for (const auto& c : w.circles) {
    const double dx = q.x() - c.cx, dy = q.y() - c.cy;
    if (dx * dx + dy * dy <= c.radius * c.radius && z <= c.height) return true;
  }
  return false;
}

double march_hit(const gpf::sim::World& w, const gpf::Vec2& p, double heading, double slope,
                 double z0, double step, double max_t) {
  const gpf::Vec2 d(std::cos(heading), std::sin(heading));
  const auto n = static_cast<long>(max_t / step);
  for (long k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) * step;
    if (inside_obstacle(w, p + t * d, z0 + slope * t)) return t;
  }
  return -1.0;
}

namespace {

// Composite Simpson on [a, b] with an even number of panels.
double simpson(const std::function<double(double)>& f, double a, double b, int panels = 20000) {
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

}  // namespace

std::vector<AnalyticTrajectory> analytic_trajectories() {
  std::vector<AnalyticTrajectory> out;
  auto add = [&](std::string name, double T, std::function<double(double)> v,
                 std::function<double(double)> w, std::function<double(double)> r) {
    AnalyticTrajectory a;
    a.name = std::move(name);
    a.duration = T;
    a.v = std::move(v);
    a.w = std::move(w);
    a.r_min = std::move(r);
    a.expected.t_tot = T;
    return &out.emplace_back(std::move(a));
  };

  // Straight line at constant speed beside a parallel wall.
  auto* a = add("line", 10.0, [](double) { return 1.0; }, [](double) { return 0.0; },
                [](double) { return 2.0; });
  a->expected.d_acc = 10.0;
  a->expected.r_obs = 5.0;

  // Constant twist: a circular arc of radius 2, obstacle distance growing linearly.
  a = add("arc", 8.0, [](double) { return 0.5; }, [](double) { return 0.25; },
          [](double t) { return 1.0 + 0.1 * t; });
  a->expected.d_acc = 4.0;
  a->expected.r_obs = 10.0 * std::log(1.8);

  // Quadratic speed ramp on a line: v'' = 0.4.
  a = add("quadratic-speed", 5.0, [](double t) { return 0.2 * t * t; }, [](double) { return 0.0; },
          [](double) { return 3.0; });
  a->expected.d_acc = 0.2 * 125.0 / 3.0;
  a->expected.j_acc = 0.16;
  a->expected.r_obs = 5.0 / 3.0;

  // Cubic speed ramp: v'' = 0.3 t, so J = (1/4) * 0.09 * 4^3 / 3.
  a = add("cubic-speed", 4.0, [](double t) { return 0.05 * t * t * t; }, [](double) { return 0.0; },
          [](double) { return 1.5; });
  a->expected.d_acc = 0.05 * 256.0 / 4.0;
  a->expected.j_acc = 0.48;
  a->expected.r_obs = 4.0 / 1.5;

  // Clothoid: curvature grows at 0.1 per second.
  a = add("clothoid", 6.0, [](double) { return 1.0; }, [](double t) { return 0.1 * t; },
          [](double t) { return 2.0 + std::sin(t); });
  a->expected.d_acc = 6.0;
  a->expected.c_chg = 0.1;
  a->expected.r_obs = simpson([](double t) { return 1.0 / (2.0 + std::sin(t)); }, 0.0, 6.0);

  // Oscillating speed at constant yaw rate.
  const double T = 2.0 * std::acos(-1.0);
  a = add("breathing", T, [](double t) { return 1.0 + 0.5 * std::sin(t); }, [](double) { return 0.3; },
          [](double) { return 1.0; });
  a->expected.d_acc = T;
  a->expected.j_acc = 0.125;
  a->expected.c_chg =
      simpson([](double t) {
        const double v = 1.0 + 0.5 * std::sin(t);
        return std::abs(0.15 * std::cos(t)) / (v * v);
      }, 0.0, T) / T;
  a->expected.r_obs = T;
  return out;
}

std::vector<gpf::TrajectorySample> sample(const AnalyticTrajectory& a, double rate_hz, int substeps) {
  const auto n = static_cast<long>(std::llround(a.duration * rate_hz));
  const double h = a.duration / static_cast<double>(n);
  std::vector<gpf::TrajectorySample> out;
  double x = 0.0, y = 0.0, heading = 0.0;
  for (long i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) * h;
    gpf::TrajectorySample s;
    s.t = t;
    s.x = x;
    s.y = y;
    s.heading = heading;
    s.v = a.v(t);
    s.w = a.w(t);
    s.r_min = a.r_min(t);
    s.frontier_theta = s.frontier_r = s.cost = std::nan("");
    out.push_back(s);
    const double dh = h / substeps;
    for (int k = 0; k < substeps; ++k) {
      const double tm = t + (k + 0.5) * dh;
      const double hm = heading + 0.5 * dh * a.w(t + k * dh);
      x += dh * a.v(tm) * std::cos(hm);
      y += dh * a.v(tm) * std::sin(hm);
      heading += dh * a.w(tm);
    }
  }
  return out;
}

}  // namespace oracle
