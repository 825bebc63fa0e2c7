#include "gpf/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include "gpf/csv.hpp"
#include "gpf/errors.hpp"

namespace gpf {

namespace {

// Central differences inside, one-sided at the ends (second order throughout).
std::vector<double> derivative(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  std::vector<double> d(n);
  d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
  return d;
}

std::vector<double> second_derivative(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  std::vector<double> d(n);
  const double h2 = h * h;
  d[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
  d[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / h2;
  return d;
}

double trapezoid(const std::vector<double>& f, double h) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < f.size(); ++i) s += 0.5 * (f[i] + f[i + 1]);
  return s * h;
}

}  // namespace

MetricsReport compute_metrics(std::span<const TrajectorySample> log, const MetricsConfig& cfg) {
  const std::size_t n = log.size();
  if (n < 4) throw InvalidInput("compute_metrics: need at least 4 samples");
  const double h = (log.back().t - log.front().t) / static_cast<double>(n - 1);
  if (!(h > 0.0)) throw InvalidInput("compute_metrics: time must increase");
  for (std::size_t i = 1; i < n; ++i) {
    const double dt = log[i].t - log[i - 1].t;
    if (!(dt > 0.0) || std::abs(dt - h) > 1e-6 * h)
      throw InvalidInput("compute_metrics: samples must be evenly spaced in time");
  }
  MetricsReport m;
  m.t_tot = log.back().t - log.front().t;
  std::vector<double> k(n), v(n), inv_r(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) m.d_acc += std::hypot(log[i].x - log[i - 1].x, log[i].y - log[i - 1].y);
    k[i] = std::abs(log[i].w) / std::max(std::abs(log[i].v), cfg.v_floor);
    v[i] = log[i].v;
    if (!(log[i].r_min > 0.0)) throw InvalidInput("compute_metrics: r_min must be positive");
    inv_r[i] = 1.0 / log[i].r_min;
  }
  std::vector<double> dk = derivative(k, h);
  for (auto& x : dk) x = std::abs(x);
  m.c_chg = trapezoid(dk, h) / m.t_tot;
  std::vector<double> acc2 = second_derivative(v, h);
  for (auto& x : acc2) x *= x;
  m.j_acc = trapezoid(acc2, h) / m.t_tot;
  m.r_obs = trapezoid(inv_r, h);
  return m;
}

int max_local_turn_reversals(std::span<const TrajectorySample> log, double radius, double w_eps) {
  int best = 0;
  const double r2 = radius * radius;
  for (const auto& anchor : log) {
    int flips = 0, last = 0;
    for (const auto& s : log) {
      const double dx = s.x - anchor.x, dy = s.y - anchor.y;
      if (dx * dx + dy * dy > r2 || std::abs(s.w) < w_eps) continue;
      const int sign = s.w > 0.0 ? 1 : -1;
      if (last != 0 && sign != last) ++flips;
      last = sign;
    }
    best = std::max(best, flips);
  }
  return best;
}

MetricsSummary summarize(std::span<const MetricsReport> reports) {
  MetricsSummary s;
  s.runs = static_cast<int>(reports.size());
  std::vector<const MetricsReport*> ok;
  for (const auto& r : reports)
    if (r.success) ok.push_back(&r);
  s.successes = static_cast<int>(ok.size());
  if (ok.empty()) return s;
  const double n = static_cast<double>(ok.size());
  auto stat = [&](double MetricsReport::*f, double& mean, double& sd) {
    mean = 0.0;
    for (auto* r : ok) mean += r->*f;
    mean /= n;
    double ss = 0.0;
    for (auto* r : ok) ss += (r->*f - mean) * (r->*f - mean);
    sd = ok.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  };
  stat(&MetricsReport::t_tot, s.mean.t_tot, s.stddev.t_tot);
  stat(&MetricsReport::d_acc, s.mean.d_acc, s.stddev.d_acc);
  stat(&MetricsReport::c_chg, s.mean.c_chg, s.stddev.c_chg);
  stat(&MetricsReport::j_acc, s.mean.j_acc, s.stddev.j_acc);
  stat(&MetricsReport::r_obs, s.mean.r_obs, s.stddev.r_obs);
  s.mean.success = s.successes == s.runs;
  return s;
}

const char* const kTrajectoryHeader = "t,x,y,heading,v,w,r_min,frontier_theta,frontier_r,cost";

void write_trajectory_csv(std::ostream& out, std::span<const TrajectorySample> log) {
  out << kTrajectoryHeader << '\n';
  for (const auto& s : log)
    out << csv_row({format_number(s.t), format_number(s.x), format_number(s.y),
                    format_number(s.heading), format_number(s.v), format_number(s.w),
                    format_number(s.r_min), format_number(s.frontier_theta),
                    format_number(s.frontier_r), format_number(s.cost)});
}

std::vector<TrajectorySample> read_trajectory_csv(std::istream& in, const std::string& source) {
  std::string line;
  int line_no = 1;
  if (!std::getline(in, line) || line != kTrajectoryHeader)
    throw ConfigError("unexpected trajectory header", source, 1);
  std::vector<TrajectorySample> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    double vals[10];
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (int f = 0; f < 10; ++f) {
      if (end - p >= 3 && std::string_view(p, 3) == "nan") {
        vals[f] = std::nan("");
        p += 3;
      } else {
        const auto res = std::from_chars(p, end, vals[f]);
        if (res.ec != std::errc()) throw ConfigError("malformed number", source, line_no);
        p = res.ptr;
      }
      if (f < 9) {
        if (p == end || *p != ',') throw ConfigError("expected 10 fields", source, line_no);
        ++p;
      }
    }
    if (p != end) throw ConfigError("trailing characters", source, line_no);
    out.push_back({vals[0], vals[1], vals[2], vals[3], vals[4], vals[5], vals[6], vals[7], vals[8], vals[9]});
  }
  return out;
}

}  // namespace gpf
