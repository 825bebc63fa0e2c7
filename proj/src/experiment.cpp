#include "gpf/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <thread>

#include "gpf/csv.hpp"
#include "gpf/errors.hpp"
#include "gpf/logging.hpp"

namespace gpf {

Method parse_method(std::string_view name) {
  if (name == "gpf") return Method::kGpf;
  if (name == "gpf-distance-only") return Method::kDistanceOnly;
  throw ConfigError("unknown method '" + std::string(name) + "' (gpf, gpf-distance-only)");
}

std::string_view to_string(Method m) { return m == Method::kGpf ? "gpf" : "gpf-distance-only"; }

sim::Scenario prepare_scenario(const RunSpec& spec) {
  sim::Scenario sc = sim::resolve_scenario(spec.scenario, spec.overrides);
  if (spec.method == Method::kDistanceOnly) sc.nav.k_dir = 0.0;
  return sc;
}

bool Experiment::all_succeeded() const {
  return !runs.empty() && std::all_of(runs.begin(), runs.end(),
                                      [](const RunRecord& r) { return r.result.success(); });
}

Experiment run_experiment(const RunSpec& spec) {
  if (spec.seeds.empty()) throw ConfigError("no seeds requested");
  if (spec.workers < 1) throw ConfigError("--workers must be >= 1");
  Experiment ex;
  ex.scenario = prepare_scenario(spec);
  ex.method = spec.method;
  ex.runs.resize(spec.seeds.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < spec.seeds.size(); i = next++) {
      RunRecord rec;
      try {
        rec.result = sim::run_scenario(ex.scenario, spec.seeds[i]);
      } catch (const Error& e) {
        rec.result.scenario = ex.scenario.name;
        rec.result.seed = spec.seeds[i];
        rec.result.status = sim::RunStatus::kError;
        rec.result.message = e.what();
      }
      rec.turn_reversals = max_local_turn_reversals(rec.result.log);
      ex.runs[i] = std::move(rec);
    }
  };
  const int n_threads = std::min<int>(spec.workers, static_cast<int>(spec.seeds.size()));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  std::vector<MetricsReport> reports;
  for (const auto& r : ex.runs) reports.push_back(r.result.metrics);
  ex.summary = summarize(reports);
  return ex;
}

std::string trajectory_filename(const Experiment& ex, std::uint64_t seed) {
  return ex.scenario.name + "_" + std::string(to_string(ex.method)) + "_seed" + std::to_string(seed) +
         ".csv";
}

void write_metrics_csv(std::ostream& out, const Experiment& ex) {
  out << "scenario,method,seed,status,t_tot,d_acc,c_chg,j_acc,r_obs,turn_reversals\n";
  const std::string sc = ex.scenario.name, method(to_string(ex.method));
  auto num = [](double v) { return format_number(v, 6); };
  for (const auto& r : ex.runs) {
    const auto& m = r.result.metrics;
    const bool ok = r.result.success();
    const double nan = std::nan("");
    out << csv_row({sc, method, std::to_string(r.result.seed), sim::to_string(r.result.status),
                    num(ok ? m.t_tot : nan), num(ok ? m.d_acc : nan), num(ok ? m.c_chg : nan),
                    num(ok ? m.j_acc : nan), num(ok ? m.r_obs : nan),
                    std::to_string(r.turn_reversals)});
  }
  const auto& s = ex.summary;
  const std::string rate = std::to_string(s.successes) + "/" + std::to_string(s.runs);
  out << csv_row({sc, method, "mean", rate, num(s.mean.t_tot), num(s.mean.d_acc), num(s.mean.c_chg),
                  num(s.mean.j_acc), num(s.mean.r_obs), ""});
  out << csv_row({sc, method, "std", rate, num(s.stddev.t_tot), num(s.stddev.d_acc),
                  num(s.stddev.c_chg), num(s.stddev.j_acc), num(s.stddev.r_obs), ""});
}

void print_summary(std::ostream& out, const Experiment& ex) {
  out << std::fixed << std::setprecision(2);
  out << "scenario " << ex.scenario.name << "  method " << to_string(ex.method) << "\n";
  out << "  seed  status     T_tot    D_acc    J_acc    C_chg    R_obs  reversals\n";
  for (const auto& r : ex.runs) {
    const auto& m = r.result.metrics;
    out << "  " << std::setw(4) << r.result.seed << "  " << std::left << std::setw(9)
        << sim::to_string(r.result.status) << std::right;
    if (r.result.success()) {
      out << std::setw(8) << m.t_tot << " " << std::setw(8) << m.d_acc << " " << std::setw(8) << m.j_acc
          << " " << std::setw(8) << m.c_chg << " " << std::setw(8) << m.r_obs;
    } else {
      out << std::setw(45) << "-";
    }
    out << "  " << std::setw(9) << r.turn_reversals << "\n";
  }
  const auto& s = ex.summary;
  out << "  success " << s.successes << "/" << s.runs;
  if (s.successes > 0) {
    auto pm = [&](double a, double b) { out << "  " << a << " +- " << b; };
    out << "   T_tot";
    pm(s.mean.t_tot, s.stddev.t_tot);
    out << "   D_acc";
    pm(s.mean.d_acc, s.stddev.d_acc);
    out << "   J_acc";
    pm(s.mean.j_acc, s.stddev.j_acc);
    out << "   C_chg";
    pm(s.mean.c_chg, s.stddev.c_chg);
    out << "   R_obs";
    pm(s.mean.r_obs, s.stddev.r_obs);
  }
  out << "\n";
  out.unsetf(std::ios::floatfield);
}

std::vector<std::string> write_experiment(const Experiment& ex, const RunSpec& spec) {
  std::vector<std::string> written;
  if (spec.out_dir.empty()) return written;
  namespace fs = std::filesystem;
  const fs::path dir(spec.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
  auto open = [&](const fs::path& p) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Error("cannot write " + p.string());
    written.push_back(p.string());
    return f;
  };
  for (const auto& r : ex.runs) {
    auto f = open(dir / trajectory_filename(ex, r.result.seed));
    write_trajectory_csv(f, r.result.log);
  }
  {
    auto f = open(dir / (ex.scenario.name + "_" + std::string(to_string(ex.method)) + "_metrics.csv"));
    write_metrics_csv(f, ex);
  }
  if (spec.plot) {
    auto f = open(dir / (ex.scenario.name + "_" + std::string(to_string(ex.method)) + ".svg"));
    write_svg(f, ex.scenario, ex.runs);
  }
  return written;
}

Percentiles percentiles(std::vector<double> values) {
  Percentiles p;
  p.count = values.size();
  if (values.empty()) return p;
  std::sort(values.begin(), values.end());
  auto rank = [&](double q) {
    const auto k = static_cast<std::size_t>(std::ceil(q * static_cast<double>(values.size())));
    return values[std::clamp<std::size_t>(k, 1, values.size()) - 1];
  };
  p.p50 = rank(0.5);
  p.p95 = rank(0.95);
  return p;
}

namespace {

OccupancySurface synthetic_surface(const SurfaceConfig& base, std::size_t points) {
  SurfaceConfig cfg = base;
  cfg.max_points = std::max<std::size_t>(points, 1);
  const int na = cfg.n_alpha();
  const int columns = std::max(1, static_cast<int>(points) / na);
  // Walls at a few distances with two open sectors.
  auto in_gap = [](double theta) { return std::cos(theta - 1.0) > 0.93 || std::cos(theta + 2.0) > 0.95; };
  std::vector<double> thetas;
  const int fine = 16 * columns;
  for (int i = 0; i < fine; ++i) {
    const double theta = -kPi + (i + 0.5) * kTwoPi / fine;
    if (!in_gap(theta)) thetas.push_back(theta);
  }
  std::vector<Vec3> cloud;
  for (int c = 0; c < columns && !thetas.empty(); ++c) {
    const double theta = thetas[static_cast<std::size_t>(c) * thetas.size() / static_cast<std::size_t>(columns)];
    const double r = 2.5 + 1.2 * std::sin(3.0 * theta) + 0.4 * std::cos(7.0 * theta);
    for (int j = 0; j < na; ++j) {
      const double alpha = cfg.alpha_at(j);
      cloud.push_back(spherical_to_cartesian({theta, alpha, r / std::cos(alpha)}));
    }
  }
  return build_surface(cloud, cfg);
}

}  // namespace

BenchReport bench(const RunSpec& spec, std::size_t synthetic_points, int synthetic_repeats) {
  BenchReport rep;
  const sim::Scenario sc = prepare_scenario(spec);
  rep.scenario = sc.name;
  const auto run = sim::run_scenario(sc, spec.seeds.empty() ? 0 : spec.seeds.front());
  std::vector<double> fit_ms, pred_ms, pts;
  for (const auto& t : run.timings) {
    fit_ms.push_back(t.fit_ms);
    pred_ms.push_back(t.predict_ms);
    pts.push_back(static_cast<double>(t.points));
  }
  rep.scans = run.timings.size();
  rep.fit_ms = percentiles(fit_ms);
  rep.predict_ms = percentiles(pred_ms);
  rep.points = percentiles(pts);

  if (synthetic_points > 0 && synthetic_repeats > 0) {
    const OccupancySurface s = synthetic_surface(sc.surface, synthetic_points);
    rep.synthetic_points = s.size();
    FitConfig cfg = sc.fit;
    std::vector<double> f, p;
    for (int i = 0; i < synthetic_repeats; ++i) {
      auto t0 = std::chrono::steady_clock::now();
      const VsgpModel model = fit(s, cfg);
      f.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
      cfg.warm_start = model.hyperparameters();
      t0 = std::chrono::steady_clock::now();
      const PredictionGrid grid = predict_grid(model, sc.surface);
      p.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
    }
    rep.synthetic_fit_ms = percentiles(f);
    rep.synthetic_predict_ms = percentiles(p);
  }
  return rep;
}

void print_bench(std::ostream& out, const BenchReport& r) {
  out << std::fixed << std::setprecision(1);
  out << "scenario " << r.scenario << "  scans " << r.scans << "\n";
  out << "  training points   p50 " << r.points.p50 << "  p95 " << r.points.p95 << "\n";
  out << "  fit_ms            p50 " << r.fit_ms.p50 << "  p95 " << r.fit_ms.p95 << "\n";
  out << "  predict_ms        p50 " << r.predict_ms.p50 << "  p95 " << r.predict_ms.p95 << "\n";
  if (r.synthetic_fit_ms.count > 0) {
    out << "synthetic n=" << r.synthetic_points << " repeats " << r.synthetic_fit_ms.count << "\n";
    out << "  fit_ms            p50 " << r.synthetic_fit_ms.p50 << "  p95 " << r.synthetic_fit_ms.p95 << "\n";
    out << "  predict_ms        p50 " << r.synthetic_predict_ms.p50 << "  p95 " << r.synthetic_predict_ms.p95
        << "\n";
  }
  out.unsetf(std::ios::floatfield);
}

}  // namespace gpf
