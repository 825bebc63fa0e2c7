#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gpf/metrics.hpp"
#include "gpf/sim/runner.hpp"
#include "gpf/sim/scenario.hpp"

namespace gpf {

enum class Method { kGpf, kDistanceOnly };

/// "gpf" or "gpf-distance-only"; throws ConfigError otherwise.
Method parse_method(std::string_view name);
std::string_view to_string(Method m);

struct RunSpec {
  std::string scenario = "md";  ///< built-in name or YAML path
  Method method = Method::kGpf;
  std::vector<std::uint64_t> seeds{0};
  std::string out_dir;  ///< empty: write nothing
  std::vector<sim::Override> overrides;
  int workers = 1;
  bool plot = true;
};

/// Scenario with overrides applied; the distance-only method zeroes k_dir
/// after the overrides.
sim::Scenario prepare_scenario(const RunSpec& spec);

struct RunRecord {
  sim::RunResult result;
  int turn_reversals = 0;
};

struct Experiment {
  sim::Scenario scenario;
  Method method = Method::kGpf;
  std::vector<RunRecord> runs;  ///< in seed order
  MetricsSummary summary;

  bool all_succeeded() const;
};

/// Runs every seed (up to `workers` at a time); results keep seed order.
Experiment run_experiment(const RunSpec& spec);

/// Per-seed trajectory CSVs, metrics.csv and, when enabled, trajectories.svg.
/// Returns the written paths.
std::vector<std::string> write_experiment(const Experiment& ex, const RunSpec& spec);

std::string trajectory_filename(const Experiment& ex, std::uint64_t seed);
void write_metrics_csv(std::ostream& out, const Experiment& ex);
void print_summary(std::ostream& out, const Experiment& ex);

/// Static SVG with walls, obstacles, start, goal, every trajectory and the
/// frontier snapshots of the first run.
void write_svg(std::ostream& out, const sim::Scenario& sc, std::span<const RunRecord> runs);

struct Percentiles {
  double p50 = 0.0;
  double p95 = 0.0;
  std::size_t count = 0;
};

/// Nearest-rank percentiles.
Percentiles percentiles(std::vector<double> values);

struct BenchReport {
  std::string scenario;
  std::size_t scans = 0;
  Percentiles points;
  Percentiles fit_ms;
  Percentiles predict_ms;
  /// Synthetic surface at the training-size cap.
  std::size_t synthetic_points = 0;
  Percentiles synthetic_fit_ms;
  Percentiles synthetic_predict_ms;
};

/// Per-scan timings from one closed-loop run plus `synthetic_repeats`
/// fits of a synthetic surface of `synthetic_points` points.
BenchReport bench(const RunSpec& spec, std::size_t synthetic_points = 4000, int synthetic_repeats = 10);
void print_bench(std::ostream& out, const BenchReport& r);

}  // namespace gpf
