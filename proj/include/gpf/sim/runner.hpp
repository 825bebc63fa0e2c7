#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gpf/frontier.hpp"
#include "gpf/metrics.hpp"
#include "gpf/sim/scenario.hpp"

namespace gpf::sim {

enum class RunStatus { kArrived, kTimeout, kCollision, kError };

std::string_view to_string(RunStatus s);

struct ScanTiming {
  std::size_t points = 0;  ///< training set size
  double fit_ms = 0.0;
  double predict_ms = 0.0;
  bool converged = true;
};

struct FrontierSnapshot {
  double t = 0.0;
  std::vector<Vec2> points;
  int selected = -1;
};

struct RunResult {
  std::string scenario;
  std::uint64_t seed = 0;
  RunStatus status = RunStatus::kTimeout;
  std::string message;
  Pose2 start;
  std::vector<TrajectorySample> log;  ///< one row per control step
  std::vector<ScanTiming> timings;
  std::vector<FrontierSnapshot> snapshots;
  MetricsReport metrics;  ///< meaningful when status == kArrived

  bool success() const { return status == RunStatus::kArrived; }
};

/// Start pose after the seed's perturbation.
Pose2 seeded_start(const Scenario& sc, std::uint64_t seed);

/// Closed loop: scan, fit, frontiers, command, integrate with the command
/// held, until arrival, collision or timeout. Deterministic in (sc, seed).
RunResult run_scenario(const Scenario& sc, std::uint64_t seed);

}  // namespace gpf::sim
