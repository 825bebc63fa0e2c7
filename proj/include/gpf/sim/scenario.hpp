#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gpf/frontier.hpp"
#include "gpf/gp.hpp"
#include "gpf/nav.hpp"
#include "gpf/sim/sensor.hpp"
#include "gpf/sim/world.hpp"
#include "gpf/surface.hpp"

namespace gpf::sim {

struct SimConfig {
  double physics_hz = 50.0;
  double timeout = 120.0;
  double robot_radius = 0.25;
  /// Per-seed start perturbation: uniform in +-xy metres and +-heading.
  double start_jitter_xy = 0.1;
  double start_jitter_heading = deg_to_rad(3.0);
  /// Keep the frontier set of every n-th scan for plotting (0: none).
  int snapshot_every = 10;

  void validate() const;
};

struct Scenario {
  std::string name;
  std::string description;
  World world;
  Pose2 start;
  Vec2 goal = Vec2::Zero();
  SensorConfig sensor;
  SurfaceConfig surface;
  FitConfig fit;
  FrontierConfig frontier;
  NavConfig nav;
  SimConfig sim;

  void validate() const;
};

/// `key=value` with a dotted key path, e.g. {"nav.k_dir", "0"}.
using Override = std::pair<std::string, std::string>;

/// Parses `key=value`; throws ConfigError on a missing '='.
Override parse_override(std::string_view text);

/// YAML scenario text. Errors carry `source` and the offending line.
Scenario parse_scenario(const std::string& text, const std::string& source,
                        const std::vector<Override>& overrides = {});
Scenario load_scenario_file(const std::string& path, const std::vector<Override>& overrides = {});

/// Names of the scenarios compiled into the library (md, x, su, cu, gu).
std::vector<std::string> builtin_scenarios();
/// Raw YAML of a built-in scenario (case-insensitive), nullopt if unknown.
std::optional<std::string> builtin_scenario_text(std::string_view name);

/// Built-in name or path to a YAML file.
Scenario resolve_scenario(const std::string& name_or_path, const std::vector<Override>& overrides = {});

}  // namespace gpf::sim
