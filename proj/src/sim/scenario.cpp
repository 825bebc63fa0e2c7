#include "gpf/sim/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "gpf/errors.hpp"

namespace gpf::sim {

namespace detail {
struct EmbeddedScenario {
  const char* name;
  const char* text;
};
extern const EmbeddedScenario kEmbeddedScenarios[];
extern const std::size_t kEmbeddedScenarioCount;
}  // namespace detail

void SimConfig::validate() const {
  if (!(physics_hz > 0.0)) throw ConfigError("sim.physics_hz must be > 0");
  if (!(timeout > 0.0)) throw ConfigError("sim.timeout must be > 0");
  if (!(robot_radius > 0.0)) throw ConfigError("sim.robot_radius must be > 0");
  if (!(start_jitter_xy >= 0.0) || !(start_jitter_heading >= 0.0))
    throw ConfigError("sim start jitter must be >= 0");
  if (snapshot_every < 0) throw ConfigError("sim.snapshot_every must be >= 0");
}

void Scenario::validate() const {
  world.validate();
  sensor.validate();
  surface.validate();
  fit.validate();
  frontier.validate();
  nav.validate();
  sim.validate();
  if (!world.contains(start.position()) || !world.contains(goal))
    throw ConfigError("start and goal must lie inside the world bounds");
  if (sim.physics_hz < sensor.rate_hz) throw ConfigError("sim.physics_hz must be >= sensor.rate_hz");
}

Override parse_override(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0)
    throw ConfigError("override must look like key=value: '" + std::string(text) + "'", "--set");
  return {std::string(text.substr(0, eq)), std::string(text.substr(eq + 1))};
}

namespace {

class Parser {
 public:
  explicit Parser(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& at, const std::string& msg) const {
    const int line = at.Mark().is_null() ? 0 : at.Mark().line + 1;
    throw ConfigError(msg, source_, line);
  }

  void expect_map(const YAML::Node& n, const std::string& what) const {
    if (!n.IsMap()) fail(n, what + ": expected a mapping");
  }

  void check_keys(const YAML::Node& n, const std::string& section,
                  std::initializer_list<const char*> allowed) const {
    expect_map(n, section);
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& kv : n) {
      const auto key = kv.first.as<std::string>();
      if (!ok.contains(key)) fail(kv.first, "unknown key '" + section + "." + key + "'");
    }
  }

  template <typename T>
  void get(const YAML::Node& n, const char* key, const std::string& section, T& out) const {
    const YAML::Node v = n[key];
    if (!v) return;
    try {
      out = v.as<T>();
    } catch (const YAML::Exception&) {
      fail(v, section + "." + key + ": wrong value type");
    }
  }

  void get_deg(const YAML::Node& n, const char* key, const std::string& section, double& out) const {
    double deg = rad_to_deg(out);
    get(n, key, section, deg);
    out = deg_to_rad(deg);
  }

  std::vector<double> numbers(const YAML::Node& n, std::size_t count, const std::string& what) const {
    if (!n.IsSequence() || n.size() != count)
      fail(n, what + ": expected a list of " + std::to_string(count) + " numbers");
    std::vector<double> out;
    for (const auto& e : n) {
      try {
        out.push_back(e.as<double>());
      } catch (const YAML::Exception&) {
        fail(e, what + ": expected a number");
      }
    }
    return out;
  }

  Scenario parse(const YAML::Node& root) const {
    Scenario sc;
    check_keys(root, "scenario",
               {"name", "description", "world", "start", "goal", "sensor", "surface", "fit",
                "frontier", "nav", "sim"});
    get(root, "name", "scenario", sc.name);
    get(root, "description", "scenario", sc.description);
    if (!root["start"] || !root["goal"]) fail(root, "scenario needs 'start' and 'goal'");
    if (!root["world"]) fail(root, "scenario needs 'world'");

    if (auto n = root["sim"]) {
      check_keys(n, "sim", {"physics_hz", "timeout", "robot_radius", "start_jitter_xy",
                            "start_jitter_heading_deg", "snapshot_every"});
      get(n, "physics_hz", "sim", sc.sim.physics_hz);
      get(n, "timeout", "sim", sc.sim.timeout);
      get(n, "robot_radius", "sim", sc.sim.robot_radius);
      get(n, "start_jitter_xy", "sim", sc.sim.start_jitter_xy);
      get_deg(n, "start_jitter_heading_deg", "sim", sc.sim.start_jitter_heading);
      get(n, "snapshot_every", "sim", sc.sim.snapshot_every);
    }

    {
      const auto n = root["start"];
      check_keys(n, "start", {"x", "y", "heading_deg"});
      get(n, "x", "start", sc.start.x);
      get(n, "y", "start", sc.start.y);
      get_deg(n, "heading_deg", "start", sc.start.heading);
      sc.start.heading = wrap_angle(sc.start.heading);
    }
    {
      const auto n = root["goal"];
      check_keys(n, "goal", {"x", "y"});
      get(n, "x", "goal", sc.goal.x());
      get(n, "y", "goal", sc.goal.y());
    }

    parse_world(root["world"], sc);

    if (auto n = root["sensor"]) {
      check_keys(n, "sensor", {"max_range", "res_theta_deg", "res_alpha_deg", "alpha_min_deg",
                               "alpha_max_deg", "mount_height", "rate_hz", "noise_sd"});
      get(n, "max_range", "sensor", sc.sensor.max_range);
      get_deg(n, "res_theta_deg", "sensor", sc.sensor.res_theta);
      get_deg(n, "res_alpha_deg", "sensor", sc.sensor.res_alpha);
      get_deg(n, "alpha_min_deg", "sensor", sc.sensor.alpha_min);
      get_deg(n, "alpha_max_deg", "sensor", sc.sensor.alpha_max);
      get(n, "mount_height", "sensor", sc.sensor.mount_height);
      get(n, "rate_hz", "sensor", sc.sensor.rate_hz);
      get(n, "noise_sd", "sensor", sc.sensor.noise_sd);
    }
    if (auto n = root["surface"]) {
      check_keys(n, "surface", {"r_oc", "res_theta_deg", "res_alpha_deg", "alpha_min_deg",
                                "alpha_max_deg", "max_points"});
      get(n, "r_oc", "surface", sc.surface.r_oc);
      get_deg(n, "res_theta_deg", "surface", sc.surface.res_theta);
      get_deg(n, "res_alpha_deg", "surface", sc.surface.res_alpha);
      get_deg(n, "alpha_min_deg", "surface", sc.surface.alpha_min);
      get_deg(n, "alpha_max_deg", "surface", sc.surface.alpha_max);
      get(n, "max_points", "surface", sc.surface.max_points);
    }
    if (auto n = root["fit"]) {
      check_keys(n, "fit", {"num_inducing", "max_iterations", "optimize_hyperparameters",
                            "optimize_inducing", "block_size", "tolerance", "step_size"});
      get(n, "num_inducing", "fit", sc.fit.num_inducing);
      get(n, "max_iterations", "fit", sc.fit.max_iterations);
      get(n, "optimize_hyperparameters", "fit", sc.fit.optimize_hyperparameters);
      get(n, "optimize_inducing", "fit", sc.fit.optimize_inducing);
      get(n, "block_size", "fit", sc.fit.block_size);
      get(n, "tolerance", "fit", sc.fit.tolerance);
      get(n, "step_size", "fit", sc.fit.step_size);
    }
    if (auto n = root["frontier"]) {
      check_keys(n, "frontier", {"k_m", "min_region_cells"});
      get(n, "k_m", "frontier", sc.frontier.k_m);
      get(n, "min_region_cells", "frontier", sc.frontier.min_region_cells);
    }
    if (auto n = root["nav"]) {
      check_keys(n, "nav", {"k_dst", "k_dir", "k_a", "k_b", "k_c", "v_max", "w_max", "goal_radius", "corridor",
                            "lookahead", "max_deflection_deg", "guard_distance"});
      get(n, "k_dst", "nav", sc.nav.k_dst);
      get(n, "k_dir", "nav", sc.nav.k_dir);
      get(n, "k_a", "nav", sc.nav.k_a);
      get(n, "k_b", "nav", sc.nav.k_b);
      get(n, "k_c", "nav", sc.nav.k_c);
      get(n, "v_max", "nav", sc.nav.v_max);
      get(n, "w_max", "nav", sc.nav.w_max);
      get(n, "goal_radius", "nav", sc.nav.goal_radius);
      get(n, "corridor", "nav", sc.nav.corridor);
      get(n, "lookahead", "nav", sc.nav.lookahead);
      get_deg(n, "max_deflection_deg", "nav", sc.nav.max_deflection);
      get(n, "guard_distance", "nav", sc.nav.guard_distance);
    }
    return sc;
  }

 private:
  void parse_world(const YAML::Node& n, Scenario& sc) const {
    check_keys(n, "world", {"bounds", "boundary_walls", "clutter", "boxes", "cylinders"});
    World& w = sc.world;
    if (auto b = n["bounds"]) {
      const auto v = numbers(b, 4, "world.bounds");
      w.x_min = v[0];
      w.y_min = v[1];
      w.x_max = v[2];
      w.y_max = v[3];
    }
    if (auto b = n["boundary_walls"]) {
      check_keys(b, "world.boundary_walls", {"thickness", "height"});
      double thickness = 0.5, height = 2.0;
      get(b, "thickness", "world.boundary_walls", thickness);
      get(b, "height", "world.boundary_walls", height);
      if (!(thickness > 0.0)) fail(b, "world.boundary_walls.thickness must be > 0");
      add_boundary_walls(w, thickness, height);
    }
    if (auto list = n["boxes"]) {
      if (!list.IsSequence()) fail(list, "world.boxes: expected a list");
      for (const auto& e : list) {
        const auto v = numbers(e, 5, "world.boxes entry [x_min, y_min, x_max, y_max, height]");
        w.rects.push_back({v[0], v[1], v[2], v[3], v[4]});
        if (!(v[2] > v[0]) || !(v[3] > v[1]) || !(v[4] > 0.0)) fail(e, "world.boxes: degenerate box");
      }
    }
    if (auto list = n["cylinders"]) {
      if (!list.IsSequence()) fail(list, "world.cylinders: expected a list");
      for (const auto& e : list) {
        const auto v = numbers(e, 4, "world.cylinders entry [x, y, radius, height]");
        if (!(v[2] > 0.0) || !(v[3] > 0.0)) fail(e, "world.cylinders: degenerate cylinder");
        w.circles.push_back({v[0], v[1], v[2], v[3]});
      }
    }
    if (auto c = n["clutter"]) {
      check_keys(c, "world.clutter",
                 {"seed", "count", "min_size", "max_size", "min_gap", "keep_clear", "height"});
      ClutterSpec spec;
      get(c, "seed", "world.clutter", spec.seed);
      get(c, "count", "world.clutter", spec.count);
      get(c, "min_size", "world.clutter", spec.min_size);
      get(c, "max_size", "world.clutter", spec.max_size);
      get(c, "min_gap", "world.clutter", spec.min_gap);
      get(c, "keep_clear", "world.clutter", spec.keep_clear);
      get(c, "height", "world.clutter", spec.height);
      if (!(spec.max_size >= spec.min_size) || !(spec.min_size > 0.0) || spec.count < 0)
        fail(c, "world.clutter: bad obstacle sizes or count");
      World cluttered = clutter_world(spec, {sc.start.position(), sc.goal});
      // clutter_world adds its own perimeter; keep only the scattered obstacles.
      cluttered.rects.erase(cluttered.rects.begin(), cluttered.rects.begin() + 4);
      for (const auto& r : cluttered.rects) w.rects.push_back(r);
      for (const auto& ci : cluttered.circles) w.circles.push_back(ci);
    }
  }

  std::string source_;
};

YAML::Node load_yaml(const std::string& text, const std::string& source) {
  try {
    return YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(e.msg, source, e.mark.line + 1);
  }
}

void apply_override(YAML::Node root, const Override& ov) {
  std::vector<std::string> path;
  std::stringstream ss(ov.first);
  for (std::string part; std::getline(ss, part, '.');) {
    if (part.empty()) throw ConfigError("empty component in key '" + ov.first + "'", "--set");
    path.push_back(part);
  }
  if (path.empty()) throw ConfigError("empty override key", "--set");
  YAML::Node value;
  try {
    value = YAML::Load(ov.second);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("cannot parse value of '" + ov.first + "': " + e.msg, "--set");
  }
  // Walk with fresh handles; yaml-cpp nodes are references, so assignment to
  // a child updates the tree.
  std::vector<YAML::Node> chain{root};
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    YAML::Node next = chain.back()[path[i]];
    if (next && !next.IsMap())
      throw ConfigError("'" + path[i] + "' in '" + ov.first + "' is not a section", "--set");
    if (!next) {
      chain.back()[path[i]] = YAML::Node(YAML::NodeType::Map);
      next = chain.back()[path[i]];
    }
    chain.push_back(next);
  }
  chain.back()[path.back()] = value;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& source,
                        const std::vector<Override>& overrides) {
  YAML::Node root = load_yaml(text, source);
  if (!root.IsMap()) throw ConfigError("scenario file must be a mapping", source, 1);
  for (const auto& ov : overrides) apply_override(root, ov);
  Scenario sc = Parser(source).parse(root);
  try {
    sc.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(e.what(), e.source().empty() ? source : e.source(), e.line());
  }
  return sc;
}

Scenario load_scenario_file(const std::string& path, const std::vector<Override>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file", path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path, overrides);
}

std::vector<std::string> builtin_scenarios() {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < detail::kEmbeddedScenarioCount; ++i)
    out.emplace_back(detail::kEmbeddedScenarios[i].name);
  return out;
}

std::optional<std::string> builtin_scenario_text(std::string_view name) {
  const std::string key = lower(name);
  for (std::size_t i = 0; i < detail::kEmbeddedScenarioCount; ++i)
    if (key == detail::kEmbeddedScenarios[i].name) return std::string(detail::kEmbeddedScenarios[i].text);
  return std::nullopt;
}

Scenario resolve_scenario(const std::string& name_or_path, const std::vector<Override>& overrides) {
  if (auto text = builtin_scenario_text(name_or_path))
    return parse_scenario(*text, "builtin:" + lower(name_or_path), overrides);
  std::ifstream probe(name_or_path);
  if (!probe) {
    std::string known;
    for (const auto& n : builtin_scenarios()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("unknown scenario '" + name_or_path + "' (built-in: " + known + ")");
  }
  return load_scenario_file(name_or_path, overrides);
}

}  // namespace gpf::sim
