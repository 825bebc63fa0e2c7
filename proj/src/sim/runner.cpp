#include "gpf/sim/runner.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include "gpf/errors.hpp"
#include "gpf/logging.hpp"
#include "gpf/sim/robot.hpp"
#include "gpf/sim/sensor.hpp"

namespace gpf::sim {

std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::kArrived: return "arrived";
    case RunStatus::kTimeout: return "timeout";
    case RunStatus::kCollision: return "collision";
    case RunStatus::kError: return "error";
  }
  return "unknown";
}

namespace {

std::mt19937_64 seeded_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

}  // namespace

Pose2 seeded_start(const Scenario& sc, std::uint64_t seed) {
  auto rng = seeded_rng(seed, 1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Pose2 p = sc.start;
  p.x += sc.sim.start_jitter_xy * u(rng);
  p.y += sc.sim.start_jitter_xy * u(rng);
  p.heading = wrap_angle(p.heading + sc.sim.start_jitter_heading * u(rng));
  return p;
}

RunResult run_scenario(const Scenario& sc, std::uint64_t seed) {
  sc.validate();
  RunResult res;
  res.scenario = sc.name;
  res.seed = seed;
  res.start = seeded_start(sc, seed);
  auto noise_rng = seeded_rng(seed, 2);

  const double control_dt = 1.0 / sc.sensor.rate_hz;
  const int substeps = std::max(1, static_cast<int>(std::lround(sc.sim.physics_hz / sc.sensor.rate_hz)));
  const double physics_dt = control_dt / substeps;
  const auto max_steps = static_cast<long>(std::ceil(sc.sim.timeout / control_dt - 1e-9));

  RobotState state{res.start.x, res.start.y, res.start.heading, 0.0};
  FitConfig fit_cfg = sc.fit;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  if (sc.world.clearance(state.pose().position()) < sc.sim.robot_radius) {
    res.status = RunStatus::kCollision;
    res.message = "start pose intersects an obstacle";
    return res;
  }

  for (long step = 0;; ++step) {
    const Pose2 pose = state.pose();
    const std::vector<Vec3> cloud = raycast_scan(sc.world, pose, sc.sensor, &noise_rng);
    const OccupancySurface surface = build_surface(cloud, sc.surface);

    ScanTiming timing;
    timing.points = surface.size();
    auto t0 = std::chrono::steady_clock::now();
    VsgpModel model = [&] {
      try {
        return fit(surface, fit_cfg);
      } catch (const FitError& e) {
        // Drop the warm start once and retry from the default initialization.
        logger().warn("scan={} fit_error=\"{}\" retry=cold", step, e.what());
        FitConfig cold = fit_cfg;
        cold.warm_start.reset();
        return fit(surface, cold);
      }
    }();
    timing.fit_ms = elapsed_ms(t0);
    timing.converged = model.converged();
    fit_cfg.warm_start = model.hyperparameters();
    t0 = std::chrono::steady_clock::now();
    const PredictionGrid grid = predict_grid(model, sc.surface);
    timing.predict_ms = elapsed_ms(t0);
    res.timings.push_back(timing);

    const auto frontiers = extract_frontiers(grid, sc.frontier, pose);
    const NavDecision d = navigation_step(grid, frontiers, pose, sc.goal, sc.nav);

    TrajectorySample row;
    row.t = state.t;
    row.x = state.x;
    row.y = state.y;
    row.heading = state.heading;
    row.v = d.cmd.v;
    row.w = d.cmd.w;
    row.r_min = sc.world.clearance(pose.position());
    row.frontier_theta = d.frontier ? d.target_theta : nan;
    row.frontier_r = d.frontier ? d.target_range : nan;
    row.cost = d.cost;
    res.log.push_back(row);

    if (sc.sim.snapshot_every > 0 && step % sc.sim.snapshot_every == 0) {
      FrontierSnapshot snap;
      snap.t = state.t;
      for (const auto& f : frontiers) snap.points.push_back(f.world);
      snap.selected = d.frontier ? static_cast<int>(*d.frontier) : -1;
      res.snapshots.push_back(std::move(snap));
    }
    logger().debug("scan={} t={:.2f} x={:.3f} y={:.3f} mode={} v={:.3f} w={:.3f} n={} frontiers={}",
                   step, state.t, state.x, state.y, to_string(d.mode), d.cmd.v, d.cmd.w,
                   surface.size(), frontiers.size());
    if (logger().should_log(spdlog::level::trace)) {
      const KernelParams& k = model.kernel();
      logger().trace("scan={} signal={:.4g} len_theta={:.4g} len_alpha={:.4g} alpha_rq={:.4g} noise={:.4g}",
                     step, k.signal_var, k.len_theta, k.len_alpha, k.alpha_rq, model.noise_var());
      for (const auto& f : frontiers)
        logger().trace("scan={} frontier theta={:.3f} range={:.2f} size={}", step, f.theta, f.range,
                       f.region_size);
    }

    if (d.terminal) {
      res.status = RunStatus::kArrived;
      break;
    }
    if (step >= max_steps) {
      res.status = RunStatus::kTimeout;
      break;
    }
    bool hit = false;
    for (int k = 0; k < substeps && !hit; ++k) {
      state = integrate(state, d.cmd, physics_dt);
      hit = sc.world.clearance({state.x, state.y}) < sc.sim.robot_radius;
    }
    // Keep the sample grid exact; accumulated dt drifts otherwise.
    state.t = static_cast<double>(step + 1) * control_dt;
    if (hit) {
      res.status = RunStatus::kCollision;
      res.message = "robot body intersected an obstacle";
      TrajectorySample last = row;
      last.t = state.t;
      last.x = state.x;
      last.y = state.y;
      last.heading = state.heading;
      last.r_min = sc.world.clearance(state.pose().position());
      res.log.push_back(last);
      break;
    }
  }

  if (res.success()) {
    if (res.log.size() >= 4) res.metrics = compute_metrics(res.log);
    res.metrics.success = true;
  }
  logger().info("run scenario={} seed={} status={} t={:.2f}", sc.name, seed, to_string(res.status),
                res.log.empty() ? 0.0 : res.log.back().t);
  return res;
}

}  // namespace gpf::sim
