#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gpf/errors.hpp"
#include "gpf/experiment.hpp"
#include "gpf/frontier.hpp"
#include "gpf/gp.hpp"
#include "gpf/logging.hpp"
#include "gpf/surface.hpp"

namespace {

std::vector<std::uint64_t> seed_list(int count, std::uint64_t first) {
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < count; ++i) seeds.push_back(first + static_cast<std::uint64_t>(i));
  return seeds;
}

std::string default_out_dir() {
  const char* env = std::getenv("GPF_OUT_DIR");
  return env != nullptr && *env != '\0' ? env : "runs";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GP-Frontier local navigation"};
  app.require_subcommand(1);

  gpf::RunSpec spec;
  std::string method = "gpf";
  std::vector<std::string> sets;
  int seeds = 1;
  std::uint64_t first_seed = 0;
  spec.out_dir = default_out_dir();

  auto common = [&](CLI::App* sub) {
    sub->add_option("--scenario", spec.scenario, "built-in name (md, x, su, cu, gu) or YAML path")
        ->capture_default_str();
    sub->add_option("--method", method, "gpf or gpf-distance-only")->capture_default_str();
    sub->add_option("--seed", first_seed, "first seed")->capture_default_str();
    sub->add_option("--set", sets, "override a scenario key, e.g. --set nav.k_dir=0");
  };

  auto* run = app.add_subcommand("run", "closed-loop runs over consecutive seeds");
  common(run);
  run->add_option("--seeds", seeds, "number of seeds")->capture_default_str()->check(CLI::PositiveNumber);
  run->add_option("--out", spec.out_dir, "output directory (default $GPF_OUT_DIR or ./runs)");
  run->add_option("--workers", spec.workers, "parallel runs")->capture_default_str()->check(CLI::PositiveNumber);
  run->add_flag("--plot,!--no-plot", spec.plot, "write an SVG of the trajectories")->capture_default_str();

  auto* bench = app.add_subcommand("bench", "per-scan fit and prediction latency");
  common(bench);
  std::size_t synthetic = 4000;
  int repeats = 10;
  bench->add_option("--synthetic-points", synthetic, "synthetic surface size (0 to skip)")->capture_default_str();
  bench->add_option("--repeats", repeats, "synthetic fits")->capture_default_str();

  auto* scan = app.add_subcommand("scan", "fit one point cloud and write the grid and frontiers");
  std::string cloud_path, grid_out, frontier_out;
  scan->add_option("--cloud", cloud_path, "text file with one 'x y z' point per line")->required();
  scan->add_option("--scenario", spec.scenario, "scenario supplying surface/fit/frontier settings")
      ->capture_default_str();
  scan->add_option("--set", sets, "override a scenario key");
  scan->add_option("--grid", grid_out, "grid CSV output (default stdout summary only)");
  scan->add_option("--frontiers", frontier_out, "frontier CSV output (default stdout)");

  auto* list = app.add_subcommand("list", "built-in scenarios");

  CLI11_PARSE(app, argc, argv);

  try {
    for (const auto& s : sets) spec.overrides.push_back(gpf::sim::parse_override(s));
    spec.method = gpf::parse_method(method);
    spec.seeds = seed_list(seeds, first_seed);

    if (*list) {
      for (const auto& name : gpf::sim::builtin_scenarios()) {
        const auto sc = gpf::sim::resolve_scenario(name);
        std::cout << name << "  " << sc.description << "\n";
      }
      return 0;
    }

    if (*run) {
      const gpf::Experiment ex = gpf::run_experiment(spec);
      gpf::print_summary(std::cout, ex);
      for (const auto& path : gpf::write_experiment(ex, spec)) std::cout << "wrote " << path << "\n";
      return ex.all_succeeded() ? 0 : 1;
    }

    if (*bench) {
      spec.seeds = {first_seed};
      gpf::print_bench(std::cout, gpf::bench(spec, synthetic, repeats));
      return 0;
    }

    if (*scan) {
      const auto sc = gpf::prepare_scenario(spec);
      const auto cloud = gpf::load_pointcloud(cloud_path);
      const auto surface = gpf::build_surface(cloud, sc.surface);
      const auto model = gpf::fit(surface, sc.fit);
      const auto grid = gpf::predict_grid(model, sc.surface);
      const auto frontiers = gpf::extract_frontiers(grid, sc.frontier, gpf::Pose2{});
      std::cerr << "points " << surface.size() << "  elbo " << model.elbo() << "  frontiers "
                << frontiers.size() << "\n";
      if (!grid_out.empty()) {
        std::ofstream f(grid_out);
        if (!f) throw gpf::Error("cannot write " + grid_out);
        gpf::write_grid_csv(f, grid);
      }
      if (frontier_out.empty()) {
        gpf::write_frontiers_csv(std::cout, frontiers);
      } else {
        std::ofstream f(frontier_out);
        if (!f) throw gpf::Error("cannot write " + frontier_out);
        gpf::write_frontiers_csv(f, frontiers);
      }
      return 0;
    }
  } catch (const gpf::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const gpf::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
