#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gpf/errors.hpp"
#include "gpf/frontier.hpp"
#include "gpf/gp.hpp"
#include "gpf/metrics.hpp"
#include "gpf/sim/runner.hpp"
#include "gpf/sim/scenario.hpp"
#include "gpf/sim/sensor.hpp"
#include "gpf/surface.hpp"

namespace py = pybind11;
using namespace gpf;

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::vector<sim::Override> to_overrides(const std::map<std::string, std::string>& m) {
  return {m.begin(), m.end()};
}

std::vector<Vec3> to_cloud(const Eigen::Ref<const RowMatrix>& pts) {
  if (pts.cols() != 3) throw InvalidInput("point cloud must be an (N, 3) array");
  std::vector<Vec3> cloud(static_cast<std::size_t>(pts.rows()));
  for (Eigen::Index i = 0; i < pts.rows(); ++i) cloud[static_cast<std::size_t>(i)] = pts.row(i).transpose();
  return cloud;
}

RowMatrix from_cloud(const std::vector<Vec3>& cloud) {
  RowMatrix out(static_cast<Eigen::Index>(cloud.size()), 3);
  for (std::size_t i = 0; i < cloud.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = cloud[i].transpose();
  return out;
}

// Columns t, x, y, heading, v, w, r_min.
std::vector<TrajectorySample> to_log(const Eigen::Ref<const RowMatrix>& a) {
  if (a.cols() < 7) throw InvalidInput("trajectory needs columns t, x, y, heading, v, w, r_min");
  std::vector<TrajectorySample> log(static_cast<std::size_t>(a.rows()));
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    auto& s = log[static_cast<std::size_t>(i)];
    s.t = a(i, 0);
    s.x = a(i, 1);
    s.y = a(i, 2);
    s.heading = a(i, 3);
    s.v = a(i, 4);
    s.w = a(i, 5);
    s.r_min = a(i, 6);
  }
  return log;
}

RowMatrix from_log(const std::vector<TrajectorySample>& log) {
  RowMatrix out(static_cast<Eigen::Index>(log.size()), 7);
  for (std::size_t i = 0; i < log.size(); ++i) {
    const auto& s = log[i];
    out.row(static_cast<Eigen::Index>(i)) << s.t, s.x, s.y, s.heading, s.v, s.w, s.r_min;
  }
  return out;
}

py::dict metrics_dict(const MetricsReport& m) {
  py::dict d;
  d["t_tot"] = m.t_tot;
  d["d_acc"] = m.d_acc;
  d["c_chg"] = m.c_chg;
  d["j_acc"] = m.j_acc;
  d["r_obs"] = m.r_obs;
  d["success"] = m.success;
  return d;
}

RowMatrix grid_view(const PredictionGrid& g, const Eigen::VectorXd& v) {
  return Eigen::Map<const RowMatrix>(v.data(), g.n_alpha, g.n_theta);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Mapless navigation with sparse GP occupancy surfaces";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<FitError>(m, "FitError", PyExc_RuntimeError);

  py::class_<Pose2>(m, "Pose2")
      .def(py::init<double, double, double>(), py::arg("x") = 0.0, py::arg("y") = 0.0, py::arg("heading") = 0.0)
      .def_readwrite("x", &Pose2::x)
      .def_readwrite("y", &Pose2::y)
      .def_readwrite("heading", &Pose2::heading)
      .def("__repr__", [](const Pose2& p) {
        return "Pose2(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ", " + std::to_string(p.heading) + ")";
      });

  py::class_<SurfaceConfig>(m, "SurfaceConfig")
      .def(py::init<>())
      .def_readwrite("r_oc", &SurfaceConfig::r_oc)
      .def_readwrite("alpha_min", &SurfaceConfig::alpha_min)
      .def_readwrite("alpha_max", &SurfaceConfig::alpha_max)
      .def_readwrite("res_theta", &SurfaceConfig::res_theta)
      .def_readwrite("res_alpha", &SurfaceConfig::res_alpha)
      .def_readwrite("max_points", &SurfaceConfig::max_points)
      .def_property_readonly("n_theta", &SurfaceConfig::n_theta)
      .def_property_readonly("n_alpha", &SurfaceConfig::n_alpha);

  py::class_<FitConfig>(m, "FitConfig")
      .def(py::init<>())
      .def_readwrite("num_inducing", &FitConfig::num_inducing)
      .def_readwrite("max_iterations", &FitConfig::max_iterations)
      .def_readwrite("optimize_hyperparameters", &FitConfig::optimize_hyperparameters)
      .def_readwrite("optimize_inducing", &FitConfig::optimize_inducing)
      .def_readwrite("block_size", &FitConfig::block_size);

  py::class_<FrontierConfig>(m, "FrontierConfig")
      .def(py::init<>())
      .def_readwrite("k_m", &FrontierConfig::k_m)
      .def_readwrite("min_region_cells", &FrontierConfig::min_region_cells);

  py::class_<OccupancySurface>(m, "Surface")
      .def_readonly("config", &OccupancySurface::config)
      .def_readonly("inputs", &OccupancySurface::inputs)
      .def_readonly("targets", &OccupancySurface::targets)
      .def_readonly("azimuth_binning", &OccupancySurface::azimuth_binning)
      .def("__len__", &OccupancySurface::size);

  m.def(
      "build_surface",
      [](const Eigen::Ref<const RowMatrix>& points, const SurfaceConfig& cfg) {
        return build_surface(to_cloud(points), cfg);
      },
      py::arg("points"), py::arg("config") = SurfaceConfig{},
      "Project an (N, 3) sensor-frame point cloud onto the occupancy surface.");

  py::class_<VsgpModel>(m, "Model")
      .def("predict",
           [](const VsgpModel& model, const Eigen::Ref<const RowMatrix>& q) {
             if (q.cols() != 2) throw InvalidInput("query must be an (N, 2) array of (theta, alpha)");
             const GpPrediction p = model.predict(SurfaceInputs(q));
             return py::make_tuple(p.mean, p.variance);
           })
      .def_property_readonly("inducing", &VsgpModel::inducing)
      .def_property_readonly("elbo", [](const VsgpModel& model) { return model.elbo(); })
      .def_property_readonly("converged", &VsgpModel::converged)
      .def_property_readonly("hyperparameters", [](const VsgpModel& model) {
        const auto& h = model.hyperparameters();
        py::dict d;
        d["signal_var"] = h.kernel.signal_var;
        d["len_theta"] = h.kernel.len_theta;
        d["len_alpha"] = h.kernel.len_alpha;
        d["alpha_rq"] = h.kernel.alpha_rq;
        d["noise_var"] = h.noise_var;
        return d;
      });

  m.def("fit", &fit, py::arg("surface"), py::arg("config") = FitConfig{},
        py::call_guard<py::gil_scoped_release>());

  py::class_<PredictionGrid>(m, "Grid")
      .def_readonly("config", &PredictionGrid::config)
      .def_property_readonly("mean", [](const PredictionGrid& g) { return grid_view(g, g.mean); })
      .def_property_readonly("variance", [](const PredictionGrid& g) { return grid_view(g, g.variance); })
      .def_readonly("prior_variance", &PredictionGrid::prior_variance);

  m.def("predict_grid", &predict_grid, py::arg("model"), py::arg("config") = SurfaceConfig{},
        "Mean and variance on the lattice, shaped (n_alpha, n_theta).");

  m.def(
      "extract_frontiers",
      [](const PredictionGrid& g, const FrontierConfig& cfg, const Pose2& pose) {
        py::list out;
        for (const auto& f : extract_frontiers(g, cfg, pose)) {
          py::dict d;
          d["theta"] = f.theta;
          d["alpha"] = f.alpha;
          d["range"] = f.range;
          d["x"] = f.world.x();
          d["y"] = f.world.y();
          d["region_size"] = f.region_size;
          out.append(d);
        }
        return out;
      },
      py::arg("grid"), py::arg("config") = FrontierConfig{}, py::arg("pose") = Pose2{});

  m.def(
      "compute_metrics",
      [](const Eigen::Ref<const RowMatrix>& log) { return metrics_dict(compute_metrics(to_log(log))); },
      py::arg("trajectory"), "Metrics of a (N, 7) array with columns t, x, y, heading, v, w, r_min.");

  m.def("builtin_scenarios", &sim::builtin_scenarios);

  m.def(
      "scan",
      [](const std::string& scenario, const Pose2& pose) {
        const sim::Scenario sc = sim::resolve_scenario(scenario);
        return from_cloud(sim::raycast_scan(sc.world, pose, sc.sensor));
      },
      py::arg("scenario"), py::arg("pose"), "Noiseless simulated scan as an (N, 3) array.");

  m.def(
      "scenario_configs",
      [](const std::string& scenario, const std::map<std::string, std::string>& overrides) {
        const sim::Scenario sc = sim::resolve_scenario(scenario, to_overrides(overrides));
        py::dict d;
        d["name"] = sc.name;
        d["start"] = sc.start;
        d["goal"] = py::make_tuple(sc.goal.x(), sc.goal.y());
        d["surface"] = sc.surface;
        d["fit"] = sc.fit;
        d["frontier"] = sc.frontier;
        return d;
      },
      py::arg("scenario"), py::arg("overrides") = std::map<std::string, std::string>{});

  m.def(
      "run",
      [](const std::string& scenario, std::uint64_t seed, const std::map<std::string, std::string>& overrides) {
        const sim::Scenario sc = sim::resolve_scenario(scenario, to_overrides(overrides));
        sim::RunResult r;
        {
          py::gil_scoped_release release;
          r = sim::run_scenario(sc, seed);
        }
        py::dict d;
        d["scenario"] = r.scenario;
        d["seed"] = r.seed;
        d["status"] = std::string(sim::to_string(r.status));
        d["message"] = r.message;
        d["trajectory"] = from_log(r.log);
        d["metrics"] = r.success() ? py::object(metrics_dict(r.metrics)) : py::none();
        return d;
      },
      py::arg("scenario") = "md", py::arg("seed") = 0,
      py::arg("overrides") = std::map<std::string, std::string>{},
      "Closed-loop run; trajectory columns are t, x, y, heading, v, w, r_min.");
}
