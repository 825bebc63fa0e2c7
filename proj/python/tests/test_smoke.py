import math

import numpy as np
import pytest

import gpfrontier as gf


def test_builtin_scenarios_listed():
    names = gf.builtin_scenarios()
    for n in ("md", "x", "su", "cu", "gu"):
        assert n in names


def test_scan_surface_fit_and_frontiers():
    cfg = gf.scenario_configs("md")
    pose = gf.Pose2(0.5, 0.5, 0.3)
    cloud = gf.scan("md", pose)
    assert cloud.ndim == 2 and cloud.shape[1] == 3 and len(cloud) > 100

    surface = gf.build_surface(cloud, cfg["surface"])
    assert 0 < len(surface) <= cfg["surface"].max_points
    assert np.all(surface.targets > 0)

    model = gf.fit(surface, cfg["fit"])
    hyper = model.hyperparameters
    assert all(v > 0 for v in hyper.values())
    mean, var = model.predict(surface.inputs[:20])
    assert mean.shape == (20,) and np.all(var > 0)

    grid = gf.predict_grid(model, cfg["surface"])
    assert grid.mean.shape == (cfg["surface"].n_alpha, cfg["surface"].n_theta)
    assert np.all(grid.variance >= 0)

    frontiers = gf.extract_frontiers(grid, cfg["frontier"], pose)
    assert frontiers
    for f in frontiers:
        assert 0 < f["range"] <= cfg["surface"].r_oc
        assert -math.pi <= f["theta"] <= math.pi


def test_metrics_straight_line():
    t = np.linspace(0.0, 10.0, 1001)
    traj = np.column_stack([t, t, np.zeros_like(t), np.zeros_like(t), np.ones_like(t), np.zeros_like(t), 2 * np.ones_like(t)])
    m = gf.compute_metrics(traj)
    assert m["t_tot"] == pytest.approx(10.0)
    assert m["d_acc"] == pytest.approx(10.0)
    assert m["r_obs"] == pytest.approx(5.0)
    assert abs(m["c_chg"]) < 1e-9 and abs(m["j_acc"]) < 1e-9


def test_errors_map_to_value_error():
    with pytest.raises(ValueError):
        gf.compute_metrics(np.zeros((2, 7)))
    with pytest.raises(ValueError):
        gf.scenario_configs("no-such-scenario")
    with pytest.raises(ValueError):
        gf.build_surface(np.zeros((4, 2)))


def test_short_run_is_reproducible():
    a = gf.run("md", 1, {"sim.timeout": "2"})
    b = gf.run("md", 1, {"sim.timeout": "2"})
    assert a["status"] == "timeout"
    assert a["metrics"] is None
    assert a["trajectory"].shape[1] == 7
    np.testing.assert_array_equal(a["trajectory"], b["trajectory"])
