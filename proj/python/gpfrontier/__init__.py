from ._core import (
    ConfigError,
    FitConfig,
    FitError,
    FrontierConfig,
    Grid,
    InvalidInput,
    Model,
    Pose2,
    Surface,
    SurfaceConfig,
    build_surface,
    builtin_scenarios,
    compute_metrics,
    extract_frontiers,
    fit,
    predict_grid,
    run,
    scan,
    scenario_configs,
)

__all__ = [
    "ConfigError",
    "FitConfig",
    "FitError",
    "FrontierConfig",
    "Grid",
    "InvalidInput",
    "Model",
    "Pose2",
    "Surface",
    "SurfaceConfig",
    "build_surface",
    "builtin_scenarios",
    "compute_metrics",
    "extract_frontiers",
    "fit",
    "predict_grid",
    "run",
    "scan",
    "scenario_configs",
]
