from ._core import (
    ErrorBreakdown,
    Interval,
    LevelReport,
    ShockPath,
    SolverError,
    SpatialGrid,
    StepMode,
    Strategy,
    TestCase,
    TimePartition,
    ToleranceRule,
    adaptive_loop,
    analyze_run,
    perturbed_shock,
    reference_functional,
    steady_shock,
    summary_csv,
    uniform_cfl_partition,
)

__all__ = [
    "ErrorBreakdown",
    "Interval",
    "LevelReport",
    "ShockPath",
    "SolverError",
    "SpatialGrid",
    "StepMode",
    "Strategy",
    "TestCase",
    "TimePartition",
    "ToleranceRule",
    "adaptive_loop",
    "analyze_run",
    "perturbed_shock",
    "reference_functional",
    "steady_shock",
    "summary_csv",
    "uniform_cfl_partition",
]
