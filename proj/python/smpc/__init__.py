"""Sequential sphere-decoding MPC for a back-to-back three-level converter."""

from ._core import (
    ConfigError,
    Error,
    ScenarioConfig,
    SimulationError,
    SolverError,
    SwitchState,
    brute_force_kbest,
    clarke,
    clarke_pinv,
    compute_metrics,
    compute_thd,
    k_best,
    load_config,
    park,
    park_inv,
    plant_step,
    random_qp,
    run_scenario,
    run_verification,
)

__all__ = [
    "ConfigError",
    "Error",
    "ScenarioConfig",
    "SimulationError",
    "SolverError",
    "SwitchState",
    "brute_force_kbest",
    "clarke",
    "clarke_pinv",
    "compute_metrics",
    "compute_thd",
    "k_best",
    "load_config",
    "park",
    "park_inv",
    "plant_step",
    "random_qp",
    "run_scenario",
    "run_verification",
]
