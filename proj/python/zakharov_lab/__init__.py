"""Radial Zakharov system lab."""

from ._core import (
    ConfigError,
    GroundState,
    RadialGrid,
    ThresholdConstants,
    __version__,
    b_function,
    classify,
    default_beta,
    k_functional,
    lemma24_audit,
    mass,
    nls_energy,
    parse_config,
    resonance_scan,
    run_scenario,
    solve_ground_state,
    threshold_constants,
    zakharov_energy,
)

__all__ = [
    "ConfigError",
    "GroundState",
    "RadialGrid",
    "ThresholdConstants",
    "__version__",
    "b_function",
    "classify",
    "default_beta",
    "k_functional",
    "lemma24_audit",
    "mass",
    "nls_energy",
    "parse_config",
    "resonance_scan",
    "run_scenario",
    "solve_ground_state",
    "threshold_constants",
    "zakharov_energy",
]
