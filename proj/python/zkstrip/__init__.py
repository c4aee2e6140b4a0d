"""Pseudospectral solver for the generalized ZK equation on a walled strip."""

from ._core import (
    BlowupError,
    Grid,
    UnsupportedError,
    conserved_quantities,
    csv,
    eval_weight,
    forward_transform,
    g_h,
    g_h_prime,
    g_h_star,
    integrate,
    inverse_transform,
    kappa0_plateau,
    run_scenario,
    self_check,
    simulate,
    smoothstep,
    steklov_ratio,
    validate_config,
)

__all__ = [
    "BlowupError",
    "Grid",
    "UnsupportedError",
    "conserved_quantities",
    "csv",
    "eval_weight",
    "forward_transform",
    "g_h",
    "g_h_prime",
    "g_h_star",
    "integrate",
    "inverse_transform",
    "kappa0_plateau",
    "run_scenario",
    "self_check",
    "simulate",
    "smoothstep",
    "steklov_ratio",
    "validate_config",
]
