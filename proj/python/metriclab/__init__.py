"""Planar quasi-hyperbolic and Kobayashi distance laboratory."""

from metriclab._core import (
    Domain,
    IncompatibleError,
    SpecError,
    UnsoundSuiteError,
    bound_constants,
    c0_solve,
    g_value,
    h_num,
    i_dist,
    k_disc_real,
    k_dist,
    npt_divergence,
    poincare_disc,
    q_ratio,
    run_suite,
    s_dist,
    v_dist,
)

__all__ = [
    "Domain",
    "IncompatibleError",
    "SpecError",
    "UnsoundSuiteError",
    "bound_constants",
    "c0_solve",
    "g_value",
    "h_num",
    "i_dist",
    "k_disc_real",
    "k_dist",
    "npt_divergence",
    "poincare_disc",
    "q_ratio",
    "run_suite",
    "s_dist",
    "v_dist",
]
