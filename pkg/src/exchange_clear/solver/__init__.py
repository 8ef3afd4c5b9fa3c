"""LP and MIP solving over :class:`~exchange_clear.model.MipModel`."""

from .backend import (
    BACKENDS,
    BUILTIN,
    BuiltinBackend,
    CrossCheck,
    ScipyBackend,
    active_backend,
    backend_by_name,
    cross_check,
    register_backend,
    reset_backend,
    solve_lp,
    solve_mip,
)
from .bnb import BEST_BOUND, DEPTH_FIRST, MipConfig, MipOutcome, branch_and_bound
from .simplex import INFEASIBLE, OPTIMAL, UNBOUNDED, LpOutcome, solve_lp_arrays

__all__ = [
    "BACKENDS", "BUILTIN", "BEST_BOUND", "DEPTH_FIRST", "INFEASIBLE", "OPTIMAL", "UNBOUNDED",
    "BuiltinBackend", "CrossCheck", "LpOutcome", "MipConfig", "MipOutcome", "ScipyBackend",
    "active_backend", "backend_by_name", "branch_and_bound", "cross_check", "register_backend",
    "reset_backend", "solve_lp", "solve_lp_arrays", "solve_mip",
]
