"""Pluggable solver backends.

A backend is any object with ``solve_lp(model, bounds=None) -> LpOutcome`` and
``solve_mip(model, config=None) -> MipOutcome``.  The built-in simplex and
branch-and-bound stay available as the reference whichever backend is active.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..model import EQ, GE, LE, MipModel
from .bnb import MipConfig, MipOutcome, branch_and_bound
from .simplex import INFEASIBLE, OPTIMAL, UNBOUNDED, LpOutcome, model_arrays, solve_lp as _builtin_lp


class BuiltinBackend:
    name = "builtin"

    def solve_lp(self, model, bounds=None):
        return _builtin_lp(model, bounds)

    def solve_mip(self, model, config=None):
        return branch_and_bound(model, config, _builtin_lp)


class ScipyBackend:
    """HiGHS through ``scipy.optimize``; handy as an independent second opinion."""

    name = "scipy"

    @staticmethod
    def _split(model, bounds):
        c, A, senses, b, lower, upper = model_arrays(model, bounds)
        le = [i for i, s in enumerate(senses) if s == LE]
        ge = [i for i, s in enumerate(senses) if s == GE]
        eq = [i for i, s in enumerate(senses) if s == EQ]
        A_ub = np.vstack([A[le], -A[ge]]) if le or ge else None
        b_ub = np.concatenate([b[le], -b[ge]]) if le or ge else None
        A_eq = A[eq] if eq else None
        b_eq = b[eq] if eq else None
        return c, A_ub, b_ub, A_eq, b_eq, lower, upper, le, ge, eq

    def solve_lp(self, model, bounds=None):
        from scipy.optimize import linprog

        if model.num_variables == 0:
            return LpOutcome(OPTIMAL, 0.0, {}, {c.tag: 0.0 for c in model.constraints})
        c, A_ub, b_ub, A_eq, b_eq, lower, upper, le, ge, eq = self._split(model, bounds)
        res = linprog(-c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq,
                      bounds=list(zip(lower, np.where(np.isinf(upper), None, upper))),
                      method="highs")
        if res.status == 2:
            return LpOutcome(INFEASIBLE, math.nan)
        if res.status == 3:
            return LpOutcome(UNBOUNDED, math.nan)
        y = np.zeros(model.num_constraints)
        if A_ub is not None:
            mu = res.ineqlin.marginals
            y[le] = -mu[: len(le)]
            y[ge] = mu[len(le):]
        if A_eq is not None:
            y[eq] = -res.eqlin.marginals
        primal = {v.tag: float(res.x[t]) for t, v in enumerate(model.variables)}
        duals = {con.tag: float(y[r]) for r, con in enumerate(model.constraints)}
        return LpOutcome(OPTIMAL, float(-res.fun), primal, duals, int(res.nit))

    def solve_mip(self, model, config=None):
        from scipy.optimize import Bounds, LinearConstraint, milp

        if model.num_variables == 0:
            return MipOutcome(OPTIMAL, 0.0, {}, 0, 0.0, 0.0)
        c, A, senses, b, lower, upper = model_arrays(model)
        lo = np.where(np.array(senses) == LE, -np.inf, b)
        hi = np.where(np.array(senses) == GE, np.inf, b)
        cons = [LinearConstraint(A, lo, hi)] if model.num_constraints else []
        integrality = np.array([1 if v.integral else 0 for v in model.variables])
        res = milp(-c, constraints=cons, integrality=integrality, bounds=Bounds(lower, upper))
        if res.status == 2 or res.x is None:
            return MipOutcome(INFEASIBLE, math.nan)
        assignment = {
            v.tag: float(round(res.x[t])) if v.integral else float(res.x[t])
            for t, v in enumerate(model.variables)
        }
        value = model.objective_value(assignment)
        return MipOutcome(OPTIMAL, value, assignment, 0, value, math.nan)


BUILTIN = BuiltinBackend()
BACKENDS = {"builtin": BuiltinBackend, "scipy": ScipyBackend}

_active = BUILTIN


def register_backend(adapter) -> None:
    """Route subsequent :func:`solve_lp` / :func:`solve_mip` calls to ``adapter``."""
    global _active
    _active = adapter if adapter is not None else BUILTIN


def reset_backend() -> None:
    register_backend(None)


def active_backend():
    return _active


def backend_by_name(name: str):
    try:
        return BACKENDS[name]()
    except KeyError:
        raise ValueError(f"unknown backend {name!r}; known: {', '.join(sorted(BACKENDS))}") from None


def solve_lp(model: MipModel, bounds=None) -> LpOutcome:
    return _active.solve_lp(model, bounds)


def solve_mip(model: MipModel, config: MipConfig | None = None) -> MipOutcome:
    return _active.solve_mip(model, config)


@dataclass
class CrossCheck:
    reference_value: float
    candidate_value: float
    diverged: bool


def cross_check(model: MipModel, adapter, config: MipConfig | None = None,
                tol: float = 1e-6, relax: bool = False) -> CrossCheck:
    """Solve ``model`` with the built-in solver and with ``adapter`` and compare values."""
    if relax:
        ref, cand = BUILTIN.solve_lp(model), adapter.solve_lp(model)
    else:
        ref, cand = BUILTIN.solve_mip(model, config), adapter.solve_mip(model, config)
    if ref.status != cand.status:
        return CrossCheck(ref.value, cand.value, True)
    if ref.status != OPTIMAL:
        return CrossCheck(ref.value, cand.value, False)
    gap = abs(ref.value - cand.value)
    return CrossCheck(ref.value, cand.value, gap > tol * (1.0 + abs(ref.value)))
