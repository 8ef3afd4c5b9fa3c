"""One-call clearing: build a formulation, solve it, decode and report."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

from .bnp import BnpConfig, solve_picef_bnp
from .errors import Unsupported
from .formulations import FORMULATIONS, apply_failure_objective, build
from .instance import Instance
from .solution import Solution, decode_solution
from .solver.backend import solve_lp, solve_mip
from .solver.bnb import MipConfig

SOLVE_FORMULATIONS = tuple(FORMULATIONS) + ("picef-bnp",)


@dataclass
class SolveResult:
    formulation: str
    solution: Solution | None
    lp_value: float
    num_variables: int
    num_constraints: int
    solver_stats: dict = field(default_factory=dict)
    wall_time_ms: float = 0.0

    @property
    def objective(self) -> float | None:
        return None if self.solution is None else self.solution.weight


def build_model(inst: Instance, formulation: str):
    """Model for ``formulation``, with the expected-weight objective when ``inst`` has p."""
    model = build(inst, formulation)
    if inst.failure_prob is not None:
        model = apply_failure_objective(model, inst)
    return model


def solve(inst: Instance, formulation: str = "picef", relax: bool = False,
          mip_config: MipConfig | None = None, bnp_config: BnpConfig | None = None) -> SolveResult:
    """Clear ``inst`` with the named formulation (or ``"picef-bnp"``).

    With ``relax`` only the LP relaxation is solved and ``solution`` is None.
    """
    start = time.perf_counter()
    if formulation == "picef-bnp":
        if relax:
            raise Unsupported("the branch-and-price solver has no relaxation-only mode; use picef")
        sol, stats = solve_picef_bnp(inst, bnp_config)
        return SolveResult(formulation, sol, stats.root_bound, 0, 0, stats.to_dict(),
                           (time.perf_counter() - start) * 1e3)
    if formulation not in FORMULATIONS:
        raise ValueError(f"unknown formulation {formulation!r}; choose from {', '.join(SOLVE_FORMULATIONS)}")
    model = build_model(inst, formulation)
    if relax:
        lp = solve_lp(model)
        return SolveResult(formulation, None, lp.value, model.num_variables, model.num_constraints,
                           {"lp_iterations": lp.iterations}, (time.perf_counter() - start) * 1e3)
    out = solve_mip(model, mip_config)
    lp_value = out.root_lp_value
    if not math.isfinite(lp_value):
        lp_value = solve_lp(model).value
    sol = decode_solution(model, out.assignment, inst)
    return SolveResult(formulation, sol, lp_value, model.num_variables, model.num_constraints,
                       {"nodes": out.nodes_explored}, (time.perf_counter() - start) * 1e3)
