"""Branch and price for PICEF: explicit chain-arc variables, cycle columns generated on demand."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

from .errors import LimitReached
from .formulations import apply_failure_objective, build_picef, cycle_tag
from .instance import Cycle, Instance
from .pricing import PricingDuals, price_cycles_deterministic, price_cycles_discounted
from .solution import Solution, decode_solution
from .solver.backend import solve_lp
from .solver.simplex import OPTIMAL

INITIAL_COLUMNS = ("none", "greedy")


@dataclass
class BnpConfig:
    """Branch-and-price settings.

    Attributes:
        initial_columns: ``"none"`` starts from an empty pool; ``"greedy"`` seeds it with
            vertex-disjoint positive-weight cycles.
        column_cap: most columns added per pricing round (best price first); None adds all.
        node_limit, time_limit: raise :class:`LimitReached` when exceeded.
        int_tol: integrality tolerance.
    """

    initial_columns: str = "none"
    column_cap: int | None = None
    node_limit: int | None = None
    time_limit: float | None = None
    int_tol: float = 1e-6


@dataclass
class BnpStats:
    columns_generated: int = 0
    pricing_calls: int = 0
    nodes: int = 0
    lp_solves: int = 0
    root_bound: float = math.nan
    pool_size: int = 0

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _greedy_columns(inst: Instance) -> list[Cycle]:
    from .indexsets import enumerate_cycles

    taken, pool = set(), []
    cycles = enumerate_cycles(inst)
    weight = {c: sum(inst.weight[a] for a in c.arcs) for c in cycles}
    for c in sorted(cycles, key=lambda c: (-weight[c], c.vertices)):
        if weight[c] > 0 and taken.isdisjoint(c.vertices):
            pool.append(c)
            taken.update(c.vertices)
    return pool


class _Master:
    def __init__(self, inst: Instance, pool: list[Cycle], p):
        self.inst, self.pool, self.p = inst, pool, p
        self._model = None

    def add(self, cycles):
        self.pool.extend(cycles)
        self._model = None

    @property
    def model(self):
        if self._model is None:
            m = build_picef(self.inst, cycles=self.pool, max_variables=None)
            self._model = apply_failure_objective(m, self.inst, self.p) if self.p is not None else m
        return self._model


def _branch_tag(model, primal, int_tol):
    """Most fractional cycle column, else most fractional chain-arc variable."""
    for family in ("z", "y"):
        best, best_frac = None, int_tol
        for v in model.variables:
            if v.tag[0] != family:
                continue
            x = primal[v.tag]
            frac = abs(x - round(x))
            if frac > best_frac + 1e-12:
                best, best_frac = v.tag, frac
        if best is not None:
            return best
    return None


def solve_picef_bnp(inst: Instance, config: BnpConfig | None = None) -> tuple[Solution, BnpStats]:
    """Solve the clearing problem to optimality by depth-first branch and price.

    Every node LP is priced to completion before it is used for bounding or branching.
    Pricing is failure-aware when the instance carries a success probability.
    """
    config = config or BnpConfig()
    if config.initial_columns not in INITIAL_COLUMNS:
        raise ValueError(f"initial_columns must be one of {INITIAL_COLUMNS}")
    p = inst.failure_prob
    start = time.perf_counter()
    stats = BnpStats()
    master = _Master(inst, _greedy_columns(inst) if config.initial_columns == "greedy" else [], p)
    incumbent_val, incumbent = -math.inf, None
    stack = [{}]

    def price(duals):
        in_pool = master.pool
        stats.pricing_calls += 1
        if p is None:
            return price_cycles_deterministic(inst, duals, exclude=in_pool)
        return price_cycles_discounted(inst, duals, p, exclude=in_pool)

    while stack:
        if (config.node_limit is not None and stats.nodes >= config.node_limit) or (
                config.time_limit is not None and time.perf_counter() - start > config.time_limit):
            partial = None
            if incumbent is not None:
                partial = decode_solution(master.model, incumbent, inst)
            raise LimitReached(f"branch and price stopped after {stats.nodes} nodes", partial)
        fix = stack.pop()
        stats.nodes += 1
        while True:
            model = master.model
            lp = solve_lp(model, fix)
            stats.lp_solves += 1
            if lp.status != OPTIMAL:
                break
            duals = PricingDuals({i: lp.duals.get(("capacity", i), 0.0) for i in inst.pairs})
            new = price(duals)
            if not new:
                break
            if config.column_cap is not None:
                new = new[: config.column_cap]
            master.add([pc.cycle for pc in new])
            stats.columns_generated += len(new)
        if stats.nodes == 1:
            stats.root_bound = lp.value if lp.status == OPTIMAL else math.nan
        if lp.status != OPTIMAL:
            continue
        tol = 1e-9 * (1.0 + abs(incumbent_val)) if incumbent is not None else 0.0
        if lp.value <= incumbent_val + tol:
            continue
        tag = _branch_tag(model, lp.primal, config.int_tol)
        if tag is None:
            incumbent = {t: float(round(x)) for t, x in lp.primal.items()}
            incumbent_val = model.objective_value(incumbent)
            continue
        stack.append({**fix, tag: (0.0, 0.0)})
        stack.append({**fix, tag: (1.0, 1.0)})

    stats.pool_size = len(master.pool)
    if incumbent is None:  # the empty packing is always feasible, so this is unreachable
        return Solution(), stats
    return decode_solution(master.model, incumbent, inst), stats


__all__ = ["BnpConfig", "BnpStats", "solve_picef_bnp", "cycle_tag"]
