"""LP-based branch and bound for binary models."""

from __future__ import annotations

import heapq
import itertools
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Hashable

from ..errors import LimitReached, NumericalFailure
from ..model import MipModel
from .simplex import INFEASIBLE, OPTIMAL, UNBOUNDED, LpOutcome, solve_lp

DEPTH_FIRST, BEST_BOUND = "depth-first", "best-bound"


@dataclass
class MipConfig:
    node_limit: int | None = None
    time_limit: float | None = None
    search: str = DEPTH_FIRST
    int_tol: float = 1e-6


@dataclass
class MipOutcome:
    status: str
    value: float
    assignment: dict[Hashable, float] = field(default_factory=dict)
    nodes_explored: int = 0
    bound: float = math.nan
    root_lp_value: float = math.nan


def _prune_tol(incumbent: float) -> float:
    return 1e-9 * (1.0 + abs(incumbent)) if math.isfinite(incumbent) else 0.0


def most_fractional(model: MipModel, primal, int_tol: float):
    """Tag of the integral variable whose value is furthest from integer, or None."""
    best, best_frac = None, int_tol
    for v in model.variables:
        if not v.integral:
            continue
        x = primal[v.tag]
        frac = abs(x - round(x))
        if frac > best_frac + 1e-12:
            best, best_frac = v.tag, frac
    return best


def branch_and_bound(model: MipModel, config: MipConfig | None = None,
                     lp_solver: Callable[..., LpOutcome] = solve_lp) -> MipOutcome:
    """Solve ``model`` to optimality over its integral variables.

    Branches on the most fractional variable (ties to the earlier variable), exploring
    the up-branch first.  Raises :class:`LimitReached` with a partial outcome if a
    node or time limit is hit.
    """
    config = config or MipConfig()
    start = time.perf_counter()
    counter = itertools.count()
    incumbent_val = -math.inf
    incumbent = None
    nodes = 0
    root_value = math.nan

    # Each open node: (parent bound, tie-break, fixings); bounds negated in the heap.
    open_nodes: list = []

    def pop():
        if config.search == BEST_BOUND:
            bound, _, fix = heapq.heappop(open_nodes)
            return -bound, fix
        bound, _, fix = open_nodes.pop()
        return bound, fix

    def push(bound, fix):
        if config.search == BEST_BOUND:
            heapq.heappush(open_nodes, (-bound, next(counter), fix))
        else:
            open_nodes.append((bound, next(counter), fix))

    push(math.inf, {})

    def remaining_bound():
        vals = [(-b if config.search == BEST_BOUND else b) for b, _, _ in open_nodes]
        return max(vals + [incumbent_val])

    while open_nodes:
        parent_bound, fix = pop()
        if parent_bound <= incumbent_val + _prune_tol(incumbent_val):
            continue
        if config.node_limit is not None and nodes >= config.node_limit or (
                config.time_limit is not None and time.perf_counter() - start > config.time_limit):
            push(parent_bound, fix)
            partial = MipOutcome("limit", incumbent_val, incumbent or {}, nodes,
                                 remaining_bound(), root_value)
            raise LimitReached(f"stopped after {nodes} nodes", partial)
        lp = lp_solver(model, fix)
        nodes += 1
        if nodes == 1:
            if lp.status == UNBOUNDED:
                raise NumericalFailure("LP relaxation is unbounded")
            root_value = lp.value if lp.status == OPTIMAL else math.nan
        if lp.status != OPTIMAL:
            continue
        if lp.value <= incumbent_val + _prune_tol(incumbent_val):
            continue
        tag = most_fractional(model, lp.primal, config.int_tol)
        if tag is None:
            assignment = {
                v.tag: float(round(lp.primal[v.tag])) if v.integral else lp.primal[v.tag]
                for v in model.variables
            }
            incumbent_val = model.objective_value(assignment)
            incumbent = assignment
            continue
        x = lp.primal[tag]
        down = {**fix, tag: (math.floor(x), math.floor(x))}
        up = {**fix, tag: (math.ceil(x), math.ceil(x))}
        if config.search == BEST_BOUND:
            push(lp.value, up)
            push(lp.value, down)
        else:
            push(lp.value, down)
            push(lp.value, up)

    if incumbent is None:
        return MipOutcome(INFEASIBLE, math.nan, {}, nodes, math.nan, root_value)
    return MipOutcome(OPTIMAL, incumbent_val, incumbent, nodes, incumbent_val, root_value)
