"""Cycle pricing for column generation over PICEF's cycle variables.

The search for positive-price cycles is reduced to finding negative-weight cycles of
bounded length: with arc weights ``delta_j - w_ij`` a cycle's total weight is the
negative of its price.  The failure-aware variant repeats the reduction once per
possible cycle length ``k`` with weights ``delta_j - p**k * w_ij``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import NegativeWeightInput
from .instance import Cycle, Instance

PRICE_TOL = 1e-9


@dataclass(frozen=True)
class PricingDuals:
    """Dual values of the pair-vertex capacity rows; missing vertices read as 0."""

    delta: Mapping[int, float] = field(default_factory=dict)

    def __getitem__(self, v: int) -> float:
        return self.delta.get(v, 0.0)


@dataclass(frozen=True, order=True)
class PricedCycle:
    price: float
    cycle: Cycle


def cycle_price(inst: Instance, cycle: Cycle, duals: PricingDuals, p: float | None = None) -> float:
    """Price ``sum(w) - sum(delta)``, or ``p**|c| * sum(w) - sum(delta)`` when ``p`` is given."""
    w = sum(inst.weight[a] for a in cycle.arcs)
    if p is not None:
        w *= p ** cycle.length
    return w - sum(duals[v] for v in cycle.vertices)


def _walk_weight(vs, weights):
    return sum(weights[vs[t], vs[(t + 1) % len(vs)]] for t in range(len(vs)))


def _label_sweep(vertices, succ, weights, K, exclude):
    """Bellman-Ford style sweep per source with one label per (depth, vertex).

    Returns the cycles found and whether some negative closed walk was dropped for
    repeating a vertex (in which case the sweep may have missed the best cycle).
    """
    found = {}
    dropped = False
    for s in vertices:
        # label[v] = (weight, predecessor-label) of the cheapest s->v walk with d arcs
        labels = [{s: (0.0, None)}]
        for d in range(1, K):
            nxt = {}
            for u, (wu, _) in labels[-1].items():
                for v in succ.get(u, ()):
                    if v <= s:
                        continue
                    w = wu + weights[u, v]
                    if v not in nxt or w < nxt[v][0]:
                        nxt[v] = (w, u)
            if not nxt:
                break
            labels.append(nxt)
            for v, (wv, _) in nxt.items():
                if (v, s) not in weights or wv + weights[v, s] >= -PRICE_TOL:
                    continue
                path = [v]
                for depth in range(d, 0, -1):
                    path.append(labels[depth][path[-1]][1])
                path.reverse()
                if len(set(path)) != len(path):
                    dropped = True
                    continue
                c = Cycle(tuple(path))
                if c not in exclude:
                    found[c] = _walk_weight(c.vertices, weights)
    return found, dropped


def _exact_search(vertices, succ, weights, K, exclude):
    """Every elementary negative cycle of length <= K, by bounded DFS from each minimum vertex."""
    found = {}
    for s in vertices:
        path, on_path = [s], {s}

        def extend(acc):
            u = path[-1]
            for v in succ.get(u, ()):
                if v == s and len(path) >= 2:
                    total = acc + weights[u, s]
                    if total < -PRICE_TOL:
                        c = Cycle(tuple(path))
                        if c not in exclude:
                            found[c] = total
                elif v > s and v not in on_path and len(path) < K:
                    path.append(v)
                    on_path.add(v)
                    extend(acc + weights[u, v])
                    on_path.discard(v)
                    path.pop()

        extend(0.0)
    return found


def find_negative_cycles(vertices: Iterable[int], arc_weights: Mapping[tuple[int, int], float],
                         K: int, exclude: Iterable[Cycle] = ()) -> list[Cycle]:
    """Elementary cycles of length <= K with total weight < -1e-9.

    A label-based sweep runs first.  An exact depth-bounded search follows when the sweep
    yields nothing outside ``exclude`` or had to drop a non-elementary walk, so the
    result is empty only if no such cycle exists and always contains a cheapest one.
    """
    vertices = sorted(set(vertices))
    exclude = frozenset(exclude)
    if K < 2:
        return []
    succ: dict[int, list[int]] = {}
    for (i, j) in sorted(arc_weights):
        succ.setdefault(i, []).append(j)
    found, dropped = _label_sweep(vertices, succ, arc_weights, K, exclude)
    if not found or dropped:
        found.update(_exact_search(vertices, succ, arc_weights, K, exclude))
    return sorted(found, key=lambda c: (found[c], c.vertices))


def _pair_arcs(inst: Instance):
    return [a for a in inst.arcs if not inst.is_ndd(a.source)]


def price_cycles_deterministic(inst: Instance, duals: PricingDuals,
                               exclude: Iterable[Cycle] = ()) -> list[PricedCycle]:
    """Cycles with price > 1e-9, best first; empty iff none exists outside ``exclude``."""
    weights = {(a.source, a.target): duals[a.target] - a.weight for a in _pair_arcs(inst)}
    cycles = find_negative_cycles(inst.pairs, weights, inst.cycle_cap, exclude)
    priced = [PricedCycle(cycle_price(inst, c, duals), c) for c in cycles]
    return sorted((pc for pc in priced if pc.price > PRICE_TOL), key=lambda pc: (-pc.price, pc.cycle))


def price_cycles_discounted(inst: Instance, duals: PricingDuals, p: float,
                            exclude: Iterable[Cycle] = ()) -> list[PricedCycle]:
    """Failure-aware pricing: union over lengths k = 2..K of the length-k reduction."""
    if any(a.weight < 0 for a in inst.arcs):
        raise NegativeWeightInput("discounted pricing requires nonnegative arc weights")
    if not (0.0 < p <= 1.0) or math.isnan(p):
        raise ValueError(f"p must lie in (0, 1], got {p}")
    arcs = _pair_arcs(inst)
    found = {}
    for k in range(2, inst.cycle_cap + 1):
        weights = {(a.source, a.target): duals[a.target] - p**k * a.weight for a in arcs}
        for c in find_negative_cycles(inst.pairs, weights, k, exclude):
            found[c] = cycle_price(inst, c, duals, p)
    priced = [PricedCycle(v, c) for c, v in found.items() if v > PRICE_TOL]
    return sorted(priced, key=lambda pc: (-pc.price, pc.cycle))
