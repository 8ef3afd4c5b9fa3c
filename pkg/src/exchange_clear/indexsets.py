"""Enumeration of cycles and chains, per-copy distances and position-index sets.

Graph copy ``l`` is the subgraph induced by pair vertices with id ``>= l``; a cycle
lives in the copy of its smallest vertex.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

from .errors import ArcNotInCopy, ModelTooLarge
from .instance import Chain, Cycle, Instance

INF = math.inf


@dataclass(frozen=True)
class CopyDistances:
    copy_root: int
    dist_from_root: dict[int, float]
    dist_to_root: dict[int, float]

    def from_root(self, v: int) -> float:
        return self.dist_from_root.get(v, INF)

    def to_root(self, v: int) -> float:
        return self.dist_to_root.get(v, INF)


@dataclass(frozen=True)
class PositionSet:
    arc: tuple[int, int]
    copy: int | None
    positions: tuple[int, ...]


def _bfs(start: int, neighbours, allowed) -> dict[int, int]:
    dist = {start: 0}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in neighbours[u]:
            if v not in dist and allowed(v):
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def copy_distances(inst: Instance, l: int) -> CopyDistances:
    """Shortest arc-count distances from and to ``l`` inside graph copy ``l``.

    Vertices missing from the maps are unreachable; use :meth:`CopyDistances.from_root`
    to read them with an infinite default.
    """
    if l not in inst.pairs:
        raise ValueError(f"graph copies are rooted at pair vertices, got {l}")
    in_copy = lambda v: v >= l  # noqa: E731
    fwd = _bfs(l, inst.successors, in_copy)
    bwd = _bfs(l, inst.predecessors, in_copy)
    return CopyDistances(l, fwd, bwd)


def ndd_distances(inst: Instance) -> dict[int, int]:
    """Shortest arc-count distance from the nearest NDD to every reachable vertex."""
    dist = {v: 0 for v in inst.ndds}
    queue = deque(inst.ndds)
    while queue:
        u = queue.popleft()
        for v in inst.successors[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def enumerate_cycles(inst: Instance, max_len: int | None = None, limit: int | None = None) -> list[Cycle]:
    """All elementary cycles of length 2..K in canonical rotation, lexicographically ordered.

    Raises ModelTooLarge once more than ``limit`` cycles have been found.
    """
    K = inst.cycle_cap if max_len is None else max_len
    found: list[Cycle] = []
    if K < 2:
        return found
    succ = inst.successors
    for s in inst.pairs:
        to_s = _bfs(s, inst.predecessors, lambda v: v >= s)
        path = [s]
        on_path = {s}

        def extend():
            last = path[-1]
            for v in succ[last]:
                if v == s:
                    if len(path) >= 2:
                        found.append(Cycle(tuple(path)))
                        if limit is not None and len(found) > limit:
                            raise ModelTooLarge(f"more than {limit} cycles of length <= {K}")
                    continue
                # len(path) arcs used after stepping to v, plus the way home
                if v > s and v not in on_path and len(path) + to_s.get(v, INF) <= K:
                    path.append(v)
                    on_path.add(v)
                    extend()
                    on_path.discard(v)
                    path.pop()

        extend()
    return found


def enumerate_chains(inst: Instance, max_len: int | None = None, limit: int | None = None) -> list[Chain]:
    """All simple NDD-initiated paths with 1..L arcs, lexicographically ordered."""
    L = inst.chain_cap if max_len is None else max_len
    found: list[Chain] = []
    if L < 1:
        return found
    succ = inst.successors
    for a in inst.ndds:
        path = [a]
        on_path = {a}

        def extend():
            for v in succ[path[-1]]:
                if v in on_path:
                    continue
                path.append(v)
                found.append(Chain(tuple(path)))
                if limit is not None and len(found) > limit:
                    raise ModelTooLarge(f"more than {limit} chains of length <= {L}")
                if len(path) - 1 < L:
                    on_path.add(v)
                    extend()
                    on_path.discard(v)
                path.pop()

        extend()
    return found


def pief_positions(inst: Instance, i: int, j: int, l: int, variant: str = "full",
                   dist: CopyDistances | None = None) -> PositionSet:
    """Positions at which arc ``(i, j)`` may sit in a cycle of graph copy ``l``.

    ``variant`` is ``"full"``, ``"reduced"`` (shortest-path filter) or ``"reduced2"``
    (reduced without positions 1 and K).  Pass ``dist`` to reuse the copy's BFS.
    """
    K = inst.cycle_cap
    if not inst.has_arc(i, j) or i < l or j < l or l not in inst.pairs or inst.is_ndd(i):
        raise ArcNotInCopy(f"arc ({i}, {j}) is not in graph copy {l}")
    if i == l:
        full = range(1, 2) if K >= 1 else range(0)
    elif j == l:
        full = range(2, K + 1)
    else:
        full = range(2, K)
    if variant == "full":
        return PositionSet((i, j), l, tuple(full))
    if variant not in ("reduced", "reduced2"):
        raise ValueError(f"unknown PIEF variant {variant!r}")
    if dist is None:
        dist = copy_distances(inst, l)
    d_in, d_out = dist.from_root(i), dist.to_root(j)
    ks = [k for k in full if d_in < k and d_out <= K - k]
    if variant == "reduced2":
        ks = [k for k in ks if k not in (1, K)]
    return PositionSet((i, j), l, tuple(ks))


def picef_positions(inst: Instance, i: int, j: int, reduced: bool = False,
                    ndd_dist: dict[int, int] | None = None) -> PositionSet:
    """Chain positions available to arc ``(i, j)``."""
    L = inst.chain_cap
    if not inst.has_arc(i, j):
        raise ValueError(f"({i}, {j}) is not an arc")
    if inst.is_ndd(i):
        return PositionSet((i, j), None, (1,) if L >= 1 else ())
    lo = 2
    if reduced:
        if ndd_dist is None:
            ndd_dist = ndd_distances(inst)
        d = ndd_dist.get(i)
        if d is None:
            return PositionSet((i, j), None, ())
        lo = d + 1
    return PositionSet((i, j), None, tuple(range(lo, L + 1)))
