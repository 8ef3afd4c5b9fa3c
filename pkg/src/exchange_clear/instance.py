"""Compatibility-graph instances, structures (cycles and chains), file I/O and generation.

Vertices are numbered from 1.  Vertices ``1..num_ndds`` are non-directed donors
(NDDs); ``num_ndds+1..num_ndds+num_pairs`` are patient-donor pairs.
"""

from __future__ import annotations

import json
import math
import random
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

from .errors import (
    ArcIntoNdd,
    BadProbability,
    DuplicateArc,
    InstanceSyntaxError,
    LoopArc,
    NegativeWeight,
    VertexOutOfRange,
)


class Arc(NamedTuple):
    source: int
    target: int
    weight: float


@dataclass(frozen=True)
class Instance:
    """An immutable, validated kidney-exchange instance.

    Build instances with :func:`build_instance`; the constructor does no checking.
    """

    num_ndds: int
    num_pairs: int
    arcs: tuple[Arc, ...]
    cycle_cap: int
    chain_cap: int
    failure_prob: float | None = None

    @property
    def num_vertices(self) -> int:
        return self.num_ndds + self.num_pairs

    @property
    def ndds(self) -> range:
        return range(1, self.num_ndds + 1)

    @property
    def pairs(self) -> range:
        return range(self.num_ndds + 1, self.num_vertices + 1)

    def is_ndd(self, v: int) -> bool:
        return 1 <= v <= self.num_ndds

    @cached_property
    def weight(self) -> dict[tuple[int, int], float]:
        return {(a.source, a.target): a.weight for a in self.arcs}

    @cached_property
    def successors(self) -> dict[int, tuple[int, ...]]:
        out = defaultdict(list)
        for a in self.arcs:
            out[a.source].append(a.target)
        return {v: tuple(out.get(v, ())) for v in range(1, self.num_vertices + 1)}

    @cached_property
    def predecessors(self) -> dict[int, tuple[int, ...]]:
        into = defaultdict(list)
        for a in self.arcs:
            into[a.target].append(a.source)
        return {v: tuple(sorted(into.get(v, ()))) for v in range(1, self.num_vertices + 1)}

    def has_arc(self, i: int, j: int) -> bool:
        return (i, j) in self.weight

    def with_caps(self, cycle_cap: int | None = None, chain_cap: int | None = None,
                  failure_prob: float | None | type(...) = ...) -> "Instance":
        """Copy of the instance with some of the caps (or ``p``) replaced."""
        return build_instance(
            self.num_ndds,
            self.num_pairs,
            self.arcs,
            self.cycle_cap if cycle_cap is None else cycle_cap,
            self.chain_cap if chain_cap is None else chain_cap,
            self.failure_prob if failure_prob is ... else failure_prob,
        )

    def summary(self) -> dict:
        return {
            "ndds": self.num_ndds,
            "pairs": self.num_pairs,
            "arcs": len(self.arcs),
            "cycle_cap": self.cycle_cap,
            "chain_cap": self.chain_cap,
            "failure_prob": self.failure_prob,
        }


@dataclass(frozen=True, order=True)
class Cycle:
    """A cycle stored as its vertex sequence, rotated so the smallest vertex comes first."""

    vertices: tuple[int, ...]

    @classmethod
    def from_vertices(cls, seq: Sequence[int]) -> "Cycle":
        seq = tuple(seq)
        if not seq:
            raise ValueError("a cycle needs at least one vertex")
        m = seq.index(min(seq))
        return cls(seq[m:] + seq[:m])

    @property
    def arcs(self) -> tuple[tuple[int, int], ...]:
        vs = self.vertices
        return tuple((vs[t], vs[(t + 1) % len(vs)]) for t in range(len(vs)))

    @property
    def length(self) -> int:
        return len(self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True, order=True)
class Chain:
    """A chain stored as its vertex sequence; ``vertices[0]`` is the NDD."""

    vertices: tuple[int, ...]

    @property
    def arcs(self) -> tuple[tuple[int, int], ...]:
        vs = self.vertices
        return tuple((vs[t], vs[t + 1]) for t in range(len(vs) - 1))

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    def __len__(self) -> int:
        return len(self.vertices) - 1


def _check_count(name, value):
    if isinstance(value, bool) or not isinstance(value, int):
        raise InstanceSyntaxError(f"{name} must be an integer, got {value!r}")
    if value < 0:
        if name in ("num_ndds", "num_pairs"):
            raise VertexOutOfRange(f"{name} must be nonnegative, got {value}")
        raise InstanceSyntaxError(f"{name} must be nonnegative, got {value}")


def build_instance(
    num_ndds: int,
    num_pairs: int,
    arcs: Iterable,
    cycle_cap: int,
    chain_cap: int,
    failure_prob: float | None = None,
) -> Instance:
    """Validate the inputs and return an :class:`Instance`.

    ``arcs`` is an iterable of ``(source, target, weight)`` triples (or
    :class:`Arc`).  Duplicate arcs are rejected rather than merged.
    """
    _check_count("num_ndds", num_ndds)
    _check_count("num_pairs", num_pairs)
    _check_count("cycle_cap", cycle_cap)
    _check_count("chain_cap", chain_cap)
    if failure_prob is not None:
        if isinstance(failure_prob, bool) or not isinstance(failure_prob, (int, float)):
            raise BadProbability(f"failure_prob must be a number, got {failure_prob!r}")
        if not (0.0 < failure_prob <= 1.0) or math.isnan(failure_prob):
            raise BadProbability(f"failure_prob must lie in (0, 1], got {failure_prob}")
        failure_prob = float(failure_prob)

    n = num_ndds + num_pairs
    seen: dict[tuple[int, int], int] = {}
    out = []
    for idx, arc in enumerate(arcs):
        try:
            i, j, w = arc
        except (TypeError, ValueError):
            raise InstanceSyntaxError(f"arc #{idx}: expected (source, target, weight), got {arc!r}")
        for v in (i, j):
            if isinstance(v, bool) or not isinstance(v, int):
                raise InstanceSyntaxError(f"arc #{idx}: vertex ids must be integers, got {v!r}")
        if isinstance(w, bool) or not isinstance(w, (int, float)) or math.isnan(w) or math.isinf(w):
            raise InstanceSyntaxError(f"arc #{idx}: weight must be a finite number, got {w!r}")
        if not (1 <= i <= n and 1 <= j <= n):
            raise VertexOutOfRange(f"arc #{idx} ({i}, {j}): vertex ids must lie in [1, {n}]")
        if i == j:
            raise LoopArc(f"arc #{idx} ({i}, {j}): loops are not allowed")
        if j <= num_ndds:
            raise ArcIntoNdd(f"arc #{idx} ({i}, {j}): vertex {j} is an NDD and cannot receive arcs")
        if w < 0:
            raise NegativeWeight(f"arc #{idx} ({i}, {j}): weight {w} is negative")
        if (i, j) in seen:
            raise DuplicateArc(f"arc #{idx} ({i}, {j}) duplicates arc #{seen[i, j]}")
        seen[i, j] = idx
        out.append(Arc(i, j, float(w)))
    out.sort(key=lambda a: (a.source, a.target))
    return Instance(num_ndds, num_pairs, tuple(out), cycle_cap, chain_cap, failure_prob)


# ---------------------------------------------------------------------------
# JSON format

def _num(w: float):
    return int(w) if float(w).is_integer() and abs(w) < 2**53 else w


def instance_to_dict(inst: Instance) -> dict:
    return {
        "ndds": inst.num_ndds,
        "pairs": inst.num_pairs,
        "cycle_cap": inst.cycle_cap,
        "chain_cap": inst.chain_cap,
        "failure_prob": inst.failure_prob,
        "arcs": [[a.source, a.target, _num(a.weight)] for a in inst.arcs],
    }


def serialize_instance(inst: Instance) -> str:
    return json.dumps(instance_to_dict(inst), separators=(", ", ": ")) + "\n"


def instance_from_dict(data) -> Instance:
    if not isinstance(data, dict):
        raise InstanceSyntaxError("instance must be a JSON object")
    for field in ("ndds", "pairs", "cycle_cap", "chain_cap", "arcs"):
        if field not in data:
            raise InstanceSyntaxError(f"missing field {field!r}")
    unknown = set(data) - {"ndds", "pairs", "cycle_cap", "chain_cap", "arcs", "failure_prob"}
    if unknown:
        raise InstanceSyntaxError(f"unknown field(s): {', '.join(sorted(unknown))}")
    arcs = data["arcs"]
    if not isinstance(arcs, list):
        raise InstanceSyntaxError("field 'arcs' must be a list")
    for idx, arc in enumerate(arcs):
        if not isinstance(arc, list) or len(arc) != 3:
            raise InstanceSyntaxError(f"arcs[{idx}]: expected [src, dst, weight], got {arc!r}")
    return build_instance(
        data["ndds"], data["pairs"], arcs, data["cycle_cap"], data["chain_cap"],
        data.get("failure_prob"),
    )


def parse_instance(text: str) -> Instance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceSyntaxError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return instance_from_dict(data)


def load_instance(path) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


# ---------------------------------------------------------------------------
# Generation and relabelling

def generate_random(
    num_ndds: int,
    num_pairs: int,
    arc_density: float,
    weight_mode="unit",
    cycle_cap: int = 3,
    chain_cap: int = 3,
    seed: int = 0,
    failure_prob: float | None = None,
) -> Instance:
    """Erdos-Renyi style instance: every admissible arc appears with probability ``arc_density``.

    ``weight_mode`` is ``"unit"`` or ``("uniform-int", lo, hi)`` (inclusive bounds).
    Admissible slots are visited in (source, target) order and each consumes one draw
    from a ``random.Random(seed)`` stream (two when weights are random), so equal
    seeds give identical instances.
    """
    if not 0.0 <= arc_density <= 1.0:
        raise ValueError(f"arc_density must lie in [0, 1], got {arc_density}")
    if weight_mode == "unit":
        lo = hi = None
    else:
        kind, lo, hi = weight_mode
        if kind != "uniform-int" or lo > hi or lo < 0:
            raise ValueError(f"bad weight_mode {weight_mode!r}")
    rng = random.Random(seed)
    n = num_ndds + num_pairs
    arcs = []
    for i in range(1, n + 1):
        for j in range(num_ndds + 1, n + 1):
            if i == j:
                continue
            if rng.random() < arc_density:
                w = 1 if lo is None else rng.randint(lo, hi)
                arcs.append((i, j, w))
    return build_instance(num_ndds, num_pairs, arcs, cycle_cap, chain_cap, failure_prob)


def relabel_by_degree(inst: Instance) -> tuple[Instance, dict[int, int]]:
    """Renumber pair vertices by nonincreasing total degree (ties: original id).

    Returns the relabelled instance and a map ``new id -> old id``.  NDD ids are
    left unchanged.
    """
    degree = defaultdict(int)
    for a in inst.arcs:
        degree[a.source] += 1
        degree[a.target] += 1
    order = sorted(inst.pairs, key=lambda v: (-degree[v], v))
    new_to_old = {v: v for v in inst.ndds}
    new_to_old.update({inst.num_ndds + 1 + t: old for t, old in enumerate(order)})
    old_to_new = {old: new for new, old in new_to_old.items()}
    arcs = [(old_to_new[a.source], old_to_new[a.target], a.weight) for a in inst.arcs]
    relabelled = build_instance(inst.num_ndds, inst.num_pairs, arcs, inst.cycle_cap,
                                inst.chain_cap, inst.failure_prob)
    return relabelled, new_to_old
