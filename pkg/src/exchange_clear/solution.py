"""Packings of cycles and chains: evaluation, verification and decoding from IP assignments."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Hashable, Mapping

from .errors import InfeasibleAssignment
from .instance import Chain, Cycle, Instance
from .model import MipModel

OBJ_TOL = 1e-6


@dataclass(frozen=True)
class Solution:
    """A vertex-disjoint packing.

    Attributes:
        cycles: selected cycles, sorted.
        chains: selected chains, sorted.
        weight: total arc weight.
        expected_weight: expected weight under the instance's success probability, if any.
    """

    cycles: tuple[Cycle, ...] = ()
    chains: tuple[Chain, ...] = ()
    weight: float = 0.0
    expected_weight: float | None = None
    meta: dict = field(default_factory=dict, compare=False)

    def to_dict(self) -> dict:
        return {
            "cycles": [list(c.vertices) for c in self.cycles],
            "chains": [list(c.vertices) for c in self.chains],
            "weight": self.weight,
            "expected_weight": self.expected_weight,
        }


def cycle_expected_weight(inst: Instance, cycle: Cycle, p: float) -> float:
    return p ** cycle.length * sum(inst.weight[a] for a in cycle.arcs)


def chain_expected_weight(inst: Instance, chain: Chain, p: float) -> float:
    return sum(p ** (k + 1) * inst.weight[a] for k, a in enumerate(chain.arcs))


def verify_packing(inst: Instance, cycles, chains) -> None:
    """Raise :class:`InfeasibleAssignment` unless the structures form a valid packing."""
    used: dict[int, object] = {}

    def claim(v, owner):
        if v in used:
            raise InfeasibleAssignment(f"vertex {v} is used by both {used[v]} and {owner}")
        used[v] = owner

    for c in cycles:
        vs = c.vertices
        if not 2 <= len(vs) <= inst.cycle_cap:
            raise InfeasibleAssignment(f"cycle {vs} has length {len(vs)}, cap is {inst.cycle_cap}")
        if len(set(vs)) != len(vs):
            raise InfeasibleAssignment(f"cycle {vs} repeats a vertex")
        for a in c.arcs:
            if not inst.has_arc(*a):
                raise InfeasibleAssignment(f"cycle {vs} uses missing arc {a}")
        for v in vs:
            if inst.is_ndd(v):
                raise InfeasibleAssignment(f"cycle {vs} contains NDD {v}")
            claim(v, f"cycle {vs}")
    for ch in chains:
        vs = ch.vertices
        if not 1 <= ch.length <= inst.chain_cap:
            raise InfeasibleAssignment(f"chain {vs} has length {ch.length}, cap is {inst.chain_cap}")
        if not inst.is_ndd(vs[0]) or any(inst.is_ndd(v) for v in vs[1:]):
            raise InfeasibleAssignment(f"chain {vs} must start at its only NDD")
        if len(set(vs)) != len(vs):
            raise InfeasibleAssignment(f"chain {vs} repeats a vertex")
        for a in ch.arcs:
            if not inst.has_arc(*a):
                raise InfeasibleAssignment(f"chain {vs} uses missing arc {a}")
        for v in vs:
            claim(v, f"chain {vs}")


def make_solution(inst: Instance, cycles=(), chains=(), p: float | None = None,
                  verify: bool = True) -> Solution:
    """Evaluate a packing; ``p`` defaults to the instance's success probability."""
    cycles = tuple(sorted(cycles))
    chains = tuple(sorted(chains))
    if verify:
        verify_packing(inst, cycles, chains)
    weight = sum(inst.weight[a] for s in (*cycles, *chains) for a in s.arcs)
    p = inst.failure_prob if p is None else p
    expected = None
    if p is not None:
        expected = (sum(cycle_expected_weight(inst, c, p) for c in cycles)
                    + sum(chain_expected_weight(inst, c, p) for c in chains))
    return Solution(cycles, chains, float(weight), expected)


def _selected(model: MipModel, assignment: Mapping[Hashable, float], tol: float = 1e-6):
    chosen = []
    for v in model.variables:
        x = assignment.get(v.tag, 0.0)
        if abs(x - round(x)) > tol:
            raise InfeasibleAssignment(f"variable {v.tag} has fractional value {x}")
        if round(x) == 1:
            chosen.append(v.tag)
        elif round(x) != 0:
            raise InfeasibleAssignment(f"variable {v.tag} has non-binary value {x}")
    return chosen


def _chains_from_y(inst: Instance, ys) -> list[Chain]:
    by_source = defaultdict(list)
    for _, i, j, k in ys:
        by_source[i, k].append(j)
    chains = []
    used = 0
    for a in inst.ndds:
        starts = by_source.get((a, 1), [])
        if not starts:
            continue
        if len(starts) > 1:
            raise InfeasibleAssignment(f"NDD {a} donates to {len(starts)} recipients")
        path = [a, starts[0]]
        used += 1
        k = 1
        while True:
            nxt = by_source.get((path[-1], k + 1), [])
            if not nxt:
                break
            if len(nxt) > 1:
                raise InfeasibleAssignment(f"vertex {path[-1]} donates twice at position {k + 1}")
            path.append(nxt[0])
            used += 1
            k += 1
            if k > inst.chain_cap:
                raise InfeasibleAssignment(f"chain from {a} exceeds the chain cap")
        chains.append(Chain(tuple(path)))
    if used != len(ys):
        raise InfeasibleAssignment(f"{len(ys) - used} chain arc(s) are not attached to any NDD chain")
    return chains


def _cycles_from_x(inst: Instance, xs, variant: str) -> list[Cycle]:
    by_copy = defaultdict(dict)
    for _, i, j, k, l in xs:
        if k in by_copy[l]:
            raise InfeasibleAssignment(f"copy {l} selects two arcs at position {k}")
        by_copy[l][k] = (i, j)
    K = inst.cycle_cap
    cycles = []
    for l in sorted(by_copy):
        arcs = by_copy[l]
        first = 2 if variant == "reduced2" else 1
        positions = sorted(arcs)
        if positions != list(range(first, first + len(positions))):
            raise InfeasibleAssignment(f"copy {l} has non-contiguous positions {positions}")
        seq = [arcs[k] for k in positions]
        for (a, b), (c, d) in zip(seq, seq[1:]):
            if b != c:
                raise InfeasibleAssignment(f"copy {l}: arcs {(a, b)} and {(c, d)} do not connect")
        if variant == "reduced2":
            vertices = [l] + [a for a, _ in seq]
            last = seq[-1][1]
            if last != l:
                if positions[-1] != K - 1:
                    raise InfeasibleAssignment(f"copy {l}: open cycle ends before position {K - 1}")
                vertices.append(last)
        else:
            if seq[0][0] != l or seq[-1][1] != l:
                raise InfeasibleAssignment(f"copy {l}: selected arcs do not form a cycle through {l}")
            vertices = [a for a, _ in seq]
        cycles.append(Cycle(tuple(vertices)))
    return cycles


def decode_solution(model: MipModel, assignment: Mapping[Hashable, float], inst: Instance) -> Solution:
    """Turn an integral assignment of ``model`` into a verified :class:`Solution`.

    Raises:
        InfeasibleAssignment: the assignment is fractional, does not describe a packing,
            or its objective value disagrees with the decoded packing's value.
    """
    chosen = _selected(model, assignment)
    cycles: list[Cycle] = []
    chains: list[Chain] = []
    xs = [t for t in chosen if t[0] == "x"]
    ys = [t for t in chosen if t[0] == "y"]
    for t in chosen:
        if t[0] == "z":
            (cycles if t[1] == "cycle" else chains).append(
                Cycle(t[2]) if t[1] == "cycle" else Chain(t[2]))
    chains.extend(_chains_from_y(inst, ys))
    if xs:
        cycles.extend(_cycles_from_x(inst, xs, model.meta.get("variant", "full")))
    p = model.meta.get("failure_prob")
    sol = make_solution(inst, cycles, chains, p=p if p is not None else inst.failure_prob)
    violated = model.violations(assignment)
    if violated:
        raise InfeasibleAssignment(f"assignment violates {violated[:5]}")
    target = sol.expected_weight if p is not None else sol.weight
    got = model.objective_value(assignment)
    if abs(got - target) > OBJ_TOL * (1.0 + abs(target)):
        raise InfeasibleAssignment(f"objective {got} disagrees with decoded packing value {target}")
    return sol
