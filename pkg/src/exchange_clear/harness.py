"""Verification toolkit: exact oracles, LP-relaxation comparisons and adversarial graph families.

The oracles deliberately avoid the engine's enumerators and evaluators so that a bug
in one is not silently mirrored in the other.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import BadFamilyParams, NotAClosedWalk, TooLargeForOracle
from .instance import Chain, Cycle, Instance, build_instance
from .pricing import PRICE_TOL, PricedCycle, PricingDuals
from .solution import Solution

ORACLE_MAX_VERTICES = 20
ORACLE_MAX_STRUCTURES = 200_000


# --- independent enumeration -------------------------------------------------------------

def oracle_cycles(inst: Instance) -> list[tuple[int, ...]]:
    """Cycles as vertex tuples, by testing every ordered vertex selection starting at its minimum."""
    arcs = set(inst.weight)
    out = []
    pairs = list(inst.pairs)
    for size in range(2, inst.cycle_cap + 1):
        for combo in itertools.combinations(pairs, size):
            head, rest = combo[0], combo[1:]
            for perm in itertools.permutations(rest):
                seq = (head,) + perm
                if all((seq[t], seq[(t + 1) % size]) in arcs for t in range(size)):
                    out.append(seq)
    return sorted(out)


def oracle_chains(inst: Instance) -> list[tuple[int, ...]]:
    """Chains as vertex tuples, grown breadth-first one arc at a time."""
    arcs = set(inst.weight)
    frontier = [(a,) for a in inst.ndds]
    out = []
    for _ in range(inst.chain_cap):
        grown = []
        for path in frontier:
            for v in inst.pairs:
                if v not in path and (path[-1], v) in arcs:
                    grown.append(path + (v,))
        out.extend(grown)
        frontier = grown
        if len(out) > ORACLE_MAX_STRUCTURES:
            raise TooLargeForOracle(f"more than {ORACLE_MAX_STRUCTURES} chains")
    return sorted(out)


def _value(inst, seq, closed, p):
    n = len(seq)
    steps = n if closed else n - 1
    ws = [inst.weight[seq[t], seq[(t + 1) % n]] for t in range(steps)]
    if p is None:
        return float(sum(ws))
    if closed:
        return p**n * sum(ws)
    return sum(w * p ** (t + 1) for t, w in enumerate(ws))


def brute_force_optimum(inst: Instance, p: float | None = None) -> Solution:
    """Exact optimum by dynamic programming over sets of decided vertices.

    Vertices are decided lowest-first: the lowest undecided vertex is either left out or
    covered by a structure avoiding every decided vertex, so each packing is reached once.
    Maximises expected weight when ``p`` (or the instance's probability) is set.
    """
    n = inst.num_vertices
    if n > ORACLE_MAX_VERTICES:
        raise TooLargeForOracle(f"{n} vertices exceeds the oracle limit {ORACLE_MAX_VERTICES}")
    p = inst.failure_prob if p is None else p
    structures = [(seq, True) for seq in oracle_cycles(inst)] + [(seq, False) for seq in oracle_chains(inst)]
    if len(structures) > ORACLE_MAX_STRUCTURES:
        raise TooLargeForOracle(f"{len(structures)} structures exceeds the oracle limit")
    by_low = [[] for _ in range(n + 1)]
    for seq, closed in structures:
        mask = 0
        for v in seq:
            mask |= 1 << (v - 1)
        by_low[min(seq)].append((mask, _value(inst, seq, closed, p), seq, closed))
    full = (1 << n) - 1

    @lru_cache(maxsize=None)
    def best(decided: int):
        if decided == full:
            return 0.0, ()
        v = (~decided & full & -(~decided & full)).bit_length()  # lowest undecided vertex
        val, pick = best(decided | (1 << (v - 1)))
        for mask, w, seq, closed in by_low[v]:
            if mask & decided:
                continue
            sub, subpick = best(decided | mask)
            if sub + w > val + 1e-12:
                val, pick = sub + w, ((seq, closed),) + subpick
        return val, pick

    total, picks = best(0)
    best.cache_clear()
    cycles = tuple(sorted(Cycle(seq) for seq, closed in picks if closed))
    chains = tuple(sorted(Chain(seq) for seq, closed in picks if not closed))
    weight = float(sum(_value(inst, s, c, None) for s, c in picks))
    expected = float(total) if p is not None else None
    return Solution(cycles, chains, weight, expected)


def brute_force_pricing(inst: Instance, duals: PricingDuals, p: float | None = None) -> PricedCycle | None:
    """Maximum-price cycle over all cycles of length <= K, or None if no price exceeds 1e-9."""
    if inst.num_vertices > ORACLE_MAX_VERTICES:
        raise TooLargeForOracle(f"{inst.num_vertices} vertices exceeds the oracle limit")
    best = None
    for seq in oracle_cycles(inst):
        w = sum(inst.weight[seq[t], seq[(t + 1) % len(seq)]] for t in range(len(seq)))
        if p is not None:
            w *= p ** len(seq)
        price = w - sum(duals[v] for v in seq)
        if best is None or price > best.price:
            best = PricedCycle(price, Cycle(seq))
    if best is None or best.price <= PRICE_TOL:
        return None
    return best


# --- graph families -----------------------------------------------------------------------

FAMILIES = ("two-arm", "udders")


@dataclass(frozen=True)
class FamilyParams:
    family: str = "two-arm"
    K: int = 2
    L: int = 4


TWO_ARM_ARCS = ((1, 2), (2, 3), (3, 4), (1, 5), (5, 6), (6, 7), (7, 5))


def make_family(params: FamilyParams) -> Instance:
    """Build a member of an adversarial family (unit weights).

    ``two-arm``: one NDD feeding a 3-arc path and a 3-arc path that closes into a 3-cycle.
    ``udders``: one NDD ``a`` then ``L-K`` gadget cycles of length ``K+1``, where gadget
    ``i+1`` starts at the second vertex of gadget ``i``; the longest chain has exactly
    ``L`` arcs and no cycle fits under the cap.
    """
    K, L = params.K, params.L
    if params.family == "two-arm":
        if K < 0 or L < 0:
            raise BadFamilyParams("caps must be nonnegative")
        return build_instance(1, 6, [(i, j, 1) for i, j in TWO_ARM_ARCS], K, L)
    if params.family != "udders":
        raise BadFamilyParams(f"unknown family {params.family!r}; expected one of {FAMILIES}")
    if K < 2 or L < K + 2:
        raise BadFamilyParams(f"udders needs K >= 2 and L >= K + 2, got K={K}, L={L}")
    gadgets = L - K
    a = 1
    spine = list(range(2, gadgets + 3))  # spine[i] is the first vertex of gadget i+1
    nxt = spine[-1] + 1
    arcs = [(a, spine[0])]
    for g in range(gadgets):
        tail = list(range(nxt, nxt + K - 1))
        nxt += K - 1
        cyc = [spine[g], spine[g + 1]] + tail
        arcs += [(cyc[t], cyc[(t + 1) % len(cyc)]) for t in range(len(cyc))]
    num_pairs = nxt - 2
    return build_instance(1, num_pairs, [(i, j, 1) for i, j in arcs], K, L)


# --- LP-relaxation comparison --------------------------------------------------------------

@dataclass(frozen=True)
class LprComparison:
    values: dict

    def gaps(self) -> dict:
        """Pairwise differences ``values[a] - values[b]`` for every ordered pair a != b."""
        return {(a, b): self.values[a] - self.values[b]
                for a in self.values for b in self.values if a != b}

    def to_dict(self) -> dict:
        return {"lpr": dict(self.values),
                "gaps": {f"{a}-{b}": g for (a, b), g in self.gaps().items()}}


def compare_lprs(inst: Instance, formulations: Iterable[str] = ("cf", "picef", "hpief")) -> LprComparison:
    """LP-relaxation optimum of each named formulation (see ``formulations.FORMULATIONS``)."""
    from .formulations import build
    from .solver.backend import solve_lp

    values = {}
    for name in formulations:
        out = solve_lp(build(inst, name))
        values[name] = out.value
    return LprComparison(values)


# --- closed walks ---------------------------------------------------------------------------

def decompose_closed_walk(walk: Sequence[tuple[int, int]]) -> list[Cycle]:
    """Split a closed walk into elementary cycles by repeatedly cutting at the first repeat."""
    walk = [tuple(a[:2]) for a in walk]
    if not walk:
        return []
    for (a, b), (c, d) in zip(walk, walk[1:] + walk[:1]):
        if b != c:
            raise NotAClosedWalk(f"arc {(a, b)} is followed by {(c, d)}")
    path = [walk[0][0]]
    where = {walk[0][0]: 0}
    cycles = []
    for _, v in walk:
        if v in where:
            cut = where[v]
            cycles.append(Cycle.from_vertices(path[cut:]))
            for u in path[cut + 1:]:
                del where[u]
            del path[cut + 1:]
        else:
            where[v] = len(path)
            path.append(v)
    return cycles
