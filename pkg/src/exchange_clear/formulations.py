"""Compile an :class:`~exchange_clear.instance.Instance` into IP models.

Formulations: the cycle formulation (``cf``), the position-indexed edge formulation
(``pief``) with its ``reduced`` and ``reduced2`` variants, the position-indexed
chain-edge formulation (``picef``, optionally reduced), and the hybrid ``hpief``.
"""

from __future__ import annotations

from collections import defaultdict

from .errors import (
    BadProbability,
    CapTooSmallForReduced2,
    ModelTooLarge,
    NddsPresent,
    PositionOutOfSet,
    Unsupported,
)
from .indexsets import copy_distances, enumerate_chains, enumerate_cycles, ndd_distances, pief_positions, picef_positions
from .instance import Instance
from .model import EQ, GE, LE, MipModel, ModelBuilder

DEFAULT_VARIABLE_BUDGET = 5_000_000

PIEF_VARIANTS = ("full", "reduced", "reduced2")


def cycle_tag(cycle):
    return ("z", "cycle", cycle.vertices)


def chain_tag(chain):
    return ("z", "chain", chain.vertices)


def _structure_weight(inst, arcs):
    return sum(inst.weight[a] for a in arcs)


def _check_budget(builder_count, budget, what):
    if budget is not None and builder_count > budget:
        raise ModelTooLarge(f"{what} needs more than {budget} variables")


def build_cf(inst: Instance, max_variables: int | None = DEFAULT_VARIABLE_BUDGET) -> MipModel:
    """One binary per cycle (length <= K) and per chain (length <= L); vertex packing rows."""
    cycles = enumerate_cycles(inst, limit=max_variables)
    chains = enumerate_chains(inst, limit=None if max_variables is None else max_variables - len(cycles))
    _check_budget(len(cycles) + len(chains), max_variables, "the cycle formulation")
    b = ModelBuilder("cf", formulation="cf", K=inst.cycle_cap, L=inst.chain_cap, failure_prob=None)
    members = defaultdict(list)
    for s in (*cycles, *chains):
        tag = cycle_tag(s) if tag_is_cycle(s) else chain_tag(s)
        b.add_var(tag, _structure_weight(inst, s.arcs))
        for v in s.vertices:
            members[v].append(tag)
    for v in sorted(members):
        b.add_row(("capacity", v), [(t, 1.0) for t in members[v]], LE, 1.0)
    return b.build()


def tag_is_cycle(structure) -> bool:
    from .instance import Cycle

    return isinstance(structure, Cycle)


def adjusted_weight(inst: Instance, i: int, j: int, k: int, l: int) -> float:
    """Objective coefficient of a PIEF'' arc variable: its own weight plus implicit arcs.

    Position 2 carries the implicit first arc ``(l, i)``; position ``K-1`` carries the
    implicit closing arc ``(j, l)`` unless the arc itself already closes the cycle.
    """
    K = inst.cycle_cap
    if K < 3:
        raise CapTooSmallForReduced2(f"PIEF'' needs K >= 3, got K={K}")
    if k not in pief_positions(inst, i, j, l, "reduced2").positions:
        raise PositionOutOfSet(f"position {k} is not available to arc ({i}, {j}) in copy {l}")
    return _adjusted(inst, i, j, k, l)


def _adjusted(inst, i, j, k, l):
    w = inst.weight[i, j]
    if k == 2:
        w += inst.weight[l, i]
    if k == inst.cycle_cap - 1 and j != l:
        w += inst.weight[j, l]
    return w


def _add_cycle_arcs(b: ModelBuilder, inst: Instance, variant: str, into: dict, max_variables):
    """Add PIEF-style x variables and flow rows; record capacity terms in ``into``."""
    if variant not in PIEF_VARIANTS:
        raise ValueError(f"unknown PIEF variant {variant!r}")
    K = inst.cycle_cap
    if variant == "reduced2" and K < 3:
        raise CapTooSmallForReduced2(f"PIEF'' needs K >= 3, got K={K}")
    count = 0
    for l in inst.pairs:
        dist = copy_distances(inst, l) if variant != "full" else None
        flow_in = defaultdict(list)
        flow_out = defaultdict(list)
        for a in inst.arcs:
            i, j = a.source, a.target
            if i < l or j < l:
                continue
            for k in pief_positions(inst, i, j, l, variant, dist).positions:
                tag = ("x", i, j, k, l)
                w = _adjusted(inst, i, j, k, l) if variant == "reduced2" else a.weight
                b.add_var(tag, w)
                count += 1
                into[j].append(tag)
                if variant == "reduced2":
                    if k == 2:
                        into[i].append(tag)
                    if k == K - 1 and j != l:
                        into[l].append(tag)
                if j != l:
                    flow_in[j, k].append(tag)
                flow_out[i, k].append(tag)
        _check_budget(count, max_variables, f"the {variant} PIEF model")
        ks = range(2, K - 1) if variant == "reduced2" else range(1, K)
        for i in range(l + 1, inst.num_vertices + 1):
            for k in ks:
                ins, outs = flow_in.get((i, k), ()), flow_out.get((i, k + 1), ())
                if ins or outs:
                    terms = [(t, 1.0) for t in ins] + [(t, -1.0) for t in outs]
                    b.add_row(("flow", l, i, k), terms, EQ, 0.0)


def _capacity_rows(b, into, vertices):
    for v in vertices:
        if into.get(v):
            b.add_row(("capacity", v), [(t, 1.0) for t in into[v]], LE, 1.0)


def build_pief(inst: Instance, variant: str = "full",
               max_variables: int | None = DEFAULT_VARIABLE_BUDGET) -> MipModel:
    """PIEF over graph copies; ``variant`` in {"full", "reduced", "reduced2"}."""
    if inst.num_ndds:
        raise NddsPresent("PIEF models cycles only; use HPIEF or PICEF for instances with NDDs")
    b = ModelBuilder("pief", formulation="pief", variant=variant, K=inst.cycle_cap,
                     L=inst.chain_cap, failure_prob=None)
    into = defaultdict(list)
    _add_cycle_arcs(b, inst, variant, into, max_variables)
    # Capacity rows go after flow rows in the builder; reorder so they lead.
    model = b.build()
    cap = ModelBuilder("pief", **model.meta)
    for v in model.variables:
        cap.add_var(v.tag, v.obj, v.lower, v.upper, v.integral)
    _capacity_rows(cap, into, inst.pairs)
    for c in model.constraints:
        cap.add_row(c.tag, c.terms, c.sense, c.rhs)
    return cap.build()


def _add_chain_arcs(b: ModelBuilder, inst: Instance, reduced: bool, into: dict):
    """Add PICEF y variables, NDD capacity rows and chain flow rows."""
    L = inst.chain_cap
    nd = ndd_distances(inst) if reduced else None
    arrive = defaultdict(list)
    leave = defaultdict(list)
    ndd_out = defaultdict(list)
    for a in inst.arcs:
        i, j = a.source, a.target
        for k in picef_positions(inst, i, j, reduced, nd).positions:
            tag = ("y", i, j, k)
            b.add_var(tag, a.weight)
            into[j].append(tag)
            arrive[j, k].append(tag)
            if inst.is_ndd(i):
                ndd_out[i].append(tag)
            else:
                leave[i, k].append(tag)
    return arrive, leave, ndd_out


def _chain_rows(b, inst, arrive, leave, ndd_out):
    for i in inst.ndds:
        if ndd_out.get(i):
            b.add_row(("ndd-capacity", i), [(t, 1.0) for t in ndd_out[i]], LE, 1.0)
    for i in inst.pairs:
        for k in range(1, inst.chain_cap):
            outs = leave.get((i, k + 1), ())
            if outs:
                terms = [(t, 1.0) for t in arrive.get((i, k), ())] + [(t, -1.0) for t in outs]
                b.add_row(("chain-flow", i, k), terms, GE, 0.0)


def build_picef(inst: Instance, reduced: bool = False,
                max_variables: int | None = DEFAULT_VARIABLE_BUDGET, cycles=None) -> MipModel:
    """Position-indexed chain arcs plus one binary per cycle of length <= K.

    ``cycles`` restricts the cycle columns to the given pool (restricted master).
    """
    b = ModelBuilder("picef", formulation="picef-red" if reduced else "picef", reduced=reduced,
                     K=inst.cycle_cap, L=inst.chain_cap, failure_prob=None)
    into = defaultdict(list)
    arrive, leave, ndd_out = _add_chain_arcs(b, inst, reduced, into)
    n_arcs = len(b._vars)
    if cycles is None:
        cycles = enumerate_cycles(inst, limit=None if max_variables is None else max(0, max_variables - n_arcs))
    _check_budget(n_arcs + len(cycles), max_variables, "PICEF")
    for c in cycles:
        tag = cycle_tag(c)
        b.add_var(tag, _structure_weight(inst, c.arcs))
        for v in c.vertices:
            into[v].append(tag)
    _capacity_rows(b, into, inst.pairs)
    _chain_rows(b, inst, arrive, leave, ndd_out)
    return b.build()


def build_hpief(inst: Instance, variant: str = "full", chain_reduced: bool = False,
                max_variables: int | None = DEFAULT_VARIABLE_BUDGET) -> MipModel:
    """PIEF cycle arcs over pair-vertex graph copies combined with PICEF chain arcs."""
    b = ModelBuilder("hpief", formulation="hpief", variant=variant, chain_reduced=chain_reduced,
                     K=inst.cycle_cap, L=inst.chain_cap, failure_prob=None)
    into = defaultdict(list)
    arrive, leave, ndd_out = _add_chain_arcs(b, inst, chain_reduced, into)
    cycle_part = ModelBuilder("hpief")  # holds cycle flow rows so capacity rows can lead
    _add_cycle_arcs(cycle_part, inst, variant, into, max_variables)
    for v in cycle_part._vars.values():
        b.add_var(v.tag, v.obj, v.lower, v.upper, v.integral)
    _check_budget(len(b._vars), max_variables, "HPIEF")
    _capacity_rows(b, into, inst.pairs)
    for c in cycle_part._rows:
        b.add_row(c.tag, c.terms, c.sense, c.rhs)
    _chain_rows(b, inst, arrive, leave, ndd_out)
    return b.build()


def apply_failure_objective(model: MipModel, inst: Instance, p: float | None = None) -> MipModel:
    """Replace the objective by expected weight under uniform arc success probability ``p``.

    A chain arc at position ``k`` is worth ``p**k`` of its weight and a cycle ``c``
    ``p**len(c)`` of its weight.  Supported for PICEF and the cycle formulation.
    """
    p = inst.failure_prob if p is None else p
    if p is None or isinstance(p, bool) or not (0.0 < p <= 1.0):
        raise BadProbability(f"failure-aware objective needs p in (0, 1], got {p!r}")
    if model.kind not in ("picef", "cf"):
        raise Unsupported(
            f"failure-aware objective is not available for {model.kind}; solve with PICEF instead")
    coeffs = {}
    for v in model.variables:
        tag = v.tag
        if tag[0] == "y":
            _, i, j, k = tag
            coeffs[tag] = p**k * inst.weight[i, j]
        elif tag[1] == "cycle":
            vs = tag[2]
            w = sum(inst.weight[vs[t], vs[(t + 1) % len(vs)]] for t in range(len(vs)))
            coeffs[tag] = p ** len(vs) * w
        else:
            vs = tag[2]
            coeffs[tag] = sum(p ** (t + 1) * inst.weight[vs[t], vs[t + 1]] for t in range(len(vs) - 1))
    return model.with_objective(coeffs, failure_prob=p)


FORMULATIONS = {
    "cf": lambda inst: build_cf(inst),
    "pief": lambda inst: build_pief(inst, "full"),
    "piefr": lambda inst: build_pief(inst, "reduced"),
    "pief2": lambda inst: build_pief(inst, "reduced2"),
    "picef": lambda inst: build_picef(inst, reduced=False),
    "picef-red": lambda inst: build_picef(inst, reduced=True),
    "hpief": lambda inst: build_hpief(inst),
}


def build(inst: Instance, formulation: str) -> MipModel:
    """Build a model by its short name (see ``FORMULATIONS``)."""
    try:
        return FORMULATIONS[formulation](inst)
    except KeyError:
        raise ValueError(f"unknown formulation {formulation!r}") from None
