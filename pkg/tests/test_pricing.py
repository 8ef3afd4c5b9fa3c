import random

import pytest
from hypothesis import given, strategies as st

from exchange_clear import (
    Cycle,
    PricingDuals,
    brute_force_pricing,
    build_instance,
    find_negative_cycles,
    price_cycles_deterministic,
    price_cycles_discounted,
)
from exchange_clear.errors import NegativeWeightInput
from exchange_clear.harness import oracle_cycles
from exchange_clear.pricing import cycle_price

from conftest import random_instance, triangle

ETA, P = 100.0, 0.5
S, V1, V2, V3, V4 = 1, 2, 3, 4, 5


def failure_graph():
    """Five-vertex construction where path comparison without a fixed length goes wrong.

    Only the 4-cycle s-v1-v3-v4 has positive discounted price; the competing path
    through v2 looks better at v3 but leads to a loss at length 4.
    """
    arcs = [(S, V1, 0), (S, V2, ETA / P**3), (V1, V3, 0), (V2, V3, 0), (V3, V4, 0), (V4, S, 1)]
    return build_instance(0, 5, arcs, 4, 0), PricingDuals({V2: ETA - 1})


def length_agnostic_pricer(inst, duals, p):
    """One label per (depth, vertex), compared by the discounted value at the current depth."""
    found = []
    for s in inst.pairs:
        labels = {s: (0.0, 0.0, (s,))}  # vertex -> (sum w, sum delta, path)
        for depth in range(1, inst.cycle_cap):
            nxt = {}
            for u, (w, d, path) in labels.items():
                for v in inst.successors[u]:
                    if v <= s or v in path:
                        continue
                    cand = (w + inst.weight[u, v], d + duals[v], path + (v,))
                    key = cand[1] - p**depth * cand[0]
                    if v not in nxt or key < nxt[v][1] - p**depth * nxt[v][0]:
                        nxt[v] = cand
            labels = nxt
            for v, (w, d, path) in labels.items():
                if inst.has_arc(v, s):
                    n = len(path)
                    if (d + duals[s]) - p**n * (w + inst.weight[v, s]) < -1e-9:
                        found.append(Cycle(path))
    return found


def test_failure_graph_regression():
    inst, duals = failure_graph()
    target = Cycle((S, V1, V3, V4))
    assert cycle_price(inst, target, duals, P) == pytest.approx(P**4)
    best = brute_force_pricing(inst, duals, P)
    assert best.cycle == target
    assert length_agnostic_pricer(inst, duals, P) == []  # the pitfall
    got = price_cycles_discounted(inst, duals, P)
    assert [pc.cycle for pc in got] == [target]


def test_failure_graph_k4_reduction():
    inst, duals = failure_graph()
    weights = {(a.source, a.target): duals[a.target] - P**4 * a.weight for a in inst.arcs}
    assert find_negative_cycles(inst.pairs, weights, 4) == [Cycle((S, V1, V3, V4))]


def test_negative_two_cycle():
    assert find_negative_cycles([1, 2], {(1, 2): -1.0, (2, 1): 0.5}, 2) == [Cycle((1, 2))]


def test_no_negative_with_nonnegative_weights():
    assert find_negative_cycles([1, 2, 3], {(1, 2): 0.0, (2, 3): 1.0, (3, 1): 0.0, (2, 1): 2.0}, 3) == []


@given(st.integers(0, 10**6), st.integers(2, 5))
def test_negative_cycle_search_complete(seed, K):
    # signed weights, so label sweeps often return non-elementary walks
    r = random.Random(seed)
    inst = random_instance(seed, ndds=(0, 0), pairs=(2, 7), K=(K, K))
    w = {(a.source, a.target): r.uniform(-3, 2) for a in inst.arcs}
    got = find_negative_cycles(inst.pairs, w, K)
    negative = [c for c in oracle_cycles(inst)
                if sum(w[c[t], c[(t + 1) % len(c)]] for t in range(len(c))) < -1e-9]
    assert bool(got) == bool(negative)
    assert {c.vertices for c in got} <= set(negative)
    if negative:
        cheapest = min(sum(w[c[t], c[(t + 1) % len(c)]] for t in range(len(c))) for c in negative)
        assert sum(w[a] for a in got[0].arcs) == pytest.approx(cheapest, abs=1e-9)


def test_deterministic_basic():
    inst = triangle()
    assert [pc.price for pc in price_cycles_deterministic(inst, PricingDuals())] == [3]
    assert price_cycles_deterministic(inst, PricingDuals({v: 10 for v in inst.pairs})) == []
    assert brute_force_pricing(inst, PricingDuals()).price == 3
    assert brute_force_pricing(inst, PricingDuals({v: 10 for v in inst.pairs})) is None


def test_discounted_two_cycle():
    inst = build_instance(0, 2, [(1, 2, 1), (2, 1, 1)], 2, 0)
    got = price_cycles_discounted(inst, PricingDuals({1: 0.4, 2: 0.4}), 0.9)
    assert len(got) == 1 and got[0].price == pytest.approx(0.82)


def test_negative_weight_input():
    from exchange_clear.instance import Arc, Instance

    inst = Instance(0, 2, (Arc(1, 2, -1.0), Arc(2, 1, 1.0)), 2, 0, None)
    with pytest.raises(NegativeWeightInput):
        price_cycles_discounted(inst, PricingDuals(), 0.5)


def test_exclude_forces_exact_search():
    inst = build_instance(0, 3, [(1, 2, 1), (2, 1, 1), (2, 3, 1), (3, 1, 1)], 3, 0)
    first = price_cycles_deterministic(inst, PricingDuals())
    assert {pc.cycle for pc in first} == {Cycle((1, 2)), Cycle((1, 2, 3))}
    rest = price_cycles_deterministic(inst, PricingDuals(), exclude=[Cycle((1, 2, 3))])
    assert [pc.cycle for pc in rest] == [Cycle((1, 2))]


def _draw(seed):
    r = random.Random(seed)
    inst = random_instance(seed, ndds=(0, 2), pairs=(2, 8), K=(2, 4))
    duals = PricingDuals({v: r.uniform(0, 2) for v in inst.pairs})
    return inst, duals, r.choice([0.3, 0.5, 0.7, 0.9, 1.0])


@pytest.mark.parametrize("seed", range(120))
def test_pricing_matches_oracle(seed):
    inst, duals, p = _draw(seed)
    det = price_cycles_deterministic(inst, duals)
    best = brute_force_pricing(inst, duals)
    assert bool(det) == (best is not None)
    if det:
        assert det[0].price == pytest.approx(best.price, abs=1e-9)
    disc = price_cycles_discounted(inst, duals, p)
    assert bool(disc) == (brute_force_pricing(inst, duals, p) is not None)
    for pc in disc:
        assert cycle_price(inst, pc.cycle, duals, p) > 0
    if p == 1.0:
        assert {pc.cycle for pc in disc} >= {pc.cycle for pc in det[:1]}
