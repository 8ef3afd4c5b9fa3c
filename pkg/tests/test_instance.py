import json
import math

import pytest
from hypothesis import given, strategies as st

from exchange_clear import (
    build_instance,
    brute_force_optimum,
    generate_random,
    parse_instance,
    relabel_by_degree,
    serialize_instance,
)
from exchange_clear.errors import (
    ArcIntoNdd,
    BadProbability,
    DuplicateArc,
    InstanceError,
    InstanceSyntaxError,
    LoopArc,
    NegativeWeight,
    VertexOutOfRange,
)

from conftest import FIG1_ARCS, fig1, fig2, random_instance, unit


def test_figure1_builds():
    inst = fig1()
    assert inst.num_vertices == 7
    assert list(inst.ndds) == [1, 2] and list(inst.pairs) == [3, 4, 5, 6, 7]
    assert len(inst.arcs) == len(FIG1_ARCS)
    assert inst.successors[1] == (3, 7)


def test_empty_instance():
    inst = build_instance(0, 0, [], 3, 3)
    assert inst.num_vertices == 0 and inst.arcs == ()


@pytest.mark.parametrize("arcs, exc", [
    ([(3, 3, 1)], LoopArc),
    ([(4, 1, 1)], ArcIntoNdd),
    ([(3, 4, 1), (3, 4, 2)], DuplicateArc),
    ([(3, 9, 1)], VertexOutOfRange),
    ([(0, 3, 1)], VertexOutOfRange),
    ([(3, 4, -1)], NegativeWeight),
    ([(3, 4)], InstanceSyntaxError),
])
def test_validation_errors(arcs, exc):
    with pytest.raises(exc) as info:
        build_instance(2, 5, arcs, 3, 3)
    assert "arc #" in str(info.value)


@pytest.mark.parametrize("p", [0, -0.1, 1.5, math.nan])
def test_bad_probability(p):
    with pytest.raises(BadProbability):
        build_instance(0, 2, [], 3, 3, p)


def test_negative_counts():
    with pytest.raises(VertexOutOfRange):
        build_instance(-1, 2, [], 3, 3)


def test_roundtrip_figure1():
    inst = fig1()
    text = serialize_instance(inst)
    assert parse_instance(text) == inst
    data = json.loads(text)
    assert data["arcs"][0] == [1, 3, 1]


def test_parse_single_pair():
    inst = parse_instance('{"ndds":0,"pairs":1,"arcs":[],"cycle_cap":3,"chain_cap":3}')
    assert inst.num_pairs == 1 and inst.arcs == () and inst.failure_prob is None


@pytest.mark.parametrize("text, exc", [
    ('{"ndds":-1,"pairs":1,"arcs":[],"cycle_cap":3,"chain_cap":3}', VertexOutOfRange),
    ('{"ndds":0,"pairs":1,"arcs":[],"cycle_cap":3', InstanceSyntaxError),
    ('{"ndds":0,"pairs":1,"arcs":[]}', InstanceSyntaxError),
    ('{"ndds":0,"pairs":1,"arcs":[],"cycle_cap":3,"chain_cap":3,"extra":1}', InstanceSyntaxError),
    ('{"ndds":0,"pairs":2,"arcs":[[1,2]],"cycle_cap":3,"chain_cap":3}', InstanceSyntaxError),
])
def test_parse_errors(text, exc):
    with pytest.raises(exc):
        parse_instance(text)


def test_syntax_error_has_position():
    with pytest.raises(InstanceSyntaxError, match="line 1, column"):
        parse_instance("{oops")


def test_errors_are_value_errors():
    assert issubclass(LoopArc, InstanceError) and issubclass(LoopArc, ValueError)


@given(st.integers(0, 3), st.integers(0, 8), st.floats(0, 1), st.integers(0, 2**63 - 1),
       st.one_of(st.none(), st.floats(0.01, 1)))
def test_roundtrip_property(n, m, d, seed, p):
    inst = generate_random(n, m, d, ("uniform-int", 0, 9), 3, 4, seed=seed, failure_prob=p)
    assert parse_instance(serialize_instance(inst)) == inst


def test_generate_density_extremes():
    assert generate_random(2, 5, 0.0, seed=1).arcs == ()
    full = generate_random(1, 2, 1.0, seed=1)
    assert [(a.source, a.target) for a in full.arcs] == [(1, 2), (1, 3), (2, 3), (3, 2)]


def test_generate_deterministic():
    a = serialize_instance(generate_random(2, 10, 0.3, seed=7))
    b = serialize_instance(generate_random(2, 10, 0.3, seed=7))
    assert a == b


def test_generate_arc_count_statistics():
    n, m, d = 2, 8, 0.3
    slots = (n + m) * m - m  # any source, pair target, no loops
    counts = [len(generate_random(n, m, d, seed=s).arcs) for s in range(200)]
    mean = sum(counts) / len(counts)
    sigma = math.sqrt(slots * d * (1 - d) / len(counts))
    assert abs(mean - d * slots) <= 5 * sigma


def test_relabel_high_degree_first():
    # vertex 5 has degree 6, all others at most 3
    arcs = [(5, 2), (2, 5), (5, 3), (3, 5), (5, 4), (4, 5), (2, 3)]
    inst = build_instance(1, 4, unit(arcs), 3, 3)
    _, perm = relabel_by_degree(inst)
    assert perm[2] == 5 and perm[1] == 1


def test_relabel_ties_identity():
    inst = build_instance(0, 3, unit([(1, 2), (2, 3), (3, 1)]), 3, 3)
    r, perm = relabel_by_degree(inst)
    assert perm == {1: 1, 2: 2, 3: 3} and r == inst


def test_relabel_figure2():
    inst = fig2()
    r, perm = relabel_by_degree(inst)
    # degrees: 1->3, 2->4, 3->3, 4->4
    assert [perm[v] for v in sorted(perm)] == [2, 4, 1, 3]
    assert brute_force_optimum(r).weight == brute_force_optimum(inst).weight == 4


@pytest.mark.parametrize("seed", range(15))
def test_relabel_isomorphic(seed):
    inst = random_instance(seed, pairs=(2, 8))
    r, perm = relabel_by_degree(inst)
    mapped = sorted((perm[a.source], perm[a.target], a.weight) for a in r.arcs)
    assert mapped == sorted(inst.arcs)
    assert brute_force_optimum(r).weight == pytest.approx(brute_force_optimum(inst).weight)
