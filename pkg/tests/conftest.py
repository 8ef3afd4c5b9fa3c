import random

import pytest
from hypothesis import HealthCheck, settings

from exchange_clear import build_instance, generate_random

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

UNIT = 1


def unit(arcs):
    return [(i, j, UNIT) for i, j in arcs]


FIG1_ARCS = [(3, 4), (4, 5), (5, 3), (3, 7), (1, 3), (6, 5), (2, 4), (1, 7), (7, 6)]
FIG2_ARCS = [(1, 2), (2, 1), (2, 3), (3, 4), (4, 1), (4, 3), (4, 2)]
FIG4_ARCS = [(1, 3), (1, 4), (2, 4), (3, 4), (4, 5), (5, 6), (6, 4), (6, 5)]
FIG5_ARCS = [(1, 2), (2, 3), (3, 4), (4, 5), (5, 1), (1, 6), (6, 7), (7, 8), (8, 1)]


def fig1():
    return build_instance(2, 5, unit(FIG1_ARCS), 3, 3)


def fig2(K=3):
    return build_instance(0, 4, unit(FIG2_ARCS), K, 3)


def fig4(K=3, L=4):
    return build_instance(2, 4, unit(FIG4_ARCS), K, L)


def fig5(K=4):
    return build_instance(0, 8, unit(FIG5_ARCS), K, 0)


def triangle():
    return build_instance(0, 3, unit([(1, 2), (2, 3), (3, 1)]), 3, 0)


def random_instance(seed, ndds=(0, 3), pairs=(2, 10), K=(2, 4), L=(1, 5), p=None, weights="mixed"):
    """Reproducible random instance; parameters are drawn from ``random.Random(seed)``."""
    r = random.Random(seed)
    mode = "unit" if weights == "unit" or (weights == "mixed" and r.random() < 0.5) else ("uniform-int", 1, 5)
    return generate_random(r.randint(*ndds), r.randint(*pairs), r.uniform(0.1, 0.5), mode,
                           cycle_cap=r.randint(*K), chain_cap=r.randint(*L), seed=seed, failure_prob=p)


@pytest.fixture
def fig1_instance():
    return fig1()


@pytest.fixture
def fig4_instance():
    return fig4()
