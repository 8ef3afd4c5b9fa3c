"""Kidney-exchange clearing: position-indexed IP formulations, branch and price, oracles."""

from .bnp import BnpConfig, BnpStats, solve_picef_bnp
from .engine import SolveResult, solve
from .errors import *  # noqa: F401,F403
from .formulations import (
    adjusted_weight,
    apply_failure_objective,
    build,
    build_cf,
    build_hpief,
    build_picef,
    build_pief,
)
from .harness import (
    FamilyParams,
    brute_force_optimum,
    brute_force_pricing,
    compare_lprs,
    decompose_closed_walk,
    make_family,
)
from .indexsets import (
    copy_distances,
    enumerate_chains,
    enumerate_cycles,
    ndd_distances,
    pief_positions,
    picef_positions,
)
from .instance import (
    Arc,
    Chain,
    Cycle,
    Instance,
    build_instance,
    generate_random,
    load_instance,
    parse_instance,
    relabel_by_degree,
    serialize_instance,
)
from .model import MipModel, dump_lp
from .pricing import (
    PricedCycle,
    PricingDuals,
    find_negative_cycles,
    price_cycles_deterministic,
    price_cycles_discounted,
)
from .solution import Solution, decode_solution, make_solution, verify_packing
from .solver import MipConfig, register_backend, solve_lp, solve_mip

__version__ = "0.1.0"
