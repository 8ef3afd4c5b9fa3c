"""Command-line interface: ``exchange-clear {solve,relax,compare,generate,family,verify}``.

Exit codes: 0 success, 2 usage error, 3 infeasible or limit reached, 4 data error.
Reports go to standard output as JSON; diagnostics go to standard error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from .bnp import BnpConfig
from .engine import SOLVE_FORMULATIONS, solve
from .errors import (
    CapTooSmallForReduced2,
    ExchangeError,
    InfeasibleAssignment,
    InstanceError,
    LimitReached,
    ModelTooLarge,
    NddsPresent,
    Unsupported,
)
from .harness import FAMILIES, FamilyParams, compare_lprs, make_family
from .instance import Chain, Cycle, generate_random, parse_instance, serialize_instance
from .solution import make_solution
from .solver.backend import backend_by_name, register_backend
from .solver.bnb import DEPTH_FIRST, BEST_BOUND, MipConfig

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_DATA = 0, 2, 3, 4
BACKEND_ENV = "EXCHANGE_CLEAR_BACKEND"


class _UsageError(Exception):
    pass


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load(args):
    inst = parse_instance(_read_text(args.input))
    p = inst.failure_prob if getattr(args, "failure_prob", None) is None else args.failure_prob
    return inst.with_caps(args.cycle_cap, args.chain_cap, failure_prob=p)


def _num(x):
    if x is None or (isinstance(x, float) and not math.isfinite(x)):
        return None
    return int(x) if float(x).is_integer() else x


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def cmd_solve(args) -> int:
    inst = _load(args)
    bnp_cfg = BnpConfig(initial_columns=args.initial_columns, column_cap=args.column_cap,
                        node_limit=args.node_limit, time_limit=args.time_limit)
    mip_cfg = MipConfig(node_limit=args.node_limit, time_limit=args.time_limit, search=args.search)
    res = solve(inst, args.formulation, relax=args.relax, mip_config=mip_cfg, bnp_config=bnp_cfg)
    sol = res.solution
    report = {
        "instance": inst.summary(),
        "formulation": args.formulation,
        "relaxed": bool(args.relax),
        "objective": None if sol is None else _num(sol.weight),
        "expected_objective": None if sol is None else _num(sol.expected_weight),
        "cycles": [] if sol is None else [list(c.vertices) for c in sol.cycles],
        "chains": [] if sol is None else [list(c.vertices) for c in sol.chains],
        "model": {"variables": res.num_variables, "constraints": res.num_constraints},
        "solver": {"lp_value": _num(res.lp_value), **{k: _num(v) for k, v in res.solver_stats.items()}},
        "wall_time_ms": round(res.wall_time_ms, 3),
    }
    _emit(report)
    return EXIT_OK


def cmd_compare(args) -> int:
    inst = _load(args)
    names = args.formulations.split(",")
    _emit(compare_lprs(inst, names).to_dict())
    return EXIT_OK


def _weight_mode(text: str):
    if text == "unit":
        return "unit"
    try:
        kind, lo, hi = text.split(":")
        if kind != "int":
            raise ValueError
        return ("uniform-int", int(lo), int(hi))
    except ValueError:
        raise _UsageError(f"--weights must be 'unit' or 'int:LO:HI', got {text!r}") from None


def cmd_generate(args) -> int:
    inst = generate_random(args.ndds, args.pairs, args.density, _weight_mode(args.weights),
                           cycle_cap=args.cycle_cap, chain_cap=args.chain_cap, seed=args.seed,
                           failure_prob=args.failure_prob)
    sys.stdout.write(serialize_instance(inst))
    return EXIT_OK


def cmd_family(args) -> int:
    inst = make_family(FamilyParams(args.name, args.K, args.L))
    sys.stdout.write(serialize_instance(inst))
    return EXIT_OK


def cmd_verify(args) -> int:
    inst = _load(args)
    report = json.loads(_read_text(args.solution))
    cycles = [Cycle.from_vertices(c) for c in report.get("cycles", [])]
    chains = [Chain(tuple(c)) for c in report.get("chains", [])]
    sol = make_solution(inst, cycles, chains)
    problems = []
    claimed = report.get("objective")
    if claimed is not None and abs(claimed - sol.weight) > 1e-6 * (1 + abs(sol.weight)):
        problems.append(f"objective {claimed} != recomputed {sol.weight}")
    claimed_e = report.get("expected_objective")
    if claimed_e is not None and (sol.expected_weight is None
                                  or abs(claimed_e - sol.expected_weight) > 1e-6 * (1 + abs(sol.expected_weight))):
        problems.append(f"expected objective {claimed_e} != recomputed {sol.expected_weight}")
    if problems:
        for msg in problems:
            print(f"verify: {msg}", file=sys.stderr)
        return EXIT_INFEASIBLE
    _emit({"valid": True, "objective": _num(sol.weight), "expected_objective": _num(sol.expected_weight)})
    return EXIT_OK


def _add_instance_args(p, need_input=True):
    if need_input:
        p.add_argument("--input", required=True, help="instance JSON file, or - for stdin")
    p.add_argument("--cycle-cap", type=int, default=None, help="override K from the instance file")
    p.add_argument("--chain-cap", type=int, default=None, help="override L from the instance file")
    p.add_argument("--seed", type=int, default=0, help="random seed (unused by exact solvers)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="exchange-clear",
                                     description="Kidney-exchange clearing with position-indexed IP models.")
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("solve", "relax"):
        p = sub.add_parser(name, help="solve an instance" if name == "solve" else "solve the LP relaxation")
        _add_instance_args(p)
        p.add_argument("--formulation", choices=SOLVE_FORMULATIONS, default="picef")
        p.add_argument("--failure-prob", type=float, default=None, help="arc success probability p")
        p.add_argument("--relax", action="store_true", default=(name == "relax"), help="LP relaxation only")
        p.add_argument("--node-limit", type=int, default=None)
        p.add_argument("--time-limit", type=float, default=None, help="seconds")
        p.add_argument("--search", choices=(DEPTH_FIRST, BEST_BOUND), default=DEPTH_FIRST)
        p.add_argument("--initial-columns", choices=("none", "greedy"), default="none")
        p.add_argument("--column-cap", type=int, default=None, help="max columns added per pricing round")
        p.set_defaults(func=cmd_solve)

    p = sub.add_parser("compare", help="LP relaxation values of several formulations")
    _add_instance_args(p)
    p.add_argument("--formulations", default="cf,picef,hpief", help="comma-separated names")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("generate", help="random instance")
    p.add_argument("--ndds", type=int, default=0)
    p.add_argument("--pairs", type=int, required=True)
    p.add_argument("--density", type=float, default=0.2)
    p.add_argument("--weights", default="unit", help="unit or int:LO:HI")
    p.add_argument("--cycle-cap", type=int, default=3)
    p.add_argument("--chain-cap", type=int, default=3)
    p.add_argument("--failure-prob", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("family", help="adversarial instance family")
    p.add_argument("--name", choices=FAMILIES, required=True)
    p.add_argument("--K", type=int, default=None)
    p.add_argument("--L", type=int, default=None)
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("verify", help="re-check a solve report against an instance")
    _add_instance_args(p)
    p.add_argument("--solution", required=True, help="report JSON written by solve")
    p.set_defaults(func=cmd_verify)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    if args.command == "family":
        defaults = FamilyParams(args.name) if args.name == "two-arm" else FamilyParams(args.name, 3, 6)
        args.K = defaults.K if args.K is None else args.K
        args.L = defaults.L if args.L is None else args.L
    backend = os.environ.get(BACKEND_ENV)
    try:
        if backend:
            register_backend(backend_by_name(backend))
        return args.func(args)
    except (_UsageError, NddsPresent, Unsupported, CapTooSmallForReduced2) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (LimitReached, InfeasibleAssignment) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (InstanceError, ModelTooLarge, ExchangeError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    finally:
        if backend:
            register_backend(None)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
