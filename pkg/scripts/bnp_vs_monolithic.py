"""Branch and price versus the full PICEF model: optimum, root bound and column counts."""

import argparse
import time

from exchange_clear import (BnpConfig, apply_failure_objective, build_picef, generate_random,
                            solve_lp, solve_mip, solve_picef_bnp)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--instances", type=int, default=20)
    ap.add_argument("--pairs", type=int, default=14)
    ap.add_argument("--ndds", type=int, default=2)
    ap.add_argument("--density", type=float, default=0.25)
    ap.add_argument("--cycle-cap", type=int, default=3)
    ap.add_argument("--chain-cap", type=int, default=4)
    ap.add_argument("--failure-prob", type=float, default=None)
    ap.add_argument("--initial-columns", choices=("none", "greedy"), default="none")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"{'seed':>5} {'mono':>9} {'bnp':>9} {'lpr':>9} {'root':>9} {'cols':>5} {'all':>5} {'nodes':>5} {'t_mono':>7} {'t_bnp':>7}")
    for t in range(args.instances):
        inst = generate_random(args.ndds, args.pairs, args.density, ("uniform-int", 1, 5),
                               cycle_cap=args.cycle_cap, chain_cap=args.chain_cap,
                               seed=args.seed + t, failure_prob=args.failure_prob)
        s = time.perf_counter()
        model = build_picef(inst)
        if inst.failure_prob is not None:
            model = apply_failure_objective(model, inst)
        mono, lpr = solve_mip(model).value, solve_lp(model).value
        t_mono = time.perf_counter() - s
        s = time.perf_counter()
        sol, st = solve_picef_bnp(inst, BnpConfig(initial_columns=args.initial_columns))
        t_bnp = time.perf_counter() - s
        value = sol.weight if inst.failure_prob is None else sol.expected_weight
        n_cycles = sum(1 for v in model.variables if v.tag[0] == "z")
        print(f"{args.seed + t:>5} {mono:>9.4f} {value:>9.4f} {lpr:>9.4f} {st.root_bound:>9.4f} "
              f"{st.pool_size:>5} {n_cycles:>5} {st.nodes:>5} {t_mono:>7.3f} {t_bnp:>7.3f}")


if __name__ == "__main__":
    main()
