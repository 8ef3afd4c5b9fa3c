"""Compare exact discounted pricing against brute-force pricing on random duals."""

import argparse
import random

from exchange_clear import PricingDuals, brute_force_pricing, generate_random, price_cycles_discounted


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--draws", type=int, default=200)
    ap.add_argument("--max-pairs", type=int, default=8)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    r = random.Random(args.seed)
    agree = found = 0
    for _ in range(args.draws):
        K = r.randint(2, 4)
        inst = generate_random(0, r.randint(2, args.max_pairs), r.uniform(0.1, 0.5), ("uniform-int", 1, 5),
                               cycle_cap=K, chain_cap=0, seed=r.randrange(10**9))
        duals = PricingDuals({v: r.uniform(0, 6) for v in inst.pairs})
        p = r.choice([0.3, 0.5, 0.7, 0.9, 1.0])
        got = price_cycles_discounted(inst, duals, p)
        best = brute_force_pricing(inst, duals, p)
        ok = bool(got) == (best is not None) and (not got or abs(got[0].price - best.price) <= 1e-9)
        agree += ok
        found += bool(got)
    print(f"draws={args.draws} agree={agree} positive-price draws={found}")


if __name__ == "__main__":
    main()
