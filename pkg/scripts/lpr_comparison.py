"""LP-relaxation values of CF, PICEF and HPIEF on random instances and the adversarial families."""

import argparse
import json

from exchange_clear import FamilyParams, compare_lprs, generate_random, make_family


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--instances", type=int, default=20)
    ap.add_argument("--pairs", type=int, default=10)
    ap.add_argument("--ndds", type=int, default=2)
    ap.add_argument("--density", type=float, default=0.3)
    ap.add_argument("--cycle-cap", type=int, default=3)
    ap.add_argument("--chain-cap", type=int, default=4)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rows = []
    for t in range(args.instances):
        inst = generate_random(args.ndds, args.pairs, args.density, ("uniform-int", 1, 5),
                               cycle_cap=args.cycle_cap, chain_cap=args.chain_cap, seed=args.seed + t)
        rows.append({"seed": args.seed + t, **compare_lprs(inst).to_dict()})
    rows.append({"family": "two-arm", **compare_lprs(make_family(FamilyParams("two-arm"))).to_dict()})
    print(json.dumps(rows, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
