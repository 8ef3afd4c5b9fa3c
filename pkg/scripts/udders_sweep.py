"""Sweep the udders family over K and report LPR(CF), LPR(PICEF), LPR(HPIEF) and the optimum."""

import argparse

from exchange_clear import FamilyParams, brute_force_optimum, compare_lprs, make_family


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ks", default="2,3,4", help="comma-separated cycle caps")
    ap.add_argument("--extra", type=int, default=3, help="chain cap is K + extra")
    args = ap.parse_args()

    print(f"{'K':>2} {'L':>2} {'CF':>10} {'PICEF':>10} {'HPIEF':>10} {'IP':>4} {'ratio':>8}")
    for K in map(int, args.ks.split(",")):
        L = K + args.extra
        inst = make_family(FamilyParams("udders", K, L))
        v = compare_lprs(inst).values
        opt = brute_force_optimum(inst).weight if inst.num_vertices <= 20 else float("nan")
        print(f"{K:>2} {L:>2} {v['cf']:>10.6f} {v['picef']:>10.6f} {v['hpief']:>10.6f} "
              f"{opt:>4g} {v['picef'] / v['cf']:>8.4f}")


if __name__ == "__main__":
    main()
