"""Tabulate the point constraint grid: admissible points and nontrivial ones per (g, n)."""
import argparse
from collections import Counter

from lambdag.cli import theta_point_grid
from lambdag.lambda_point import theta_point_eval


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--g-max", type=int, default=2)
    ap.add_argument("--order", type=int, default=2)
    args = ap.parse_args()

    total, nontrivial, bad = Counter(), Counter(), []
    for q in theta_point_grid(range(args.g_max + 1), range(-1, 4), range(4), args.order):
        ev = theta_point_eval(q)
        total[q.g, q.n] += 1
        nontrivial[q.g, q.n] += ev.nontrivial > 0
        if ev.value:
            bad.append((q, ev.value))
    print(f"{'g':>2} {'n':>3} {'points':>7} {'nontrivial':>11}")
    for key in sorted(total):
        print(f"{key[0]:>2} {key[1]:>3} {total[key]:>7} {nontrivial[key]:>11}")
    print(f"nonzero residuals: {len(bad)}")
    for q, v in bad:
        print("  ", q, v)


if __name__ == "__main__":
    main()
