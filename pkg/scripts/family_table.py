#!/usr/bin/env python3
"""Print the homology table of the cable family.

For each n, lists the summands of the homology of C/(V) as an
F2[U]-module: one free tower plus U-power torsion with the Maslov
grading of each generator.  The largest torsion order follows the
family law 2n - 1.

Usage:
  python scripts/family_table.py [--max-n 6]
"""

import argparse

from knotfloer import build_cable, hfk_minus, torsion_order


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-n", type=int, default=6)
    args = parser.parse_args()
    print(f"{'n':>3} {'gens':>5} {'Ord_U':>6}  decomposition")
    for n in range(2, args.max_n + 1):
        C = build_cable(n)
        d = hfk_minus(C)
        print(f"{n:>3} {len(C):>5} {torsion_order(d):>6}  {d.render()}")


if __name__ == "__main__":
    main()
