"""Reduce [[x,1],[1,y]] to scalars and compare the two regions on sampled points."""

import argparse
from fractions import Fraction

from matstellen import SampleSpec, SymMatPoly, full_reduce, regions_agree
from matstellen.polyring import format_poly


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--grid-steps", type=int, default=20)
    ap.add_argument("--random-count", type=int, default=559)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--bound", type=Fraction, default=Fraction(3))
    args = ap.parse_args()

    vars = ("x", "y")
    a = SymMatPoly([["x", 1], [1, "y"]], vars)
    tree = full_reduce([a])
    print("scalar set:")
    for p in tree.scalar_set:
        print("  ", format_poly(p))
    spec = SampleSpec(-args.bound, args.bound, args.grid_steps, args.random_count, args.seed)
    rep = regions_agree([a], tree.scalar_set, spec)
    print(f"agreement: {rep.agreements}/{rep.total} (seed {rep.seed})")
    for p, lhs, rhs in rep.disagreements[:10]:
        print("  disagree at", p, lhs, rhs)


if __name__ == "__main__":
    main()
