"""Empirical survey of AS / (M^2 / (4(1 - kappa))) over random WNC and NC functions.

Prints, per domain shape, the largest observed ratio.  Nothing is asserted:
whether the constant can be improved is an open question.

    python scripts/bound_ratio_survey.py --samples 2000 --seed 0
"""

import argparse
from fractions import Fraction

from nestcan.generators import GenSpec, int_range, random_nc, random_wnc, spawn_seeds
from nestcan.sensitivity import check_theorem

SHAPES = [(2,) * 3, (2,) * 6, (3,) * 3, (3, 3, 3, 3), (4, 4, 4), (2, 3, 4), (4,) * 4]


def survey(kind, shape, samples, seed, M):
    best = Fraction(0)
    for s in spawn_seeds(seed, samples):
        gs = GenSpec(shape, int_range(M), kind, s)
        f, _ = random_wnc(gs) if kind == "wnc" else random_nc(gs)
        rep = check_theorem(f)
        assert rep.bound_holds, f"bound falsified by {f}"
        if rep.ratio is not None:
            best = max(best, rep.ratio)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-value", type=int, default=3)
    args = ap.parse_args()
    print(f"# samples={args.samples} seed={args.seed} M<={args.max_value}")
    print(f"{'shape':<20}{'kind':<6}{'max ratio':>14}")
    for shape in SHAPES:
        for kind in ("wnc", "nc"):
            r = survey(kind, shape, args.samples, args.seed, args.max_value)
            print(f"{str(shape):<20}{kind:<6}{float(r):>14.6f}")


if __name__ == "__main__":
    main()
