"""Check the approximant identity and the size bounds on random parameter sets.

Cases are drawn with b0 = 1, N(alpha) < 0, E and Q above 1 and |omega - 1| < 1.
"""
import argparse
import math
import random

import mpmath

from recsquares import hypergeom
from recsquares.intkit import is_square
from recsquares.quadratic import pell4_min
from recsquares.sequence import SeqParams, element


def draw(rng: random.Random, d_max: int):
    while True:
        d = rng.randrange(2, d_max)
        if is_square(d):
            continue
        t, u, _ = pell4_min(d)
        a = rng.randrange(1, math.isqrt(d) + 1)
        k = rng.choice((-3, -2, -1, 1, 2, 3))
        p = SeqParams(a, 1, d, t, u)
        if p.n_alpha >= 0 or not element(p, k).integral or element(p, k).y2 <= 2:
            continue
        bs = hypergeom.bounds(p, k)
        if bs.usable and abs(bs.phi) < mpmath.pi / 3:
            return p, k, bs


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--cases", type=int, default=50)
    parser.add_argument("--r-max", type=int, default=30)
    parser.add_argument("--d-max", type=int, default=600)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--precision", type=int, default=256)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    for _ in range(args.cases):
        p, k, bs = draw(rng, args.d_max)
        k0 = mpmath.mpf(bs.k0.numerator) / bs.k0.denominator
        worst_q = worst_r = 0.0
        worst_err = mpmath.mpf(0)
        for r in range(1, args.r_max + 1):
            ap = hypergeom.approx_pair(p, k, r, args.precision)
            worst_err = max(worst_err, ap.error)
            worst_q = max(worst_q, float(abs(ap.q) / (k0 * bs.Q**r)))
            worst_r = max(worst_r, float(abs(ap.remainder) / (bs.ell0 * bs.E ** (-r))))
        print(
            f"{p.as_tuple()} k={k:>2}  E={mpmath.nstr(bs.E, 5):>10} Q={mpmath.nstr(bs.Q, 5):>10}  "
            f"q-ratio {worst_q:.3f}  R-ratio {worst_r:.3f}  err {mpmath.nstr(worst_err, 2)}"
        )


if __name__ == "__main__":
    main()
