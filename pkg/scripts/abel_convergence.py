"""Pointwise error of the fractional-derivative reconstruction as N_t doubles.

Prints a CSV with one row per resolution: max error over random points and the
observed order against the previous row.
"""
import argparse
import math

import numpy as np

from funklib.harmonics import HarmonicSpectrum, evaluate, synthesize
from funklib.inversion import invert_abel
from funklib.sphere import SphereGrid, random_unit_vectors
from funklib.transforms import funk


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--points", type=int, default=10)
    p.add_argument("--levels", default="128,256,512,1024")
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    s = HarmonicSpectrum.from_terms({(0, 0): math.sqrt(4 * math.pi), (2, 0): 0.3, (4, 0): 0.2})
    g = funk(synthesize(s, SphereGrid(32)))
    pts = random_unit_vectors(np.random.default_rng(args.seed), args.points)
    truth = evaluate(s, pts)
    print("N_t,max_error,observed_order")
    prev = None
    for N in (int(v) for v in args.levels.split(",")):
        err = max(abs(invert_abel(g, x, N_t=N).recovered_value - t) for x, t in zip(pts, truth))
        order = "" if prev is None else f"{math.log2(prev / err):.3f}"
        print(f"{N},{err:.6e},{order}")
        prev = err


if __name__ == "__main__":
    main()
