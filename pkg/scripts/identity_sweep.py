"""Both sides of the shifted-dual identity over theta for a random even function.

Prints theta, lhs, rhs and the error relative to the sup norm of the transform,
for several fractional-grid resolutions.
"""
import argparse

import numpy as np

from funklib.harmonics import random_spectrum, synthesize
from funklib.inversion import verify_identity
from funklib.sphere import SphereGrid, random_unit_vectors
from funklib.transforms import funk


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--degree", type=int, default=8)
    p.add_argument("--resolutions", default="64,128,256,512")
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    rng = np.random.default_rng(args.seed)
    f = synthesize(random_spectrum(rng, args.degree, "even"), SphereGrid(args.degree + 1))
    x = random_unit_vectors(rng, 1)[0]
    scale = funk(f).fn.max_abs()
    thetas = (np.arange(16) + 0.5) * (np.pi / 2) / 16
    print("N,theta,lhs,rhs,rel_error")
    for N in (int(v) for v in args.resolutions.split(",")):
        lhs, rhs = verify_identity(f, x, thetas, N=N, m=64)
        for th, a, b in zip(thetas, lhs, rhs):
            print(f"{N},{th:.6f},{a:.12e},{b:.12e},{abs(a - b) / scale:.3e}")


if __name__ == "__main__":
    main()
