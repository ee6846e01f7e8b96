"""Ratios c_l(alpha) / c_0(alpha) of the cosine transform as alpha -> 0.

The last column is the great-circle ratio P_l(0), the expected limit.
"""
import argparse

from funklib.harmonics import legendre_p0
from funklib.transforms import cosine_multipliers


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--alphas", default="1.0,0.5,0.2,0.1,0.05,0.02,0.01,0.005,0.001")
    p.add_argument("--degrees", default="2,4,6,8")
    args = p.parse_args()
    degs = [int(v) for v in args.degrees.split(",")]
    print("alpha,degree,ratio,limit")
    for a in (float(v) for v in args.alphas.split(",")):
        c = cosine_multipliers(a, max(degs))
        for l in degs:
            print(f"{a},{l},{c[l] / c[0]:.10f},{legendre_p0(l):.10f}")


if __name__ == "__main__":
    main()
