"""Length-weighted and degree-weighted Jacobi matrices for |e_k| = 1/k.

Prints the leading blocks, the coefficients a_k, b_k and the lowest
eigenvalues of both truncations side by side.
"""
import argparse

import numpy as np

from qgs.laplacian import jacobi_from_points


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--points", type=int, default=12)
    ap.add_argument("--block", type=int, default=5)
    a = ap.parse_args()
    x = np.r_[0.0, np.cumsum(1 / np.arange(1, a.points))]
    np.set_printoptions(precision=4, suppress=True, linewidth=120)
    for measure in ("length", "degree"):
        j = jacobi_from_points(x, measure=measure)
        print(f"{measure}-weighted, leading {a.block}x{a.block} block:")
        print(j.matrix()[: a.block, : a.block])
        print("a_k:", j.a[: a.block], "b_k:", j.b[: a.block])
        print("lowest eigenvalues:", np.linalg.eigvalsh(j.matrix())[:4], "\n")


if __name__ == "__main__":
    main()
