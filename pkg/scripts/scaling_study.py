#!/usr/bin/env python3
"""Ellipsoid iteration growth against matrix size.

For each n the script builds a random Gaussian-integer instance, solves
it at fixed eps, and reports iterations next to the n^4 log n model; a
bounded ratio column means the growth is compatible with that model.
Optionally cross-checks every value against the support-function sweep.
"""

import argparse
import csv
import math
import sys
import time

import numpy as np

from crawford.ellipsoid import certified_ball, solve
from crawford.linalg import (
    ComplexMatrix,
    GaussianRational,
    frobenius_ceiling,
    hermitian_split,
)
from crawford.oracle import chi_oracle
from crawford.sdp import build_instance


def random_matrix(rng: np.random.Generator, n: int, lo: int, hi: int) -> ComplexMatrix:
    ints = rng.integers(lo, hi + 1, size=(n, n, 2))
    return ComplexMatrix(
        [
            [GaussianRational(int(ints[i, j, 0]), int(ints[i, j, 1])) for j in range(n)]
            for i in range(n)
        ]
    )


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--eps", type=float, default=1e-3)
    ap.add_argument("--n-min", type=int, default=2)
    ap.add_argument("--n-max", type=int, default=8)
    ap.add_argument("--trials", type=int, default=3, help="instances per size")
    ap.add_argument("--seed", type=int, default=123)
    ap.add_argument("--entry-bound", type=int, default=3)
    ap.add_argument("--cross-check", action="store_true",
                    help="also run the support-function sweep per instance")
    ap.add_argument("--csv", type=str, default="", help="optional CSV output path")
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    rows = []
    print(f"eps = {args.eps:g}, {args.trials} instance(s) per size")
    header = f"{'n':>3} {'d':>4} {'iters':>8} {'iters/(n^4 ln n)':>17} {'seconds':>8}"
    if args.cross_check:
        header += f" {'|sdp-oracle|':>13}"
    print(header)
    for n in range(args.n_min, args.n_max + 1):
        for trial in range(args.trials):
            mat = random_matrix(rng, n, -args.entry_bound, args.entry_bound)
            if mat.is_zero():
                continue
            inst = build_instance(hermitian_split(mat), frobenius_ceiling(mat))
            ball = certified_ball(inst, mat)
            t0 = time.time()
            res = solve(inst, ball, args.eps)
            dt = time.time() - t0
            model = n**4 * math.log(n + 1.0)
            line = (
                f"{n:>3} {n * n:>4} {res.iterations:>8} "
                f"{res.iterations / model:>17.2f} {dt:>8.3f}"
            )
            row = {
                "n": n,
                "trial": trial,
                "dim": n * n,
                "iterations": res.iterations,
                "value": res.value,
                "seconds": dt,
            }
            if args.cross_check:
                ref = chi_oracle(mat, args.eps)
                gap = abs(res.value - ref)
                line += f" {gap:>13.2e}"
                row["oracle_gap"] = gap
                if gap > 2 * args.eps:
                    print(f"cross-check failure at n={n}: gap {gap:g}", file=sys.stderr)
                    sys.exit(1)
            print(line)
            rows.append(row)

    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
            writer.writeheader()
            writer.writerows(rows)
        print(f"wrote {args.csv}")


if __name__ == "__main__":
    main()
