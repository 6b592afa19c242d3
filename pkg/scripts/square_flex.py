"""Follow the flex of a unit 4-cycle and export the path.

Prints how far the diagonals drift and how closely the path stays a
parallelogram; ``--csv`` keeps every state.
"""

import argparse
from fractions import Fraction

import numpy as np

from rigidparts.flexengine import follow_flex, infinitesimal_flex, write_flex_path
from rigidparts.rigidity import Framework, Graph


def main():
    ap = argparse.ArgumentParser(description="Follow the flex of a unit 4-cycle.")
    ap.add_argument("--step", type=float, default=1e-3)
    ap.add_argument("--max-steps", type=int, default=2000)
    ap.add_argument("--csv", help="write the path here")
    args = ap.parse_args()

    g = Graph(4, ((0, 1), (1, 2), (2, 3), (0, 3)))
    fw = Framework(g, tuple((Fraction(x), Fraction(y)) for x, y in [(0, 0), (1, 0), (1, 1), (0, 1)]))
    path = follow_flex(fw, infinitesimal_flex(fw), step=args.step, max_steps=args.max_steps)

    X0 = path.embeddings[0]
    d0 = np.linalg.norm(X0[0] - X0[2]), np.linalg.norm(X0[1] - X0[3])
    every = max(1, len(path) // 10)
    print(f"status {path.status}, {len(path)} states, max edge residual {path.max_residual:.2e}")
    print(f"{'t':>8} {'diag 0-2':>10} {'diag 1-3':>10} {'parallelogram err':>18}")
    for k in range(0, len(path), every):
        X = path.embeddings[k]
        a, b = np.linalg.norm(X[0] - X[2]), np.linalg.norm(X[1] - X[3])
        err = np.linalg.norm(X[0] + X[2] - X[1] - X[3])
        print(f"{path.times[k]:>8.3f} {a - d0[0]:>+10.5f} {b - d0[1]:>+10.5f} {err:>18.2e}")
    if args.csv:
        with open(args.csv, "w") as fh:
            write_flex_path(path, fh)


if __name__ == "__main__":
    main()
