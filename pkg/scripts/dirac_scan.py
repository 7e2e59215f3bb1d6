"""Scan the Dirac minimum over (L, A) and mark where it drops below 4 pi^2 / L^2."""

import argparse
import math

import numpy as np

from curvespec.dirac import dirac_minimum, isoperimetric_admissible


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", type=int, default=1, help="Chern class")
    ap.add_argument("--steps", type=int, default=12)
    args = ap.parse_args()

    areas = np.linspace(0.5, 4 * math.pi - 0.5, args.steps)
    lengths = np.linspace(1.0, 8.0, args.steps)
    print("rows L, columns A.  admissible: '.' minimum equals 4pi^2/L^2, '*' below it;")
    print("inadmissible: 'o' equals, 'x' below")
    print("      " + "".join(f"{a:6.2f}" for a in areas))
    for L in lengths:
        cells = []
        for A in areas:
            r = dirac_minimum(float(L), float(A), args.m)
            below = int(r.value < 4 * math.pi**2 / L**2 * (1 - 1e-12))
            marks = ".*" if isoperimetric_admissible(L, A) else "ox"
            cells.append(f"{marks[below]:>6}")
        print(f"{L:6.2f}" + "".join(cells))


if __name__ == "__main__":
    main()
