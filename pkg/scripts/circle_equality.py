"""Equality case: circles of latitude give mu1 = mu1_2d = 4 pi^2 / L^2 = 1 / r^2."""

import math

import numpy as np

from curvespec.analysis import AnalysisOptions, analyze_curve
from curvespec.curves import CurveDef
from curvespec.expr import Binary, Unary, Var, const


def latitude(r):
    t = Var()
    coords = (
        Binary("*", const(r), Unary("cos", t)),
        Binary("*", const(r), Unary("sin", t)),
        const(math.sqrt(1 - r * r)),
    )
    return CurveDef(f"latitude r={r:g}", coords, (0.0, 2 * math.pi))


def main():
    print(f"{'r':>5}{'1/r^2':>14}{'mu1':>14}{'mu1_2d':>14}{'dirac min':>14}{'area':>12}")
    for r in np.linspace(0.1, 0.9, 9):
        rep = analyze_curve(latitude(float(r)), AnalysisOptions(M=512, enable_2d=True))
        print(f"{r:>5.2f}{1 / r**2:>14.9f}{rep.mu1_1d:>14.9f}{rep.mu1_2d:>14.9f}{rep.dirac_min:>14.9f}{rep.area:>12.8f}")


if __name__ == "__main__":
    main()
