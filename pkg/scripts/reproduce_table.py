"""Recompute the five-curve table and show deviations from the reference values."""

import argparse

from curvespec.analysis import TABLE_TOLERANCES, AnalysisOptions, reproduce_table


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=2048)
    ap.add_argument("--method", default="lapack", choices=("lapack", "householder-ql"))
    args = ap.parse_args()

    rows = reproduce_table(AnalysisOptions(M=args.samples, method=args.method, enable_2d=True))
    cols = ("4pi^2/L^2", "mu1", "mean k^2")
    print(f"{'curve':<18}" + "".join(f"{c:>14}{'ref':>11}{'dev':>9}" for c in cols) + "  N")
    for row in rows:
        cells = "".join(
            f"{c:>14.7g}{r:>11.6g}{d:>9.1e}" for c, r, d in zip(row.computed, row.reference, row.deviations)
        )
        mark = "" if row.ok else "  outside tolerance"
        print(f"{row.curve:<18}{cells}  {row.report.provenance['N']}{mark}")
    print("tolerances (relative):", dict(zip(cols, TABLE_TOLERANCES)))


if __name__ == "__main__":
    main()
