"""Command-line front end.

Exit codes: 0 success, 1 input error (bad file, bad flag, domain
violation), 2 a proven inequality failed to verify.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .analysis import AnalysisError, AnalysisOptions, analyze_curve, reproduce_table
from .curves import CurveError, catalog_names, load_catalog, load_curve
from .dirac import LatticeError, dirac_minimum, lens_lattice
from .geometry import GeometryError, reparametrize
from .schrodinger2d import Operator2DSpec, mu1_2d
from .sturm1d import Potential, eigenvalues_1d

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2
SIG_DIGITS = 12
FORMATS = ("json", "csv", "text")
TABLE_HEADER = ("curve", "fourpi2_L2", "mu1", "mean_k2", "ref_fourpi2_L2", "ref_mu1", "ref_mean_k2")


class InputError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    samples: int = 2048
    n0: int = 32
    n_max: int = 512
    format: str = "json"
    rho: int | None = None
    enable_2d: bool = False
    method: str = "lapack"

    def __post_init__(self):
        M = self.samples
        if M < 64 or M & (M - 1):
            raise InputError(f"--samples must be a power of two >= 64, got {M}")
        if not 1 <= self.n0 <= self.n_max:
            raise InputError(f"need 1 <= --n0 <= --n-max, got {self.n0}, {self.n_max}")
        if 4 * self.n_max > M:
            raise InputError(f"--n-max {self.n_max} needs --samples >= {4 * self.n_max}")
        if self.format not in FORMATS:
            raise InputError(f"unknown format {self.format!r}")
        if self.rho is not None and self.rho < 1:
            raise InputError("--rho must be a positive integer")

    def options(self) -> AnalysisOptions:
        return AnalysisOptions(
            M=self.samples,
            N0=self.n0,
            N_max=self.n_max,
            rho=self.rho,
            enable_2d=self.enable_2d,
            method=self.method,
        )


# --------------------------------------------------------------------------
# serialisation


def round_sig(obj, digits: int = SIG_DIGITS):
    """Round every float in a nested structure to ``digits`` significant digits."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return float(f"{obj:.{digits}g}") if math.isfinite(obj) else obj
    if isinstance(obj, dict):
        return {k: round_sig(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_sig(v, digits) for v in obj]
    if hasattr(obj, "item"):  # numpy scalar
        return round_sig(obj.item(), digits)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def to_json(data) -> str:
    return json.dumps(round_sig(data), indent=2) + "\n"


def _flatten(data: dict, prefix: str = "") -> dict:
    out = {}
    for key, value in data.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            out.update(_flatten(value, name + "."))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            for i, item in enumerate(value):
                out.update(_flatten(item, f"{name}.{i}."))
        else:
            out[name] = value
    return out


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.{SIG_DIGITS}g}"
    if isinstance(value, list):
        return " ".join(_cell(v) for v in value)
    return str(value)


def to_csv(rows: list[dict], header=None) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = list(header or rows[0].keys())
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(row.get(h)) for h in header])
    return buf.getvalue()


def to_text(data: dict) -> str:
    flat = _flatten(data)
    width = max(len(k) for k in flat)
    return "".join(f"{k:<{width}}  {_cell(v)}\n" for k, v in flat.items())


def render(data: dict, fmt: str) -> str:
    if fmt == "json":
        return to_json(data)
    if fmt == "csv":
        return to_csv([_flatten(data)])
    return to_text(data)


# --------------------------------------------------------------------------
# commands


def resolve_curve(source: str):
    if source in catalog_names():
        return load_catalog(source)
    path = Path(source)
    if not path.exists():
        raise InputError(f"{source!r} is neither a catalog curve ({', '.join(catalog_names())}) nor a file")
    return load_curve(path)


def cmd_analyze(curve_source: str, config: RunConfig) -> tuple[str, int]:
    curve = resolve_curve(curve_source)
    try:
        report = analyze_curve(curve, config.options())
    except AnalysisError as exc:
        raise InputError(str(exc)) from exc
    code = EXIT_OK if report.theorem_flags_ok else EXIT_VERIFY
    return render(report.to_dict(), config.format), code


def cmd_table(config: RunConfig) -> tuple[str, int]:
    rows = reproduce_table(config.options())
    code = EXIT_OK if all(r.report.theorem_flags_ok for r in rows) else EXIT_VERIFY
    if config.format == "csv":
        records = [dict(zip(TABLE_HEADER, (r.curve, *r.computed, *r.reference))) for r in rows]
        return to_csv(records, TABLE_HEADER), code
    records = [
        {
            "curve": r.curve,
            "fourpi2_L2": r.computed[0],
            "mu1": r.computed[1],
            "mean_k2": r.computed[2],
            "ref_fourpi2_L2": r.reference[0],
            "ref_mu1": r.reference[1],
            "ref_mean_k2": r.reference[2],
            "dev_fourpi2_L2": r.deviations[0],
            "dev_mu1": r.deviations[1],
            "dev_mean_k2": r.deviations[2],
            "within_tolerance": r.ok,
        }
        for r in rows
    ]
    if config.format == "json":
        return to_json({"rows": records}), code
    cols = list(records[0].keys())
    lines = [" ".join(f"{c:>16}" for c in cols)]
    for rec in records:
        lines.append(" ".join(f"{_cell(rec[c]):>16}" for c in cols))
    return "\n".join(lines) + "\n", code


def cmd_dirac(L: float, A: float, m: int, config: RunConfig) -> tuple[str, int]:
    try:
        lattice = lens_lattice(L, A, m)
        result = dirac_minimum(L, A, m)
    except LatticeError as exc:
        raise InputError(str(exc)) from exc
    bound = 4 * math.pi**2 / L**2
    data = {
        "L": L,
        "A": A,
        "m": m,
        "lattice": {"v1": list(lattice.v1), "v2": list(lattice.v2), "theta": lattice.theta},
        "dual": {"v1": list(lattice.dual1), "v2": list(lattice.dual2)},
        "spin": list(lattice.spin),
        "minimum": result.value,
        "argmin": [result.k, result.l],
        "fourpi2_L2": bound,
        "admissible": result.admissible,
        "minimum_equals_bound": math.isclose(result.value, bound, rel_tol=1e-12),
    }
    code = EXIT_OK
    if result.admissible and not data["minimum_equals_bound"]:
        code = EXIT_VERIFY
    return render(data, config.format), code


def cmd_schrodinger2d(curve_source: str, config: RunConfig) -> tuple[str, int]:
    curve = resolve_curve(curve_source)
    try:
        geom = reparametrize(curve, config.samples)
    except (CurveError, GeometryError) as exc:
        raise InputError(str(exc)) from exc
    if geom.area is None:
        raise InputError(f"curve {curve.name!r} does not lie on the unit sphere")
    area = min(geom.area, 4 * math.pi - geom.area)
    potential = Potential.from_geometry(geom)
    spec1 = eigenvalues_1d(potential, 1, N0=config.n0, N_max=config.n_max, method=config.method)
    N = spec1.metadata["N"]
    res = mu1_2d(Operator2DSpec(geom.L, area, potential), N, method=config.method)
    bound = 4 * math.pi**2 / geom.L**2
    data = {
        "curve": curve.name,
        "L": geom.L,
        "A": area,
        "simple": geom.simple,
        "mu1_2d": res.mu1,
        "mode": res.mode,
        "modes_scanned": list(res.modes_scanned),
        "mu1_1d": float(spec1[0]),
        "fourpi2_L2": bound,
        "theorem2_ok": bound <= res.mu1 + 1e-8,
        "provenance": {"M": config.samples, "N": N},
    }
    return render(data, config.format), EXIT_OK if data["theorem2_ok"] else EXIT_VERIFY


# --------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--samples", "-M", type=int, default=2048, help="arc-length samples (power of two, default 2048)")
    p.add_argument("--n0", type=int, default=32, help="initial Fourier cutoff (default 32)")
    p.add_argument("--n-max", type=int, default=512, help="largest Fourier cutoff (default 512)")
    p.add_argument("--format", choices=FORMATS, default="json")
    p.add_argument("--method", choices=("lapack", "householder-ql"), default="lapack", help="eigensolver")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="curvespec", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="verify all inequalities for one curve")
    p.add_argument("--curve", required=True, help="catalog name or path to a .curve file")
    p.add_argument("--rho", type=int, default=None, help="generator count for the strengthened conjecture")
    p.add_argument("--enable-2d", action="store_true", help="also compute the 2D operator (unit-sphere curves)")
    _common(p)

    p = sub.add_parser("table", help="recompute the five-curve reference table")
    _common(p)

    p = sub.add_parser("dirac", help="Dirac minimum on the torus over a spherical curve")
    p.add_argument("--L", type=float, required=True, help="curve length")
    p.add_argument("--A", type=float, required=True, help="enclosed area on the unit sphere")
    p.add_argument("--m", type=int, default=1, help="Chern class (default 1)")
    _common(p)

    p = sub.add_parser("schrodinger2d", help="lowest eigenvalue of the 2D operator for a spherical curve")
    p.add_argument("--curve", required=True, help="catalog name or path to a .curve file")
    _common(p)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = RunConfig(
            samples=args.samples,
            n0=args.n0,
            n_max=args.n_max,
            format=args.format,
            rho=getattr(args, "rho", None),
            enable_2d=getattr(args, "enable_2d", False),
            method=args.method,
        )
        if args.command == "analyze":
            out, code = cmd_analyze(args.curve, config)
        elif args.command == "table":
            out, code = cmd_table(config)
        elif args.command == "dirac":
            out, code = cmd_dirac(args.L, args.A, args.m, config)
        else:
            out, code = cmd_schrodinger2d(args.curve, config)
    except (InputError, CurveError, GeometryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
