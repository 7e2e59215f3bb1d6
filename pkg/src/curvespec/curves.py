"""Closed parametric curves: definition, validation and the ``.curve`` file format.

A curve file holds one ``key = "value"`` pair per line::

    # Gerono lemniscate
    name = "lemniscate"
    x = "sin(t)"
    y = "cos(t)*sin(t)"
    domain = "0 2*pi"

Keys are ``name``, ``x``, ``y``, optional ``z`` and ``domain``.  The two
domain bounds are constant expressions (plain numbers or e.g. ``2*pi``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from importlib import resources
from pathlib import Path

import numpy as np

from .expr import (
    Binary,
    ExprError,
    ExprNode,
    Var,
    const,
    depends_on_t,
    differentiate,
    evaluate,
    parse_expr,
    substitute_t,
    to_source,
)

__all__ = [
    "CurveDef",
    "CurveError",
    "CurveFileError",
    "parse_curve_text",
    "load_curve",
    "dump_curve",
    "catalog_names",
    "load_catalog",
    "TABLE_CURVES",
]

CLOSURE_TOL = 1e-9
REGULARITY_TOL = 1e-8

#: the five example curves of the reference table, in table order
TABLE_CURVES = ("lemniscate", "trefoil", "viviani", "torus-knot", "spherical-spiral")


class CurveError(ValueError):
    pass


class CurveFileError(CurveError):
    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        where = ""
        if source:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}".strip())
        self.line = line


@dataclass(frozen=True, eq=False)
class CurveDef:
    """A closed curve ``t -> (x(t), y(t)[, z(t)])`` on ``[t0, t1)``."""

    name: str
    coords: tuple[ExprNode, ...]
    domain: tuple[float, float]

    def __post_init__(self):
        if len(self.coords) not in (2, 3):
            raise CurveError(f"curve {self.name!r}: expected 2 or 3 coordinates, got {len(self.coords)}")
        t0, t1 = self.domain
        if not (np.isfinite(t0) and np.isfinite(t1) and t1 > t0):
            raise CurveError(f"curve {self.name!r}: invalid domain {self.domain}")

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def period(self) -> float:
        return self.domain[1] - self.domain[0]

    @cached_property
    def derivatives(self) -> tuple[tuple[ExprNode, ...], tuple[ExprNode, ...], tuple[ExprNode, ...]]:
        """Symbolic (gamma', gamma'', gamma''') coordinate trees."""
        d1 = tuple(differentiate(c) for c in self.coords)
        d2 = tuple(differentiate(c) for c in d1)
        d3 = tuple(differentiate(c) for c in d2)
        return d1, d2, d3

    def point(self, t) -> np.ndarray:
        return _stack(self.coords, t)

    def velocity(self, t) -> np.ndarray:
        return _stack(self.derivatives[0], t)

    def acceleration(self, t) -> np.ndarray:
        return _stack(self.derivatives[1], t)

    def speed(self, t):
        return np.sqrt(np.sum(self.velocity(t) ** 2, axis=0))

    def shifted(self, shift: float) -> "CurveDef":
        """Same curve traversed from ``t0 + shift`` (t -> t + shift)."""
        moved = Binary("+", Var(), const(shift))
        return CurveDef(self.name, tuple(substitute_t(c, moved) for c in self.coords), self.domain)

    def check_closed(self, tol: float = CLOSURE_TOL) -> None:
        t0, t1 = self.domain
        layers = (self.coords,) + self.derivatives[:2]
        for order, trees in enumerate(layers):
            a = _stack(trees, t0)
            b = _stack(trees, t1)
            gap = float(np.max(np.abs(a - b)))
            if gap > tol * max(1.0, float(np.max(np.abs(a)))):
                raise CurveError(
                    f"curve {self.name!r} is not closed: derivative order {order} differs by {gap:.3e} between t0 and t1"
                )

    def check_regular(self, samples: int = 8192, tol: float = REGULARITY_TOL) -> None:
        t = self.domain[0] + self.period * np.arange(samples) / samples
        speed = self.speed(t)
        i = int(np.argmin(speed))
        if speed[i] < tol:
            raise CurveError(f"curve {self.name!r} is not regular: |gamma'| = {speed[i]:.3e} at t = {t[i]:.6g}")

    def validate(self) -> "CurveDef":
        self.check_closed()
        self.check_regular()
        return self


def _stack(trees, t) -> np.ndarray:
    return np.array([np.broadcast_to(evaluate(e, t), np.shape(t)) for e in trees], dtype=float)


# --------------------------------------------------------------------------
# file format

_LINE_RE = re.compile(r'^\s*([A-Za-z_]\w*)\s*=\s*"([^"]*)"\s*$')
_KEYS = {"name", "x", "y", "z", "domain"}


def parse_curve_text(text: str, source: str | None = None) -> CurveDef:
    values: dict[str, tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        m = _LINE_RE.match(line)
        if m is None:
            raise CurveFileError('expected key = "value"', lineno, source)
        key, value = m.groups()
        if key not in _KEYS:
            raise CurveFileError(f"unknown key {key!r}", lineno, source)
        if key in values:
            raise CurveFileError(f"duplicate key {key!r}", lineno, source)
        values[key] = (value, lineno)
    for key in ("name", "x", "y", "domain"):
        if key not in values:
            raise CurveFileError(f"missing key {key!r}", None, source)

    coords = []
    for key in ("x", "y", "z"):
        if key not in values:
            continue
        value, lineno = values[key]
        try:
            coords.append(parse_expr(value))
        except ExprError as exc:
            raise CurveFileError(f"{key}: {exc}", lineno, source) from exc

    value, lineno = values["domain"]
    parts = value.split()
    if len(parts) != 2:
        raise CurveFileError("domain needs two bounds 't0 t1'", lineno, source)
    try:
        bounds = []
        for part in parts:
            e = parse_expr(part)
            if depends_on_t(e):
                raise CurveFileError("domain bounds must be constant", lineno, source)
            bounds.append(float(evaluate(e, 0.0)))
    except ExprError as exc:
        raise CurveFileError(f"domain: {exc}", lineno, source) from exc
    try:
        return CurveDef(values["name"][0], tuple(coords), (bounds[0], bounds[1]))
    except CurveError as exc:
        raise CurveFileError(str(exc), lineno, source) from exc


def _strip_comment(line: str) -> str:
    # '#' inside a quoted value is not a comment
    in_quote = False
    for i, ch in enumerate(line):
        if ch == '"':
            in_quote = not in_quote
        elif ch == "#" and not in_quote:
            return line[:i]
    return line


def load_curve(path: str | Path) -> CurveDef:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise CurveFileError(f"cannot read curve file: {exc.strerror}", None, str(path)) from exc
    return parse_curve_text(text, source=str(path))


def dump_curve(curve: CurveDef, domain_text: str | None = None) -> str:
    lines = [f'name = "{curve.name}"']
    for key, e in zip("xyz", curve.coords):
        lines.append(f'{key} = "{to_source(e)}"')
    if domain_text is None:
        domain_text = f"{curve.domain[0]!r} {curve.domain[1]!r}"
    lines.append(f'domain = "{domain_text}"')
    return "\n".join(lines) + "\n"


def catalog_names() -> list[str]:
    files = resources.files("curvespec").joinpath("catalog").iterdir()
    return sorted(f.name[: -len(".curve")] for f in files if f.name.endswith(".curve"))


def load_catalog(name: str) -> CurveDef:
    ref = resources.files("curvespec").joinpath("catalog").joinpath(f"{name}.curve")
    if not ref.is_file():
        raise CurveFileError(f"unknown catalog curve {name!r} (known: {', '.join(catalog_names())})")
    return parse_curve_text(ref.read_text(), source=f"catalog/{name}.curve")
