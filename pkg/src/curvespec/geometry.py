"""Differential geometry of closed curves sampled in arc length.

Sign convention for the geodesic curvature: ``kappa_g`` is measured against
the left normal ``N x T`` where ``T`` is the unit tangent and ``N`` the
outward normal of the ambient surface (``e_z`` for plane curves, the
position vector on the unit sphere).  With this convention a counter-
clockwise circle has positive ``kappa_g`` and the area returned by
`spherical_area` is that of the region on the left of the curve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .curves import REGULARITY_TOL, CurveDef

__all__ = [
    "AmbientClass",
    "CurveGeometry",
    "GeometryError",
    "classify",
    "arc_length",
    "curvature_at",
    "geodesic_curvature_at",
    "reparametrize",
    "total_curvature",
    "mean_square_curvature",
    "rotation_number",
    "spherical_area",
    "is_simple",
    "LENGTH_TOL",
]

LENGTH_TOL = 1e-10
SPHERE_TOL = 1e-9
PLANE_TOL = 1e-12
PANELS_PER_SAMPLE = 16
_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)


class GeometryError(ValueError):
    pass


@dataclass(frozen=True)
class AmbientClass:
    kind: str  # "plane" | "unit_sphere" | "space"
    radius: float | None = None

    @property
    def is_plane(self) -> bool:
        return self.kind == "plane"

    @property
    def is_unit_sphere(self) -> bool:
        return self.kind == "unit_sphere"


@dataclass(frozen=True, eq=False)
class CurveGeometry:
    """Arc-length sampled geometry of a closed curve.

    ``s_grid[i] = i * L / M``; ``t_grid`` holds the matching curve parameters.
    ``kappa_g`` is only filled for plane and unit-sphere curves,
    ``rotation_number`` only for plane curves and ``area`` only for curves
    on the unit sphere.  For a self-intersecting spherical curve ``area`` is
    the algebraic (winding-weighted) area modulo ``4*pi`` and ``simple`` is
    False.
    """

    name: str
    L: float
    s_grid: np.ndarray
    t_grid: np.ndarray
    points: np.ndarray  # (dim, M)
    kappa: np.ndarray
    kappa_g: np.ndarray | None
    ambient: AmbientClass
    rotation_number: int | None = None
    rotation_residual: float | None = None
    simple: bool | None = None
    area: float | None = None
    metadata: dict = field(default_factory=dict)

    @property
    def M(self) -> int:
        return len(self.s_grid)

    @property
    def ds(self) -> float:
        return self.L / self.M

    @property
    def area_complement(self) -> float | None:
        return None if self.area is None else 4 * math.pi - self.area


def classify(curve: CurveDef, samples: int = 4096) -> AmbientClass:
    t = curve.domain[0] + curve.period * np.arange(samples) / samples
    p = curve.point(t)
    if curve.dim == 2:
        return AmbientClass("plane")
    r2 = np.sum(p**2, axis=0)
    # circles of latitude are both; the sphere carries the area and 2D data
    if np.max(np.abs(r2 - 1.0)) <= SPHERE_TOL:
        return AmbientClass("unit_sphere", radius=float(np.sqrt(np.mean(r2))))
    if np.ptp(p[2]) <= PLANE_TOL:
        return AmbientClass("plane")
    # spheres of other radii are treated as general space curves
    return AmbientClass("space")


def _as3(v: np.ndarray) -> np.ndarray:
    if v.shape[0] == 3:
        return v
    return np.concatenate([v, np.zeros((1,) + v.shape[1:])], axis=0)


def _check_regular(curve: CurveDef, speed, t) -> None:
    speed = np.atleast_1d(speed)
    bad = speed < REGULARITY_TOL
    if np.any(bad):
        tb = np.atleast_1d(t)[np.argmax(bad)] if np.ndim(t) else t
        raise GeometryError(f"curve {curve.name!r} is not regular near t = {float(tb):.6g}")


def arc_length(curve: CurveDef, tol: float = LENGTH_TOL) -> float:
    """Length of the curve by adaptive Gauss-Kronrod quadrature of ``|gamma'|``."""

    def integrand(t):
        v = curve.speed(t)
        _check_regular(curve, v, t)
        return float(v)

    # equal pieces keep QUADPACK's subdivision well inside its limit
    pieces = 32
    edges = curve.domain[0] + curve.period * np.arange(pieces + 1) / pieces
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        value, err = integrate.quad(integrand, a, b, epsabs=tol / pieces, epsrel=0.0, limit=200)
        if err > tol / pieces:
            raise GeometryError(f"arc length quadrature did not reach {tol:g} on [{a:.6g}, {b:.6g}]")
        total += value
    return total


def curvature_at(curve: CurveDef, t):
    """Space curvature ``|gamma' x gamma''| / |gamma'|^3`` (plane curves embedded at z=0)."""
    d1 = _as3(curve.velocity(t))
    d2 = _as3(curve.acceleration(t))
    speed = np.sqrt(np.sum(d1**2, axis=0))
    _check_regular(curve, speed, t)
    cross = np.cross(d1, d2, axis=0)
    return np.sqrt(np.sum(cross**2, axis=0)) / speed**3


def geodesic_curvature_at(curve: CurveDef, t, ambient: AmbientClass):
    """Signed geodesic curvature for plane and unit-sphere curves."""
    d1 = curve.velocity(t)
    d2 = curve.acceleration(t)
    speed = np.sqrt(np.sum(d1**2, axis=0))
    _check_regular(curve, speed, t)
    if ambient.is_plane:
        return (d1[0] * d2[1] - d1[1] * d2[0]) / speed**3
    if ambient.is_unit_sphere:
        p = curve.point(t)
        det = np.sum(p * np.cross(d1, d2, axis=0), axis=0)
        return det / speed**3
    raise GeometryError("geodesic curvature needs a plane or unit-sphere curve")


# --------------------------------------------------------------------------
# arc-length inversion


def _panel_table(curve: CurveDef, panels: int):
    t0 = curve.domain[0]
    h = curve.period / panels
    edges = t0 + h * np.arange(panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = mid[:, None] + 0.5 * h * _GL_X[None, :]
    speed = curve.speed(nodes.ravel()).reshape(nodes.shape)
    _check_regular(curve, speed.ravel(), nodes.ravel())
    cum = np.concatenate([[0.0], np.cumsum(0.5 * h * speed @ _GL_W)])
    return edges, cum


def _partial_length(curve: CurveDef, a: np.ndarray, t: np.ndarray) -> np.ndarray:
    half = 0.5 * (t - a)
    nodes = (0.5 * (a + t))[:, None] + half[:, None] * _GL_X[None, :]
    speed = curve.speed(nodes.ravel()).reshape(nodes.shape)
    return half * (speed @ _GL_W)


def _invert_arclength(curve: CurveDef, s: np.ndarray, L: float, panels: int, tol: float):
    edges, cum = _panel_table(curve, panels)
    if abs(cum[-1] - L) > 1e-8 * L:
        raise GeometryError(f"panel table length {cum[-1]!r} disagrees with arc length {L!r}")
    if np.any(np.diff(cum) <= 0):
        raise GeometryError("internal error: cumulative arc length is not monotone")
    j = np.clip(np.searchsorted(cum, s, side="right") - 1, 0, panels - 1)
    a, b = edges[j], edges[j + 1]
    base = cum[j]
    lo, hi = a.copy(), b.copy()
    t = a + (s - base) / (cum[j + 1] - base) * (b - a)
    for _ in range(60):
        F = base + _partial_length(curve, a, t) - s
        if np.max(np.abs(F)) <= tol:
            return t
        lo = np.where(F < 0, t, lo)
        hi = np.where(F > 0, t, hi)
        step = t - F / curve.speed(t)
        outside = (step <= lo) | (step >= hi)
        t = np.where(outside, 0.5 * (lo + hi), step)
    raise GeometryError("arc-length inversion did not converge")


def reparametrize(curve: CurveDef, M: int = 2048, *, simplicity_factor: float = 0.25) -> CurveGeometry:
    """Sample the curve at ``M`` equally spaced arc-length nodes.

    ``M`` must be a power of two, at least 64.  ``simplicity_factor`` scales
    the self-intersection threshold ``simplicity_factor * L / M`` used before
    computing the enclosed area of spherical curves.
    """
    if M < 64 or M & (M - 1):
        raise GeometryError(f"sample count must be a power of two >= 64, got {M}")
    curve.validate()
    ambient = classify(curve)
    L = arc_length(curve)
    s = L * (np.arange(M) / M)
    t = _invert_arclength(curve, s, L, PANELS_PER_SAMPLE * M, tol=1e-12 * L)

    kappa = curvature_at(curve, t)
    kappa_g = geodesic_curvature_at(curve, t, ambient) if ambient.kind != "space" else None
    points = curve.point(t)
    meta = {
        "kappa_g_convention": "left normal N x T, N outward",
        "length_tol": LENGTH_TOL,
        "inversion_tol": 1e-12 * L,
        "panels": PANELS_PER_SAMPLE * M,
    }
    geom = CurveGeometry(curve.name, L, s, t, points, kappa, kappa_g, ambient, metadata=meta)

    updates = {}
    if ambient.is_plane:
        n, residual = _rotation(geom)
        updates.update(rotation_number=n, rotation_residual=residual)
    if ambient.is_unit_sphere:
        simple = is_simple(points, L, threshold=simplicity_factor * L / M)
        updates["simple"] = simple
        updates["area"] = _gauss_bonnet_area(geom)
        meta["simplicity_threshold"] = simplicity_factor * L / M
    if updates:
        geom = CurveGeometry(**{**geom.__dict__, **updates})
    return geom


# --------------------------------------------------------------------------
# integrals on the arc-length grid (trapezoid == rectangle rule for periodic data)


def total_curvature(geom: CurveGeometry) -> float:
    return float(np.sum(geom.kappa) * geom.ds)


def mean_square_curvature(geom: CurveGeometry) -> float:
    """``(1/L) * integral of kappa^2 ds``."""
    return float(np.mean(geom.kappa**2))


def _rotation(geom: CurveGeometry) -> tuple[int, float]:
    turns = float(np.sum(geom.kappa_g) * geom.ds) / (2 * math.pi)
    n = round(turns)
    return int(n), abs(turns - n)


def rotation_number(geom: CurveGeometry) -> int:
    """Winding number of the unit tangent of a plane curve."""
    if not geom.ambient.is_plane:
        raise GeometryError("rotation number is only defined here for plane curves")
    return _rotation(geom)[0]


def _gauss_bonnet_area(geom: CurveGeometry) -> float:
    signed = 2 * math.pi - float(np.sum(geom.kappa_g) * geom.ds)
    return signed % (4 * math.pi)


def spherical_area(geom: CurveGeometry, allow_self_intersection: bool = False) -> float:
    """Area on the left of a unit-sphere curve, in ``[0, 4*pi)``.

    Gauss-Bonnet: ``A = 2*pi - integral of kappa_g ds``, reduced modulo ``4*pi``.
    The complementary region has area ``4*pi - A``.  A self-intersecting
    curve raises unless ``allow_self_intersection`` is set, in which case
    the algebraic area is returned.
    """
    if not geom.ambient.is_unit_sphere:
        raise GeometryError("spherical area needs a curve on the unit sphere")
    if not geom.simple and not allow_self_intersection:
        raise GeometryError(f"curve {geom.name!r} intersects itself")
    return _gauss_bonnet_area(geom)


# --------------------------------------------------------------------------
# simplicity


def _segment_distances(p0, p1, q0, q1):
    """Minimum distance between segments [p0,p1] and [q0,q1] (broadcasting, shape (..., 3))."""
    d1 = p1 - p0
    d2 = q1 - q0
    r = p0 - q0
    a = np.sum(d1 * d1, axis=-1)
    e = np.sum(d2 * d2, axis=-1)
    f = np.sum(d2 * r, axis=-1)
    c = np.sum(d1 * r, axis=-1)
    b = np.sum(d1 * d2, axis=-1)
    denom = a * e - b * b
    with np.errstate(divide="ignore", invalid="ignore"):
        sc = np.where(denom > 1e-300, np.clip((b * f - c * e) / denom, 0.0, 1.0), 0.0)
        tc = (b * sc + f) / e
    # clamp tc and recompute sc where needed
    sc = np.where(tc < 0, np.clip(-c / a, 0.0, 1.0), np.where(tc > 1, np.clip((b - c) / a, 0.0, 1.0), sc))
    tc = np.clip(tc, 0.0, 1.0)
    diff = (p0 + sc[..., None] * d1) - (q0 + tc[..., None] * d2)
    return np.sqrt(np.sum(diff * diff, axis=-1))


def is_simple(points: np.ndarray, L: float, threshold: float | None = None, skip: int = 2) -> bool:
    """Grid-based simplicity test on the closed polygon through ``points``.

    Non-neighbouring chords (cyclic index gap > ``skip``) closer than
    ``threshold`` (default ``L / (4M)``) count as a self-intersection.
    """
    P = _as3(np.asarray(points, dtype=float)).T
    M = len(P)
    if threshold is None:
        threshold = L / (4 * M)
    Q = np.roll(P, -1, axis=0)
    idx = np.arange(M)
    chunk = 128
    for start in range(0, M, chunk):
        i = idx[start : start + chunk]
        dist = _segment_distances(P[i, None, :], Q[i, None, :], P[None, :, :], Q[None, :, :])
        gap = np.abs(i[:, None] - idx[None, :])
        gap = np.minimum(gap, M - gap)
        dist[gap <= skip] = np.inf
        if np.min(dist) < threshold:
            return False
    return True
