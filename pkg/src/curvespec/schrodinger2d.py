"""Lowest eigenvalue of the 2D periodic operator on ``[0, 2 pi] x [0, L]``::

    P = -(1 + A^2/L^2) d_tt - 4 d_ss - (4A/L) d_t d_s + kappa(s)^2

The potential does not depend on ``t``, so each Fourier mode ``exp(i m t)``
is invariant and ``P`` splits into 1D Hill problems.  On
``exp(i m t) exp(i k s)`` with ``k = 2 pi n / L`` the constant-coefficient part
has symbol::

    (1 + A^2/L^2) m^2 + 4 k^2 + (4A/L) m k  =  m^2 + (2k + A m / L)^2

(``-d_t d_s`` contributes ``-(i m)(i k) = + m k``).  The opposite sign of the
cross term is the same operator after ``m -> -m``; both are exercised by the
tests, which pin the circle equality case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .eigensolve import HermitianMatrix, sym_eigenvalues
from .sturm1d import Potential, potential_block

__all__ = ["Operator2DSpec", "Mu2DResult", "mode_reduce", "mu1_2d", "CROSS_SIGN"]

CROSS_SIGN = +1


@dataclass(frozen=True, eq=False)
class Operator2DSpec:
    L: float
    A: float
    potential: Potential
    admissible: bool = field(init=False)

    def __post_init__(self):
        if not self.L > 0:
            raise ValueError(f"L must be positive, got {self.L}")
        if not 0 <= self.A < 4 * math.pi:
            raise ValueError(f"A must lie in [0, 4 pi), got {self.A}")
        if not math.isclose(self.potential.L, self.L, rel_tol=1e-12):
            raise ValueError("potential period differs from L")
        # isoperimetric inequality on the unit sphere
        object.__setattr__(self, "admissible", 4 * math.pi * self.A - self.A**2 <= self.L**2 * (1 + 1e-12))

    @classmethod
    def from_geometry(cls, geom, area: float | None = None) -> "Operator2DSpec":
        A = geom.area if area is None else area
        return cls(geom.L, A, Potential.from_geometry(geom))


def mode_reduce(spec: Operator2DSpec, m: int, N: int, cross_sign: int = CROSS_SIGN) -> HermitianMatrix:
    """Hill matrix of ``P`` restricted to the ``t``-mode ``exp(i m t)``."""
    L, A = spec.L, spec.A
    k = 2 * math.pi * np.arange(-N, N + 1) / L
    diag = (1 + A**2 / L**2) * m**2 + 4 * k**2 + cross_sign * (4 * A / L) * m * k
    H = potential_block(spec.potential, N)
    H[np.diag_indices_from(H)] += diag
    return HermitianMatrix(H)


@dataclass(frozen=True)
class Mu2DResult:
    mu1: float
    mode: int
    modes_scanned: tuple[int, ...]
    N: int
    potential_floor: float

    def __float__(self):
        return self.mu1


def mu1_2d(
    spec: Operator2DSpec,
    N: int = 128,
    *,
    method: str = "lapack",
    extra_modes: int = 0,
    cross_sign: int = CROSS_SIGN,
) -> Mu2DResult:
    """``min_m`` of the lowest eigenvalue of `mode_reduce` ``(spec, m, N)``.

    Every mode satisfies ``lambda_min(m) >= m^2 + lambda_min(Q)`` where ``Q``
    is the potential block, since the kinetic symbol is ``m^2 + (...)^2``.
    Modes are visited as ``0, 1, -1, 2, -2, ...`` and the scan stops once
    that bound exceeds the best value found; ``extra_modes`` widens the
    window further (used to test the pruning).
    """
    floor = float(sym_eigenvalues(HermitianMatrix(potential_block(spec.potential, N)), method=method, count=1)[0])
    best = math.inf
    best_m = 0
    scanned = []
    m_abs = 0
    limit = None
    while limit is None or m_abs <= limit:
        for m in (0,) if m_abs == 0 else (m_abs, -m_abs):
            value = float(sym_eigenvalues(mode_reduce(spec, m, N, cross_sign), method=method, count=1)[0])
            scanned.append(m)
            if value < best:  # strict: ties keep the smaller |m|, positive first
                best, best_m = value, m
        if limit is None and (m_abs + 1) ** 2 + floor > best + 1e-12 * max(1.0, abs(best)):
            limit = m_abs + extra_modes
        m_abs += 1
    return Mu2DResult(best, best_m, tuple(scanned), N, floor)
