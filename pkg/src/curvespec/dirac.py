"""Flat-torus lattices and Dirac spectra.

The Hopf torus over a closed curve of length ``L`` bounding area ``A`` on
the unit sphere is the flat torus ``R^2 / Gamma`` with ``Gamma`` spanned by
``(2 pi, 0)`` and ``(A/2, L/2)``; the circle bundle of Chern class ``m``
replaces the first generator by ``(2 pi / m, 0)``.  With spin structure
``(0, 1)`` the squared Dirac eigenvalues are ``4 pi^2 |k w1 + (l + 1/2) w2|^2``
over the dual basis ``(w1, w2)``, i.e.::

    lambda^2(k, l) = k^2 m^2 + (4 pi^2 / L^2) ((2l + 1) - k m A / (2 pi))^2
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "TorusLattice",
    "LatticeError",
    "dual_lattice",
    "hopf_lattice",
    "lens_lattice",
    "dirac_eigenvalue",
    "dirac_eigenvalue_from_lattice",
    "dirac_minimum",
    "DiracMinimum",
    "circle_dirac_spectrum",
    "isoperimetric_admissible",
]


class LatticeError(ValueError):
    pass


@dataclass(frozen=True)
class TorusLattice:
    v1: tuple[float, float]
    v2: tuple[float, float]
    theta: float
    dual1: tuple[float, float]
    dual2: tuple[float, float]
    spin: tuple[int, int] = (0, 1)

    @property
    def basis(self) -> np.ndarray:
        return np.array([self.v1, self.v2], dtype=float)

    @property
    def dual_basis(self) -> np.ndarray:
        return np.array([self.dual1, self.dual2], dtype=float)

    @property
    def covolume(self) -> float:
        return abs(float(np.linalg.det(self.basis)))


def dual_lattice(v1, v2) -> tuple[tuple[float, float], tuple[float, float]]:
    """Basis ``(w1, w2)`` with ``<v_i, w_j> = delta_ij``."""
    (a, b), (c, d) = v1, v2
    det = a * d - b * c
    if abs(det) <= 1e-12:
        raise LatticeError(f"basis vectors are linearly dependent (det = {det:.3e})")
    # rows of the inverse transpose of [v1 v2] (columns)
    w1 = (d / det, -c / det)
    w2 = (-b / det, a / det)
    return w1, w2


def lens_lattice(L: float, A: float, m: int = 1) -> TorusLattice:
    """Lattice of the torus over the curve in the Chern class ``m`` bundle."""
    if not L > 0:
        raise LatticeError(f"L must be positive, got {L}")
    if not 0 <= A <= 4 * math.pi:
        raise LatticeError(f"A must lie in [0, 4 pi], got {A}")
    if m < 1:
        raise LatticeError(f"Chern class must be >= 1, got {m}")
    v1 = (2 * math.pi / m, 0.0)
    v2 = (A / 2, L / 2)
    w1, w2 = dual_lattice(v1, v2)
    return TorusLattice(v1, v2, A / 2, w1, w2, (0, 1))


def hopf_lattice(L: float, A: float) -> TorusLattice:
    return lens_lattice(L, A, 1)


def dirac_eigenvalue(L: float, A: float, m: int, k: int, l: int) -> float:
    if not L > 0:
        raise LatticeError(f"L must be positive, got {L}")
    return k * k * m * m + (4 * math.pi**2 / L**2) * ((2 * l + 1) - k * m * A / (2 * math.pi)) ** 2


def dirac_eigenvalue_from_lattice(lattice: TorusLattice, k: int, l: int) -> float:
    """``4 pi^2 |k w1 + (l + 1/2) w2|^2`` for spin structure (0, 1)."""
    e1, e2 = lattice.spin
    w = (k + e1 / 2) * np.array(lattice.dual1) + (l + e2 / 2) * np.array(lattice.dual2)
    return float(4 * math.pi**2 * (w @ w))


def isoperimetric_admissible(L: float, A: float) -> bool:
    return 0 <= A <= 4 * math.pi and 4 * math.pi * A - A * A <= L * L


@dataclass(frozen=True)
class DiracMinimum:
    value: float
    k: int
    l: int
    admissible: bool
    k_window: int

    @property
    def argmin(self) -> tuple[int, int]:
        return self.k, self.l


def _tie_key(k: int, l: int):
    return (abs(k), abs(2 * l + 1), k < 0, l < 0)


def dirac_minimum(L: float, A: float, m: int = 1) -> DiracMinimum:
    """Exact minimum of `dirac_eigenvalue` over ``(k, l) in Z^2``.

    For fixed ``k`` the best ``l`` is one of the two integers around
    ``(k m A / (2 pi) - 1) / 2``; the ``k^2 m^2`` term bounds the ``k``
    window by the best value seen so far.  Ties go to the smallest
    ``|k|``, then the smallest ``|2l + 1|``, then non-negative indices.
    """
    if not L > 0:
        raise LatticeError(f"L must be positive, got {L}")
    if not 0 <= A <= 4 * math.pi:
        raise LatticeError(f"A must lie in [0, 4 pi], got {A}")
    if m < 1:
        raise LatticeError(f"Chern class must be >= 1, got {m}")
    best = None
    k_abs = 0
    while True:
        if best is not None and (k_abs * m) ** 2 > best[0]:
            break
        for k in (0,) if k_abs == 0 else (k_abs, -k_abs):
            centre = (k * m * A / (2 * math.pi) - 1) / 2
            for l in sorted({math.floor(centre), math.ceil(centre)}):
                value = dirac_eigenvalue(L, A, m, k, l)
                cand = (value, _tie_key(k, l), k, l)
                if best is None or (value, _tie_key(k, l)) < (best[0], best[1]):
                    best = cand
        k_abs += 1
    value, _, k, l = best
    return DiracMinimum(value, k, l, isoperimetric_admissible(L, A), k_abs - 1)


def circle_dirac_spectrum(L: float, count: int) -> list[float]:
    """Distinct squared Dirac eigenvalues ``(4 pi^2 / L^2)(j + 1/2)^2``, ``j = 0..count-1``,
    of a circle of length ``L`` with the non-trivial spin structure."""
    if not L > 0:
        raise LatticeError(f"L must be positive, got {L}")
    if count < 1:
        raise ValueError("count must be at least 1")
    return [(4 * math.pi**2 / L**2) * (j + 0.5) ** 2 for j in range(count)]
