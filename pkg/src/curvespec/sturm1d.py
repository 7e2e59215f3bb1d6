"""Periodic Sturm-Liouville operator ``-4 d^2/ds^2 + q(s)`` on ``[0, L]``.

The production solver is Hill's method: Galerkin truncation in the Fourier
basis ``exp(2 pi i n s / L)``, ``|n| <= N``, doubling ``N`` until the lowest
eigenvalue settles.  `fd_oracle` is an independent second-order finite
difference discretisation with Richardson extrapolation.

The normalisation ``-d^2/ds^2 + q/4`` has exactly a quarter of this
spectrum; use `quarter_normalised`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .eigensolve import HermitianMatrix, Spectrum, sym_eigenvalues

__all__ = [
    "Potential",
    "CutoffError",
    "ConvergenceError",
    "assemble_hill",
    "eigenvalues_1d",
    "fd_oracle",
    "quarter_normalised",
    "hill_mu1",
    "N0_DEFAULT",
    "N_MAX_DEFAULT",
    "MU1_TOL",
]

N0_DEFAULT = 32
N_MAX_DEFAULT = 512
MU1_TOL = 1e-9


class CutoffError(ValueError):
    pass


class ConvergenceError(ArithmeticError):
    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (last change {residual:.3e})")
        self.residual = residual


@dataclass(frozen=True, eq=False)
class Potential:
    """Samples ``q[i] = q(i L / M)`` of a real ``L``-periodic potential."""

    L: float
    q: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float)
        if q.ndim != 1 or len(q) < 4:
            raise ValueError("potential needs a 1-d array of at least 4 samples")
        if not self.L > 0:
            raise ValueError(f"period must be positive, got {self.L}")
        q = q.copy()
        q.setflags(write=False)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "_hat", np.fft.fft(q) / len(q))

    @classmethod
    def from_geometry(cls, geom) -> "Potential":
        """Squared curvature of an arc-length sampled curve."""
        return cls(geom.L, geom.kappa**2)

    @classmethod
    def constant(cls, L: float, c: float, M: int = 256) -> "Potential":
        return cls(L, np.full(M, float(c)))

    @property
    def M(self) -> int:
        return len(self.q)

    @property
    def q_hat(self) -> np.ndarray:
        """Discrete Fourier coefficients, index ``j`` stored at ``j mod M``."""
        return self._hat

    @property
    def max_cutoff(self) -> int:
        """Largest ``N`` whose coupling range ``2N`` stays within ``M/2``."""
        return self.M // 4

    def coefficients(self, j: np.ndarray) -> np.ndarray:
        """Coefficients of the trigonometric interpolant for ``|j| <= M/2``.

        Negative indices are the exact conjugates of positive ones and the
        Nyquist term is split evenly between ``+M/2`` and ``-M/2``.
        """
        j = np.asarray(j)
        M = self.M
        if np.any(np.abs(j) > M // 2):
            raise CutoffError(f"Fourier index beyond M/2 = {M // 2}")
        hat = self._hat
        out = np.where(j >= 0, hat[np.abs(j) % M], np.conj(hat[np.abs(j) % M]))
        out = np.where(j == 0, hat[0].real, out)
        if M % 2 == 0:
            out = np.where(np.abs(j) == M // 2, 0.5 * hat[M // 2].real, out)
        return out

    def interpolate(self, s: np.ndarray) -> np.ndarray:
        """Trigonometric interpolant of the samples at arbitrary ``s``."""
        j = np.arange(-(self.M // 2), self.M // 2 + 1)
        c = self.coefficients(j)
        phase = np.exp(2j * math.pi * np.outer(np.asarray(s, dtype=float), j) / self.L)
        return (phase @ c).real

    def shifted(self, a: float) -> "Potential":
        return Potential(self.L, self.q + a)


def _check_cutoff(p: Potential, N: int) -> None:
    if N < 0:
        raise CutoffError(f"mode cutoff must be non-negative, got {N}")
    if N > p.max_cutoff:
        raise CutoffError(
            f"mode cutoff N={N} needs Fourier coefficients up to 2N={2 * N}, beyond M/2={p.M // 2}; use more samples"
        )


def potential_block(p: Potential, N: int) -> np.ndarray:
    """Toeplitz matrix ``q_hat(n - n')`` over ``n, n' in [-N, N]``."""
    _check_cutoff(p, N)
    n = np.arange(-N, N + 1)
    block = p.coefficients(n[:, None] - n[None, :])
    if not np.any(block.imag):
        return block.real.copy()
    return block


def kinetic_diagonal(L: float, N: int) -> np.ndarray:
    k = 2 * math.pi * np.arange(-N, N + 1) / L
    return 4.0 * k**2


def assemble_hill(p: Potential, N: int) -> HermitianMatrix:
    """Fourier-Galerkin matrix ``4 (2 pi n / L)^2 delta(n, n') + q_hat(n - n')``."""
    H = potential_block(p, N)
    H[np.diag_indices_from(H)] += kinetic_diagonal(p.L, N)
    return HermitianMatrix(H)


def hill_mu1(p: Potential, N: int, method: str = "lapack", count: int = 1) -> Spectrum:
    return sym_eigenvalues(assemble_hill(p, N), method=method, count=min(count, 2 * N + 1))


def eigenvalues_1d(
    p: Potential,
    k_max: int = 5,
    *,
    N0: int = N0_DEFAULT,
    N_max: int = N_MAX_DEFAULT,
    tol: float = MU1_TOL,
    method: str = "lapack",
) -> Spectrum:
    """Lowest ``k_max`` periodic eigenvalues of ``-4 d^2/ds^2 + q``.

    ``N`` doubles from ``N0`` until the lowest eigenvalue moves by less than
    ``tol``; the accepted cutoff is recorded in ``metadata["N"]``.
    """
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    N_max = min(N_max, p.max_cutoff)
    N = min(N0, N_max)
    while 2 * N + 1 < k_max:
        N *= 2
    prev = sym_eigenvalues(assemble_hill(p, N), method=method, count=k_max)
    history = [(N, float(prev[0]))]
    change = math.inf
    while N * 2 <= N_max:
        N *= 2
        cur = sym_eigenvalues(assemble_hill(p, N), method=method, count=k_max)
        change = abs(cur[0] - prev[0])
        history.append((N, float(cur[0])))
        prev = cur
        if change < tol:
            return Spectrum(cur.eigenvalues, cur.n, f"hill/{method}", change, {"N": N, "history": history})
    raise ConvergenceError(f"mu_1 not converged by N={N}", change)


def quarter_normalised(spec: Spectrum) -> Spectrum:
    """Spectrum of ``-d^2/ds^2 + q/4``."""
    return Spectrum(spec.eigenvalues / 4.0, spec.n, spec.method + "/4", spec.convergence_estimate / 4.0, dict(spec.metadata))


def _fd_spectrum(p: Potential, J: int, k_max: int, method: str) -> np.ndarray:
    h = p.L / J
    s = h * np.arange(J)
    if J == p.M:
        q = np.asarray(p.q)
    elif p.M % J == 0:
        q = np.asarray(p.q)[:: p.M // J]
    else:
        q = p.interpolate(s)
    A = np.zeros((J, J))
    idx = np.arange(J)
    A[idx, idx] = 8.0 / h**2 + q
    A[idx, (idx + 1) % J] = -4.0 / h**2
    A[(idx + 1) % J, idx] = -4.0 / h**2
    return sym_eigenvalues(HermitianMatrix(A), method=method, count=k_max).eigenvalues


def fd_oracle(p: Potential, J: int = 512, k_max: int = 5, method: str = "lapack") -> Spectrum:
    """Central-difference eigenvalues on ``J`` and ``2J`` points, Richardson-extrapolated.

    The circulant discretisation has error ``O(h^2)``; ``(4 mu(2J) - mu(J)) / 3``
    removes the leading term.
    """
    if J < 32:
        raise ValueError("fd_oracle needs J >= 32")
    coarse = _fd_spectrum(p, J, k_max, method)
    fine = _fd_spectrum(p, 2 * J, k_max, method)
    extrapolated = (4.0 * fine - coarse) / 3.0
    return Spectrum(
        np.sort(extrapolated),
        2 * J,
        "fd-richardson",
        float(np.max(np.abs(fine - coarse))),
        {"J": J, "coarse": coarse, "fine": fine},
    )
