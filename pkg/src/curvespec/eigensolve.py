"""Dense Hermitian eigenvalues.

Two solvers share one contract:

* ``method="lapack"`` calls LAPACK's ``?syev``/``?heev`` driver through
  scipy (Householder reduction to tridiagonal form followed by the
  root-free QL/QR iteration), or ``?syevr`` when only the lowest
  ``count`` values are wanted.
* ``method="householder-ql"`` is a self-contained Householder reduction
  plus implicitly shifted QL.  Complex Hermitian input is handled through
  the real symmetric embedding ``[[Re, -Im], [Im, Re]]`` whose spectrum is
  the original one with every value doubled.

Independent checks live in `bisection_eigenvalues` (Sylvester inertia of
``A - x I`` via an LDL^H factorisation) and `sturm_count` (tridiagonal).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

__all__ = [
    "HermitianMatrix",
    "Spectrum",
    "NotHermitianError",
    "EigenError",
    "sym_eigenvalues",
    "householder_tridiagonal",
    "ql_eigenvalues",
    "real_embedding",
    "collapse_pairs",
    "sturm_count",
    "inertia_count",
    "bisection_eigenvalues",
]

METHODS = ("lapack", "householder-ql")
PAIR_TOL = 1e-8


class EigenError(ArithmeticError):
    pass


class NotHermitianError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class HermitianMatrix:
    """Square matrix checked to equal its conjugate transpose exactly."""

    data: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.data)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise NotHermitianError(f"expected a square matrix, got shape {a.shape}")
        if a.shape[0] == 0:
            raise NotHermitianError("matrix dimension must be at least 1")
        if np.iscomplexobj(a) and not np.any(a.imag):
            a = a.real
        a = np.array(a, dtype=complex if np.iscomplexobj(a) else float)
        if not np.array_equal(a, a.conj().T):
            i, j = np.unravel_index(np.argmax(np.abs(a - a.conj().T)), a.shape)
            raise NotHermitianError(f"entry ({i},{j}) is not the conjugate of entry ({j},{i})")
        a.setflags(write=False)
        object.__setattr__(self, "data", a)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.data)


@dataclass(frozen=True, eq=False)
class Spectrum:
    eigenvalues: np.ndarray
    n: int
    method: str
    convergence_estimate: float
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        ev = np.asarray(self.eigenvalues, dtype=float)
        if not np.all(np.isfinite(ev)):
            raise EigenError("non-finite eigenvalue")
        if np.any(np.diff(ev) < 0):
            raise EigenError("eigenvalues are not sorted")
        object.__setattr__(self, "eigenvalues", ev)

    def __len__(self):
        return len(self.eigenvalues)

    def __getitem__(self, i):
        return self.eigenvalues[i]


# --------------------------------------------------------------------------
# self-contained path


def householder_tridiagonal(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Reduce a real symmetric matrix to tridiagonal ``(diag, offdiag)``."""
    a = np.array(a, dtype=float)
    n = len(a)
    for k in range(n - 2):
        u = a[k + 1 :, k].copy()
        alpha = math.sqrt(float(u @ u))
        if alpha == 0.0:
            continue
        if u[0] < 0.0:
            alpha = -alpha
        u[0] += alpha
        h = float(u @ u) / 2.0
        sub = a[k + 1 :, k + 1 :]
        v = sub @ u / h
        g = float(u @ v) / (2.0 * h)
        v -= g * u
        sub -= np.outer(v, u) + np.outer(u, v)
        a[k + 1 :, k] = 0.0
        a[k, k + 1 :] = 0.0
        a[k + 1, k] = a[k, k + 1] = -alpha
    return np.diagonal(a).copy(), np.diagonal(a, 1).copy()


def ql_eigenvalues(d: np.ndarray, e: np.ndarray, max_iter: int = 60) -> tuple[np.ndarray, float]:
    """Eigenvalues of a symmetric tridiagonal matrix by implicitly shifted QL.

    Returns the sorted eigenvalues and the largest off-diagonal magnitude
    that was deflated as negligible.
    """
    d = [float(x) for x in d]
    n = len(d)
    e = [float(x) for x in e] + [0.0]
    eps = np.finfo(float).eps
    deflated = 0.0
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= eps * dd:
                    deflated = max(deflated, abs(e[m]))
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > max_iter:
                raise EigenError(f"QL iteration did not converge for eigenvalue {l}")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            restart = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    restart = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                i -= 1
            if restart:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return np.sort(np.array(d)), deflated


def real_embedding(a: np.ndarray) -> np.ndarray:
    """Real symmetric ``[[Re, -Im], [Im, Re]]`` of a complex Hermitian matrix."""
    re, im = a.real, a.imag
    return np.block([[re, -im], [im, re]])


def collapse_pairs(values: np.ndarray, tol: float = PAIR_TOL) -> np.ndarray:
    """Undo the doubling of the complex embedding by greedy adjacent pairing."""
    values = np.sort(values)
    if len(values) % 2:
        raise EigenError("embedded spectrum has odd length")
    first, second = values[0::2], values[1::2]
    scale = np.maximum(1.0, np.maximum(np.abs(first), np.abs(second)))
    gap = np.abs(second - first) / scale
    if np.any(gap > tol):
        k = int(np.argmax(gap))
        raise EigenError(f"embedded eigenvalues do not pair up (relative gap {gap[k]:.2e} at {first[k]:.6g})")
    return 0.5 * (first + second)


def _householder_ql(m: HermitianMatrix) -> tuple[np.ndarray, float]:
    if m.n == 1:
        return np.array([float(m.data[0, 0].real)]), 0.0
    if m.is_real:
        d, e = householder_tridiagonal(m.data)
        return ql_eigenvalues(d, e)
    d, e = householder_tridiagonal(real_embedding(m.data))
    doubled, deflated = ql_eigenvalues(d, e)
    return collapse_pairs(doubled), deflated


def sym_eigenvalues(m: HermitianMatrix, method: str = "lapack", count: int | None = None) -> Spectrum:
    """Ascending eigenvalues of ``m`` (the lowest ``count`` if given)."""
    if not isinstance(m, HermitianMatrix):
        m = HermitianMatrix(np.asarray(m))
    n = m.n
    if count is not None and not 1 <= count <= n:
        raise ValueError(f"count must be in [1, {n}], got {count}")
    scale = float(np.max(np.abs(m.data)))
    eps = np.finfo(float).eps
    if method == "lapack":
        if count is None or count == n:
            values = scipy.linalg.eigh(m.data, eigvals_only=True, driver="ev")
        else:
            values = scipy.linalg.eigh(m.data, eigvals_only=True, driver="evr", subset_by_index=(0, count - 1))
        estimate = eps * n * scale
    elif method == "householder-ql":
        values, estimate = _householder_ql(m)
        if count is not None:
            values = values[:count]
    else:
        raise ValueError(f"unknown method {method!r}; choose from {METHODS}")
    return Spectrum(np.sort(values), n, method, float(estimate))


# --------------------------------------------------------------------------
# oracles


def sturm_count(d: np.ndarray, e: np.ndarray, x: float) -> int:
    """Number of eigenvalues of tridiag(d, e) strictly below ``x``."""
    count = 0
    q = 1.0
    tiny = np.finfo(float).tiny
    for i in range(len(d)):
        off = e[i - 1] ** 2 / q if i > 0 else 0.0
        q = d[i] - x - off
        if q == 0.0:
            q = -tiny
        if q < 0:
            count += 1
    return count


def inertia_count(a: np.ndarray, x: float) -> int:
    """Number of eigenvalues of the Hermitian ``a`` strictly below ``x``.

    Sylvester's law of inertia on the block LDL^H factorisation of ``a - x I``.
    """
    shifted = np.asarray(a) - x * np.eye(len(a))
    _, dmat, _ = scipy.linalg.ldl(shifted, hermitian=True)
    count = 0
    i = 0
    n = len(dmat)
    while i < n:
        if i + 1 < n and dmat[i + 1, i] != 0:
            p, q = dmat[i, i].real, dmat[i + 1, i + 1].real
            det = p * q - abs(dmat[i + 1, i]) ** 2
            if det < 0:
                count += 1
            elif p + q < 0:
                count += 2
            i += 2
        else:
            count += dmat[i, i].real < 0
            i += 1
    return int(count)


def bisection_eigenvalues(a: np.ndarray, tol: float = 1e-13) -> np.ndarray:
    """All eigenvalues of a Hermitian matrix by bisection on inertia counts."""
    a = np.asarray(a)
    n = len(a)
    radius = np.sum(np.abs(a), axis=1) - np.abs(np.diag(a))
    lo0 = float(np.min(np.diag(a).real - radius)) - 1.0
    hi0 = float(np.max(np.diag(a).real + radius)) + 1.0
    out = np.empty(n)
    for k in range(n):
        lo, hi = lo0, hi0
        while hi - lo > tol * max(1.0, abs(lo), abs(hi)):
            mid = 0.5 * (lo + hi)
            if inertia_count(a, mid) > k:
                hi = mid
            else:
                lo = mid
        out[k] = 0.5 * (lo + hi)
    return out
