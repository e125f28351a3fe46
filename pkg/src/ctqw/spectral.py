"""Spectral decomposition of real symmetric (Laplacian) matrices.

`eigendecompose_symmetric` is a cyclic-by-row Jacobi solver (numba-compiled
sweeps over the pairs p < q in a fixed order).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numba
import numpy as np

from .errors import NonConvergenceError
from .lattice import LatticeSpec, build_adjacency

DEFAULT_TOL = 1e-12
DEGENERACY_TOL = 1e-8
MAX_SWEEPS = 100


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residual_tolerance: float = DEFAULT_TOL

    @property
    def order(self) -> int:
        return len(self.eigenvalues)

    def orthonormality_error(self) -> float:
        q = self.eigenvectors
        return float(np.abs(q.T @ q - np.eye(self.order)).max())

    def residual(self, a: np.ndarray) -> float:
        q = self.eigenvectors
        return float(np.abs(np.asarray(a, float) @ q - q * self.eigenvalues).max())

    def clusters(self, tol: float = DEGENERACY_TOL) -> list[slice]:
        """Index ranges of (ascending) eigenvalues closer than `tol` in a chain."""
        breaks = np.flatnonzero(np.diff(self.eigenvalues) >= tol) + 1
        edges = [0, *breaks.tolist(), self.order]
        return [slice(a, b) for a, b in zip(edges[:-1], edges[1:])]


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(off * off)))


@numba.njit(cache=True)
def _sweep(a, v):
    # one cyclic-by-row sweep over all pairs p < q
    n = a.shape[0]
    for p in range(n - 1):
        for q in range(p + 1, n):
            apq = a[p, q]
            if apq == 0.0:
                continue
            theta = (a[q, q] - a[p, p]) / (2.0 * apq)
            if theta == 0.0:
                t = 1.0
            elif abs(theta) > 1e150:
                t = 0.5 / theta
            else:
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            for k in range(n):
                akp = a[k, p]
                akq = a[k, q]
                a[k, p] = c * akp - s * akq
                a[k, q] = s * akp + c * akq
            for k in range(n):
                apk = a[p, k]
                aqk = a[q, k]
                a[p, k] = c * apk - s * aqk
                a[q, k] = s * apk + c * aqk
            a[p, q] = 0.0
            a[q, p] = 0.0
            for k in range(n):
                vkp = v[k, p]
                vkq = v[k, q]
                v[k, p] = c * vkp - s * vkq
                v[k, q] = s * vkp + c * vkq


def _jacobi(a: np.ndarray, tol: float, max_sweeps: int) -> tuple[np.ndarray, np.ndarray]:
    v = np.eye(a.shape[0])
    for _ in range(max_sweeps):
        if _off_norm(a) < tol:
            return a.diagonal().copy(), v
        _sweep(a, v)
    off = _off_norm(a)
    if off >= tol:
        raise NonConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps", off)
    return a.diagonal().copy(), v


def _gram_schmidt(block: np.ndarray) -> np.ndarray:
    out = block.copy()
    for i in range(out.shape[1]):
        for _ in range(2):  # second pass restores orthogonality lost to rounding
            for j in range(i):
                out[:, i] -= (out[:, j] @ out[:, i]) * out[:, j]
        out[:, i] /= np.linalg.norm(out[:, i])
    return out


def _fix_signs(q: np.ndarray) -> np.ndarray:
    lead = np.argmax(np.abs(q), axis=0)
    signs = np.sign(q[lead, np.arange(q.shape[1])])
    signs[signs == 0] = 1.0
    return q * signs


def eigendecompose_symmetric(
    a: np.ndarray,
    tol: float = DEFAULT_TOL,
    degeneracy_tol: float = DEGENERACY_TOL,
    max_sweeps: int = MAX_SWEEPS,
) -> SpectralDecomposition:
    """Diagonalize a real symmetric matrix by cyclic Jacobi rotations.

    Eigenvalues are returned in ascending order. Eigenvectors inside each
    degeneracy cluster are re-orthonormalized, and every eigenvector is
    oriented so that its largest-magnitude component is positive.

    Raises NonConvergenceError if the off-diagonal Frobenius norm is still
    above `tol` after `max_sweeps` sweeps.
    """
    if not 1e-14 <= tol <= 1e-6:
        raise ValueError(f"tol must lie in [1e-14, 1e-6], got {tol}")
    a = np.array(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    if not np.array_equal(a, a.T):
        raise ValueError("matrix must be symmetric")

    evals, evecs = _jacobi(a, tol, max_sweeps)
    order = np.argsort(evals, kind="stable")
    evals, evecs = evals[order], evecs[:, order]

    decomp = SpectralDecomposition(evals, evecs, tol)
    for cluster in decomp.clusters(degeneracy_tol):
        if cluster.stop - cluster.start > 1:
            evecs[:, cluster] = _gram_schmidt(evecs[:, cluster])
    evecs = _fix_signs(evecs)
    evals.setflags(write=False)
    evecs.setflags(write=False)
    return SpectralDecomposition(evals, evecs, tol)


@lru_cache(maxsize=32)
def lattice_decomposition(spec: LatticeSpec, tol: float = DEFAULT_TOL) -> SpectralDecomposition:
    """Cached decomposition of the lattice adjacency matrix (not the Hamiltonian)."""
    return eigendecompose_symmetric(build_adjacency(spec), tol)


def circulant_spectrum(n: int) -> np.ndarray:
    """Mode-indexed eigenvalues 2 - 2 cos(2 pi k / n) of the periodic lattice, k = 1..n."""
    if n < 3:
        raise ValueError(f"circulant spectrum needs n >= 3, got {n}")
    k = np.arange(1, n + 1)
    return 2.0 - 2.0 * np.cos(2.0 * np.pi * k / n)
