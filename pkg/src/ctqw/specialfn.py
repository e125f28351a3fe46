"""Bessel functions of the first kind J_n(x) for integer order.

Power series below |x| = 12, Miller's downward recurrence normalized with
J_0 + 2 * sum_k J_2k = 1 above. Works on scalars or numpy arrays of x.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import BesselDomainError

MAX_ARG = 1e4
MAX_ORDER = 10_000
SERIES_LIMIT = 12.0

_BIG = 1e250


def _series(n: int, x: np.ndarray) -> np.ndarray:
    half = x / 2.0
    with np.errstate(divide="ignore", invalid="ignore"):
        log_lead = n * np.log(half) - math.lgamma(n + 1)
    term = np.where(x == 0.0, 1.0 if n == 0 else 0.0, np.exp(log_lead))
    total = term.copy()
    q = half * half
    done = np.zeros(x.shape, dtype=bool)
    k = 0
    while not done.all():
        k += 1
        term = -term * q / (k * (n + k))
        total += np.where(done, 0.0, term)
        if k > 8:
            # freeze converged elements so results do not depend on the batch
            done |= np.abs(term) <= 1e-17 * np.maximum(np.abs(total), 1e-300)
    return total


def _miller(n: int, x: np.ndarray) -> np.ndarray:
    # per-element start order, so a value never depends on the rest of the batch
    top = np.maximum(n, np.ceil(x)).astype(np.int64)
    starts = top + np.ceil(np.sqrt(40.0 * top)).astype(np.int64) + 40
    starts += starts % 2
    j_next = np.zeros_like(x)
    j = np.zeros_like(x)
    norm = np.zeros_like(x)
    result = np.zeros_like(x)
    two_over_x = 2.0 / x
    for k in range(int(starts.max()), 0, -1):
        j = np.where(starts == k, 1e-30, j)
        # j holds J_k, j_next holds J_{k+1}; step down to J_{k-1}
        j_prev = k * two_over_x * j - j_next
        j_next, j = j, j_prev
        if (k - 1) == n:
            result = j.copy()
        if (k - 1) % 2 == 0 and k - 1 > 0:
            norm += 2.0 * j
        big = np.abs(j) > _BIG
        if big.any():
            scale = np.where(big, 1.0 / _BIG, 1.0)
            j *= scale
            j_next *= scale
            norm *= scale
            result *= scale
    norm += j  # J_0 term
    return result / norm


def bessel_j(n: int, x):
    """J_n(x) for integer n and real x with |x| <= 1e4, |n| <= 1e4.

    Accepts a scalar or an array for `x`; the return type follows the input.
    """
    n = int(n)
    if abs(n) > MAX_ORDER:
        raise BesselDomainError(f"|order| {abs(n)} exceeds {MAX_ORDER}")
    xa = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(xa)) or np.any(np.abs(xa) > MAX_ARG):
        raise BesselDomainError(f"argument outside [-{MAX_ARG:g}, {MAX_ARG:g}]")

    order = abs(n)
    sign = np.where(xa < 0.0, (-1.0) ** order, 1.0)
    if n < 0:
        sign = sign * (-1.0) ** order
    ax = np.abs(xa).ravel()

    out = np.empty_like(ax)
    small = ax < SERIES_LIMIT
    if small.any():
        out[small] = _series(order, ax[small])
    if (~small).any():
        out[~small] = _miller(order, ax[~small])
    out = out.reshape(xa.shape) * sign
    if np.ndim(x) == 0:
        return float(out)
    return out


def recurrence_residual(x, orders=range(1, 41)) -> float:
    """max |J_{n-1} + J_{n+1} - (2n/x) J_n| over the given orders and x > 0."""
    x = np.asarray(x, dtype=float)
    worst = 0.0
    for n in orders:
        r = bessel_j(n - 1, x) + bessel_j(n + 1, x) - (2.0 * n / x) * bessel_j(n, x)
        worst = max(worst, float(np.abs(r).max()))
    return worst


def normalization_residual(x) -> float:
    """max |J_0 + 2 sum_k J_2k - 1| over x."""
    x = np.asarray(x, dtype=float)
    top = int(math.ceil(float(np.abs(x).max())))
    kmax = (top + int(math.ceil(math.sqrt(40.0 * max(top, 1)))) + 40) // 2 + 1
    total = bessel_j(0, x) + 2.0 * sum(bessel_j(2 * k, x) for k in range(1, kmax + 1))
    return float(np.abs(total - 1.0).max())


def propagator_normalization_residual(t) -> float:
    """max |sum_d J_d(2t)^2 - 1| with |d| <= ceil(4 t_max) + 30."""
    t = np.asarray(t, dtype=float)
    span = int(math.ceil(4.0 * float(t.max()))) + 30
    total = sum(bessel_j(d, 2.0 * t) ** 2 for d in range(-span, span + 1))
    return float(np.abs(total - 1.0).max())
