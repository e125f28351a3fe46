"""Transition amplitudes and probabilities for CTRWs and CTQWs on 1-D lattices.

Three independent routes to the quantum amplitude <j| exp(-i H t) |k>:

* spectral: through an eigendecomposition of the adjacency matrix,
* bloch: direct sum over the Bloch modes of the periodic lattice,
* infinite: the N -> infinity limit, i^d exp(-2i gamma t) J_d(2 gamma t).

Rates enter only through gamma * t, so the Bloch and infinite-lattice forms
(natively written for gamma = 1) are evaluated at the scaled time gamma * t.
All node indices are 0-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PropagatorError
from .spectral import SpectralDecomposition
from .specialfn import bessel_j

CLAMP_SLACK = 1e-9


@dataclass(frozen=True)
class TimeGrid:
    t_start: float
    t_end: float
    n_samples: int

    def __post_init__(self):
        if not (math.isfinite(self.t_start) and math.isfinite(self.t_end)):
            raise PropagatorError("time grid bounds must be finite")
        if self.t_start < 0:
            raise PropagatorError(f"t_start must be >= 0, got {self.t_start}")
        if self.t_end <= self.t_start:
            raise PropagatorError(f"t_end ({self.t_end}) must exceed t_start ({self.t_start})")
        if int(self.n_samples) != self.n_samples or self.n_samples < 2:
            raise PropagatorError(f"n_samples must be an integer >= 2, got {self.n_samples}")

    @property
    def times(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_end, int(self.n_samples))

    @property
    def step(self) -> float:
        return (self.t_end - self.t_start) / (self.n_samples - 1)


def _check_node(node: int, n: int) -> int:
    if not 0 <= node < n:
        raise PropagatorError(f"node index {node} outside 0..{n - 1}")
    return int(node)


def _check_time(t) -> np.ndarray:
    ta = np.asarray(t, dtype=float)
    if np.any(ta < 0) or not np.all(np.isfinite(ta)):
        raise PropagatorError("times must be finite and >= 0")
    return ta


def clamp_probability(p, slack: float = CLAMP_SLACK):
    """Clip rounding excursions outside [0, 1]; larger ones indicate a bug."""
    pa = np.asarray(p, dtype=float)
    if np.any(pa < -slack) or np.any(pa > 1.0 + slack):
        worst = float(pa.min()) if pa.min() < -slack else float(pa.max())
        raise PropagatorError(f"probability {worst!r} outside [0, 1] beyond rounding")
    out = np.clip(pa, 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def transition_probability(a):
    """|a|^2 for a complex amplitude (scalar or array)."""
    aa = np.asarray(a)
    return clamp_probability(aa.real**2 + aa.imag**2)


# -- spectral route -----------------------------------------------------------


def classical_propagator(decomp: SpectralDecomposition, gamma: float, t, k: int) -> np.ndarray:
    """p_jk(t) for every node j; shape (len(t), N) for array t, (N,) for scalar t."""
    k = _check_node(k, decomp.order)
    ta = _check_time(t)
    q = decomp.eigenvectors
    decay = np.exp(-gamma * np.multiply.outer(ta, decomp.eigenvalues))
    p = (decay * q[k]) @ q.T
    return clamp_probability(p, 1e-12)


def classical_probability(decomp: SpectralDecomposition, gamma: float, t: float, j: int, k: int) -> float:
    j = _check_node(j, decomp.order)
    return float(classical_propagator(decomp, gamma, float(t), k)[j])


def quantum_propagator(decomp: SpectralDecomposition, gamma: float, t, k: int) -> np.ndarray:
    """alpha_jk(t) for every node j; shape (len(t), N) for array t, (N,) for scalar t."""
    k = _check_node(k, decomp.order)
    ta = _check_time(t)
    q = decomp.eigenvectors
    phases = np.exp(-1j * gamma * np.multiply.outer(ta, decomp.eigenvalues))
    return (phases * q[k]) @ q.T


def quantum_amplitude_spectral(decomp: SpectralDecomposition, gamma: float, t: float, j: int, k: int) -> complex:
    j = _check_node(j, decomp.order)
    return complex(quantum_propagator(decomp, gamma, float(t), k)[j])


# -- Bloch route --------------------------------------------------------------


def bloch_propagator(n: int, gamma: float, t, k: int) -> np.ndarray:
    """alpha_jk(t) for every node j of the periodic lattice from the Bloch-mode sum.

    Uses the phase convention exp(-2 pi i m (k - j) / N) over modes m = 1..N,
    summed directly (no FFT).
    """
    if n < 3:
        raise PropagatorError(f"the Bloch sum needs a periodic lattice with N >= 3, got {n}")
    k = _check_node(k, n)
    ta = _check_time(t)
    theta = 2.0 * np.pi * np.arange(1, n + 1) / n
    offsets = k - np.arange(n)
    mode_phase = np.exp(-1j * np.outer(offsets, theta))  # (node j, mode)
    tau = gamma * ta
    evolution = np.exp(2j * np.multiply.outer(tau, np.cos(theta)))  # (..., mode)
    return np.exp(-2j * tau)[..., None] * (evolution @ mode_phase.T) / n


def quantum_amplitude_bloch(n: int, gamma: float, t: float, j: int, k: int) -> complex:
    j = _check_node(j, n)
    return complex(bloch_propagator(n, gamma, float(t), k)[j])


# -- infinite lattice ---------------------------------------------------------


def quantum_amplitude_infinite(gamma: float, t, d: int):
    """Amplitude to move by `d` sites on the infinite chain: i^d e^{-2i gamma t} J_d(2 gamma t)."""
    ta = _check_time(t)
    tau = gamma * ta
    amp = (1j ** (int(d) % 4)) * np.exp(-2j * tau) * bessel_j(int(d), 2.0 * tau)
    return complex(amp) if np.ndim(amp) == 0 else amp


def infinite_probability(gamma: float, t, d: int):
    return clamp_probability(bessel_j(int(d), 2.0 * gamma * _check_time(t)) ** 2)


# -- closed forms for the smallest circles (gamma = 1) ------------------------


def pi_closed_form_n3(t, j: int, k: int):
    """Exact transition probability on the 3-node circle."""
    j, k = _check_node(j, 3), _check_node(k, 3)
    c = np.cos(t)
    if j == k:
        return 5 / 9 + 16 / 9 * c**3 - 4 / 3 * c
    return 2 / 9 - 8 / 9 * c**3 + 2 / 3 * c


def pi_closed_form_n4(t, j: int, k: int):
    """Exact transition probability on the 4-node circle."""
    j, k = _check_node(j, 4), _check_node(k, 4)
    c, s = np.cos(t), np.sin(t)
    if j == k:
        return c**4
    if (k - j) % 4 == 2:
        return s**4
    return s**2 * c**2
