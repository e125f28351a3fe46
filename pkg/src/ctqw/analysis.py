"""Observables built on the propagators: limiting distributions, revival
times and revival detection, and spacetime probability carpets."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .dynamics import (
    TimeGrid,
    bloch_propagator,
    classical_propagator,
    clamp_probability,
    quantum_propagator,
    transition_probability,
)
from .errors import AnalysisError
from .lattice import LatticeSpec
from .spectral import DEGENERACY_TOL, SpectralDecomposition, lattice_decomposition

REVIVAL_SAMPLE_SPACING = 0.05
REVIVAL_REFINE_TOL = 1e-3
DEFAULT_CARPET_SAMPLES = 400


class Method(str, enum.Enum):
    SPECTRAL = "spectral"
    BLOCH = "bloch"


@dataclass(frozen=True)
class LimitingDistribution:
    start_node: int
    values: np.ndarray

    def maxima(self, rtol: float = 1e-9) -> list[int]:
        """Nodes attaining the maximum value (within a relative tolerance)."""
        top = self.values.max()
        return np.flatnonzero(self.values >= top * (1.0 - rtol)).tolist()


@dataclass(frozen=True)
class ProbabilityCarpet:
    spec: LatticeSpec
    start_node: int
    times: TimeGrid
    values: np.ndarray  # (n_samples, n_nodes)


@dataclass(frozen=True)
class RevivalReport:
    mode_times: np.ndarray
    tau0: float
    detected_first_revival: float
    detected_peak_probability: float


def _check_start(spec_or_n, node: int) -> int:
    n = spec_or_n if isinstance(spec_or_n, int) else spec_or_n.n_nodes
    if not 0 <= node < n:
        raise AnalysisError(f"node index {node} outside 0..{n - 1}")
    return int(node)


# -- limiting distribution ----------------------------------------------------


def limiting_distribution(
    decomp: SpectralDecomposition, start_node: int, degeneracy_tol: float = DEGENERACY_TOL
) -> LimitingDistribution:
    """Exact long-time average of pi_jk(t) for all j, with k = start_node.

    Cross terms between distinct eigenvalues average out, leaving the squared
    projection of |k> onto each eigenspace, evaluated at every node.
    """
    k = _check_start(decomp.order, start_node)
    q = decomp.eigenvectors
    values = np.zeros(decomp.order)
    for cluster in decomp.clusters(degeneracy_tol):
        block = q[:, cluster]
        values += (block @ block[k]) ** 2
    return LimitingDistribution(k, clamp_probability(values))


def limiting_distribution_by_average(
    spec: LatticeSpec, start_node: int, T: float, n_samples: int = 100_000
) -> LimitingDistribution:
    """Trapezoidal time average of pi_jk over [0, T] on a uniform grid."""
    k = _check_start(spec, start_node)
    if T < 100 * spec.n_nodes:
        raise AnalysisError(f"averaging window T={T} shorter than 100*N={100 * spec.n_nodes}")
    if n_samples < 10_000:
        raise AnalysisError(f"need at least 10^4 samples, got {n_samples}")
    decomp = lattice_decomposition(spec)
    times = np.linspace(0.0, T, n_samples)
    weights = np.full(n_samples, T / (n_samples - 1))
    weights[[0, -1]] *= 0.5
    acc = np.zeros(spec.n_nodes)
    for chunk in np.array_split(np.arange(n_samples), max(1, n_samples // 5000)):
        probs = transition_probability(quantum_propagator(decomp, spec.gamma, times[chunk], k))
        acc += weights[chunk] @ probs
    return LimitingDistribution(k, clamp_probability(acc / T))


# -- revivals -----------------------------------------------------------------


def revival_times(n: int, r: int = 1) -> np.ndarray:
    """Per-mode revival times r*pi / (1 - cos(2 pi m / N)) for modes m = 1..N-1.

    The zero mode m = N never dephases and has no finite revival time, so it
    is left out.
    """
    if n < 3:
        raise AnalysisError(f"revival times need N >= 3, got {n}")
    if int(r) != r or r < 1:
        raise AnalysisError(f"r must be a positive integer, got {r}")
    m = np.arange(1, n)
    return r * np.pi / (1.0 - np.cos(2.0 * np.pi * m / n))


def universal_revival_time(n: int) -> float:
    return n * n / (2.0 * np.pi)


def return_probability(spec: LatticeSpec, start_node: int, times) -> np.ndarray:
    k = _check_start(spec, start_node)
    decomp = lattice_decomposition(spec)
    amps = quantum_propagator(decomp, spec.gamma, times, k)
    return transition_probability(amps[..., k])


def _golden_max(f, lo: float, hi: float, tol: float) -> float:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return (a + b) / 2.0


def first_revival_search(spec: LatticeSpec, window: TimeGrid, start_node: int = 0) -> RevivalReport:
    """Locate the largest return probability inside `window`.

    The window is scanned at spacing <= 0.05 (or the grid's own, if finer) and
    the best sample is refined by golden-section search to +-1e-3.
    """
    n = spec.n_nodes
    if window.t_start < n / 2:
        raise AnalysisError(
            f"window starts at {window.t_start}, before the wave can return (t = N/2 = {n / 2})"
        )
    k = _check_start(spec, start_node)
    span = window.t_end - window.t_start
    samples = max(int(window.n_samples), int(math.ceil(span / REVIVAL_SAMPLE_SPACING)) + 1)
    times = np.linspace(window.t_start, window.t_end, samples)
    probs = return_probability(spec, k, times)
    best = int(np.argmax(probs))
    step = times[1] - times[0]
    lo = max(window.t_start, times[best] - step)
    hi = min(window.t_end, times[best] + step)

    def f(t):
        return float(return_probability(spec, k, float(t)))

    t_star = _golden_max(f, lo, hi, REVIVAL_REFINE_TOL)
    p_star = f(t_star)
    if p_star < probs[best]:
        t_star, p_star = float(times[best]), float(probs[best])
    return RevivalReport(
        mode_times=revival_times(n) if n >= 3 else np.empty(0),
        tau0=universal_revival_time(n),
        detected_first_revival=t_star,
        detected_peak_probability=p_star,
    )


# -- carpets ------------------------------------------------------------------


def generate_carpet(
    spec: LatticeSpec, start_node: int, times: TimeGrid, method: Method | str = Method.SPECTRAL
) -> ProbabilityCarpet:
    """Quantum transition probabilities from `start_node` to every node over `times`."""
    method = Method(method)
    k = _check_start(spec, start_node)
    t = times.times
    if method is Method.BLOCH:
        if not spec.periodic:
            raise AnalysisError("the Bloch method requires a periodic lattice")
        amps = bloch_propagator(spec.n_nodes, spec.gamma, t, k)
    else:
        amps = quantum_propagator(lattice_decomposition(spec), spec.gamma, t, k)
    return ProbabilityCarpet(spec, k, times, transition_probability(amps))


def classical_carpet(spec: LatticeSpec, start_node: int, times: TimeGrid) -> ProbabilityCarpet:
    """Classical random-walk probabilities from `start_node` over `times`."""
    k = _check_start(spec, start_node)
    values = classical_propagator(lattice_decomposition(spec), spec.gamma, times.times, k)
    return ProbabilityCarpet(spec, k, times, values)
