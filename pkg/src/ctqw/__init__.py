"""Continuous-time quantum and classical walks on one-dimensional lattices."""

from .analysis import (
    LimitingDistribution,
    Method,
    ProbabilityCarpet,
    RevivalReport,
    classical_carpet,
    first_revival_search,
    generate_carpet,
    limiting_distribution,
    limiting_distribution_by_average,
    revival_times,
)
from .dynamics import (
    TimeGrid,
    classical_probability,
    pi_closed_form_n3,
    pi_closed_form_n4,
    quantum_amplitude_bloch,
    quantum_amplitude_infinite,
    quantum_amplitude_spectral,
    transition_probability,
)
from .errors import CTQWError
from .lattice import Boundary, LatticeSpec, build_adjacency, hamiltonian, transfer_matrix
from .spectral import SpectralDecomposition, circulant_spectrum, eigendecompose_symmetric, lattice_decomposition
from .specialfn import bessel_j

__version__ = "0.1.0"
