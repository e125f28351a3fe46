"""One-dimensional lattices: adjacency (discrete Laplacian), Hamiltonian and
transfer matrices for periodic or reflecting boundaries.

Node indices are 0-based throughout the library.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import LatticeError


class Boundary(str, enum.Enum):
    PERIODIC = "periodic"
    REFLECTING = "reflecting"


@dataclass(frozen=True)
class LatticeSpec:
    n_nodes: int
    boundary: Boundary = Boundary.PERIODIC
    gamma: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "boundary", Boundary(self.boundary))
        if int(self.n_nodes) != self.n_nodes or self.n_nodes < 2:
            raise LatticeError(f"n_nodes must be an integer >= 2, got {self.n_nodes}")
        if not np.isfinite(self.gamma) or self.gamma <= 0:
            raise LatticeError(f"gamma must be positive, got {self.gamma}")
        if self.n_nodes == 2 and self.boundary is Boundary.PERIODIC:
            raise LatticeError(
                "a periodic lattice of 2 nodes would need a double bond; "
                "use the reflecting boundary instead"
            )

    @property
    def periodic(self) -> bool:
        return self.boundary is Boundary.PERIODIC

    def check_node(self, node: int) -> int:
        if not 0 <= node < self.n_nodes:
            raise LatticeError(f"node index {node} outside 0..{self.n_nodes - 1}")
        return int(node)


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def build_adjacency(spec: LatticeSpec) -> np.ndarray:
    """Integer adjacency matrix: degree on the diagonal, -1 per bond.

    The periodic lattice is circulant; the reflecting one is tridiagonal with
    degree 1 at both ends.
    """
    n = spec.n_nodes
    a = np.zeros((n, n), dtype=np.int64)
    idx = np.arange(n - 1)
    a[idx, idx + 1] = -1
    a[idx + 1, idx] = -1
    if spec.periodic:
        a[0, n - 1] = a[n - 1, 0] = -1
    a[np.diag_indices(n)] = -a.sum(axis=1)
    return _frozen(a)


def hamiltonian(spec: LatticeSpec) -> np.ndarray:
    return _frozen(spec.gamma * build_adjacency(spec).astype(float))


def transfer_matrix(spec: LatticeSpec) -> np.ndarray:
    """Generator of the classical master equation, T = -H."""
    return _frozen(-hamiltonian(spec))
