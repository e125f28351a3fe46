import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from ctqw.errors import NonConvergenceError
from ctqw.lattice import LatticeSpec, build_adjacency
from ctqw.spectral import circulant_spectrum, eigendecompose_symmetric, lattice_decomposition


def _check_invariants(a, d, tol):
    assert np.all(np.diff(d.eigenvalues) >= 0)
    assert d.orthonormality_error() < tol * 100
    assert d.residual(a) < tol * 100


def test_two_by_two():
    d = eigendecompose_symmetric(build_adjacency(LatticeSpec(2, "reflecting")))
    np.testing.assert_allclose(d.eigenvalues, [0.0, 2.0], atol=1e-15)
    s = 1 / np.sqrt(2)
    # sign convention: largest component positive (first one on ties)
    np.testing.assert_allclose(d.eigenvectors, [[s, s], [s, -s]], atol=1e-15)


def test_n4_periodic_matches_characteristic_polynomial():
    a = build_adjacency(LatticeSpec(4))
    lam = sympy.symbols("lam")
    roots = sympy.roots(sympy.Matrix(a.tolist()).charpoly(lam).as_expr(), lam)
    expected = sorted(float(r) for r, mult in roots.items() for _ in range(mult))
    assert expected == [0.0, 2.0, 2.0, 4.0]
    d = eigendecompose_symmetric(a)
    np.testing.assert_allclose(d.eigenvalues, expected, atol=1e-12)


@pytest.mark.parametrize("n", [3, 4, 21, 64])
@pytest.mark.parametrize("boundary", ["periodic", "reflecting"])
def test_lattice_invariants(n, boundary):
    a = build_adjacency(LatticeSpec(n, boundary))
    d = eigendecompose_symmetric(a)
    assert d.residual(a) < 1e-12
    assert d.orthonormality_error() < 1e-12
    assert d.eigenvalues.min() >= -1e-12
    assert abs(d.eigenvalues[0]) < 1e-12
    uniform = np.full(n, 1 / np.sqrt(n))
    # uniform vector lies in the kernel eigenspace
    zero = d.clusters()[0]
    proj = d.eigenvectors[:, zero] @ (d.eigenvectors[:, zero].T @ uniform)
    np.testing.assert_allclose(proj, uniform, atol=1e-12)


def test_n21_residual_below_1e10():
    a = build_adjacency(LatticeSpec(21))
    assert eigendecompose_symmetric(a).residual(a) < 1e-10


def test_deterministic_and_sign_convention():
    a = build_adjacency(LatticeSpec(20))
    d1, d2 = eigendecompose_symmetric(a), eigendecompose_symmetric(a)
    assert np.array_equal(d1.eigenvectors, d2.eigenvectors)
    assert np.array_equal(d1.eigenvalues, d2.eigenvalues)
    q = d1.eigenvectors
    lead = q[np.argmax(np.abs(q), axis=0), np.arange(q.shape[1])]
    assert np.all(lead > 0)


def test_degenerate_clusters_are_orthonormal():
    d = lattice_decomposition(LatticeSpec(20))
    sizes = [c.stop - c.start for c in d.clusters()]
    assert sizes == [1] + [2] * 9 + [1]
    for c in d.clusters():
        block = d.eigenvectors[:, c]
        np.testing.assert_allclose(block.T @ block, np.eye(block.shape[1]), atol=1e-13)


def test_nonconvergence_reports_residual():
    a = build_adjacency(LatticeSpec(30)).astype(float)
    with pytest.raises(NonConvergenceError) as info:
        eigendecompose_symmetric(a, max_sweeps=1)
    assert info.value.residual > 1e-12


@pytest.mark.parametrize("bad", [1e-16, 1e-3])
def test_tolerance_range(bad):
    with pytest.raises(ValueError):
        eigendecompose_symmetric(np.eye(3), tol=bad)


def test_rejects_asymmetric():
    with pytest.raises(ValueError):
        eigendecompose_symmetric(np.array([[1.0, 2.0], [0.0, 1.0]]))


@settings(max_examples=60, deadline=None)
@given(
    arrays(np.float64, (6, 6), elements=st.floats(-10, 10, allow_nan=False)),
)
def test_random_symmetric_matrices(m):
    a = (m + m.T) / 2
    d = eigendecompose_symmetric(a)
    scale = max(1.0, np.abs(a).max())
    assert d.orthonormality_error() < 1e-12
    assert d.residual(a) < 1e-12 * scale * 10
    np.testing.assert_allclose(d.eigenvalues, np.linalg.eigvalsh(a), atol=1e-11 * scale)


def test_circulant_spectrum_examples():
    np.testing.assert_allclose(circulant_spectrum(4), [2, 4, 2, 0], atol=1e-15)
    assert circulant_spectrum(6)[2] == pytest.approx(4.0)
    for n in (3, 7, 50):
        assert abs(circulant_spectrum(n)[-1]) < 1e-15
    with pytest.raises(ValueError):
        circulant_spectrum(2)


@pytest.mark.parametrize("n", range(3, 65))
def test_circulant_matches_jacobi(n):
    jac = lattice_decomposition(LatticeSpec(n)).eigenvalues
    np.testing.assert_allclose(np.sort(circulant_spectrum(n)), jac, atol=1e-10)


@pytest.mark.parametrize("n", [5, 8, 21, 40])
def test_periodic_multiplicities(n):
    lam = circulant_spectrum(n)
    d = lattice_decomposition(LatticeSpec(n))
    sizes = {round(float(d.eigenvalues[c][0]), 9): c.stop - c.start for c in d.clusters()}
    for value, size in sizes.items():
        if abs(value) < 1e-9 or (n % 2 == 0 and abs(value - 4) < 1e-9):
            assert size == 1
        else:
            assert size == 2
    assert len(sizes) == len(np.unique(np.round(lam, 9)))


def test_small_angle_quadratic_law():
    n = 200
    lam = circulant_spectrum(n)
    for m in range(1, n):
        theta = 2 * np.pi * m / n
        if theta > 0.3:
            break
        assert lam[m - 1] == pytest.approx(theta**2, rel=0.05)
