import numpy as np
import pytest

from metriq.biorth import (
    apply_spectral,
    completeness_residual,
    diagonalize,
    expand_coefficients,
    make_system,
    observable_from_hermitian,
    reconstruct,
)
from metriq.errors import DimensionMismatch, NotQuasiHermitian
from metriq.metric import make_metric

from conftest import HAND_A, HAND_ETA, constructed_system, random_hermitian


def test_hand_example():
    b = diagonalize(make_system(HAND_A, HAND_ETA))
    assert np.allclose(b.eigenvalues, [1.0, 2.0])
    # columns are the right eigenvectors up to the eta normalization
    V = b.h_kets / b.h_kets[0]
    assert np.allclose(V, [[1.0, 1.0], [0.0, 1.0]])
    W = b.eta_kets / b.h_kets[0]
    assert np.allclose(W, [[1.0, 0.0], [-1.0, 1.0]])
    phi = np.array([0.0, 1.0])
    c = expand_coefficients(b, phi) * b.h_kets[0]
    assert np.allclose(c, [-1.0, 1.0])
    assert np.allclose(apply_spectral(b, phi, "A"), [1.0, 2.0])
    assert np.allclose(apply_spectral(b, phi, "A_dagger"), [0.0, 2.0])


def test_identities(rng):
    for n in (1, 3, 8, 16):
        A, eta, h = constructed_system(rng, n)
        b = diagonalize(make_system(A, eta))
        assert np.allclose(b.eigenvalues, np.linalg.eigvalsh(h), atol=1e-10)
        assert b.biorthogonality_residual() < 1e-10
        assert completeness_residual(b) < 1e-10
        phi = rng.normal(size=n) + 1j * rng.normal(size=n)
        assert np.allclose(reconstruct(b, expand_coefficients(b, phi)), phi, atol=1e-10)
        assert np.allclose(b.operator("A"), A, atol=1e-10)
        assert np.allclose(b.operator("A_dagger"), A.conj().T, atol=1e-10)


def test_degenerate_spectrum(rng):
    h = random_hermitian(rng, 4, [1.0, 1.0, 2.0, 2.0])
    rho = random_hermitian(rng, 4, [0.7, 1.0, 1.3, 1.9])
    A = np.linalg.solve(rho, h @ rho)
    b = diagonalize(make_system(A, rho @ rho))
    assert b.biorthogonality_residual() < 1e-10
    assert completeness_residual(b) < 1e-10


def test_observable_mapping(rng):
    A, eta, _ = constructed_system(rng, 4)
    m = make_metric(eta)
    o = random_hermitian(rng, 4)
    O = observable_from_hermitian(m, o)
    assert np.allclose(O.conj().T @ m.eta, m.eta @ O, atol=1e-10)


def test_adjoint_matrix_elements(rng):
    A, eta, _ = constructed_system(rng, 5)
    m = make_metric(eta)
    for _ in range(5):
        phi = rng.normal(size=5) + 1j * rng.normal(size=5)
        psi = rng.normal(size=5) + 1j * rng.normal(size=5)
        lhs = np.vdot(phi, A.conj().T @ psi)
        rhs = np.vdot(phi, m.eta @ A @ m.eta_inv @ psi)
        assert abs(lhs - rhs) <= 1e-10 * abs(lhs)


def test_eta_kets_left_eigenvectors(rng):
    A, eta, _ = constructed_system(rng, 6)
    b = diagonalize(make_system(A, eta))
    W = b.eta_kets.conj().T
    assert np.allclose(W @ A, b.eigenvalues[:, None] * W, atol=1e-10)
    assert np.max(np.abs(np.imag(b.eigenvalues))) <= 1e-10


def test_rejections():
    with pytest.raises(NotQuasiHermitian):
        make_system(HAND_A, np.eye(2))
    with pytest.raises(DimensionMismatch):
        make_system(HAND_A, np.eye(3))
    b = diagonalize(make_system(HAND_A, HAND_ETA))
    with pytest.raises(ValueError):
        apply_spectral(b, [1.0, 0.0], "B")
