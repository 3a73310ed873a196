import numpy as np
import pytest

from metriq.biorth import diagonalize, make_system
from metriq.errors import NotHermitian
from metriq.metric import make_metric
from metriq.transform import build_table, change_representation, hermitian_basis, roundtrip_residual

from conftest import HAND_A, HAND_ETA, constructed_system, random_hermitian

SX = np.array([[0.0, 1.0], [1.0, 0.0]])


def _table(A, eta, B):
    m = make_metric(eta)
    return build_table(hermitian_basis(B), diagonalize(make_system(A, m)), m), m


def test_hand_table():
    t, _ = _table(HAND_A, HAND_ETA, SX)
    # derived: W = [(1,-1), (1,1)]/sqrt2, v = normalized (1,0), (1,1)
    r = 1 / np.sqrt(2)
    assert np.allclose(t.factors_eta, [[np.sqrt(2), -r], [0.0, r]], atol=1e-12)
    assert t.conjugation_residual() <= 1e-12
    assert roundtrip_residual(t) <= 1e-10
    assert np.allclose(t.b_eigenvalues, [-1.0, 1.0])


def test_change_representation_round_trip(rng):
    A, eta, _ = constructed_system(rng, 5)
    B = random_hermitian(rng, 5)
    t, m = _table(A, eta, B)
    bb = diagonalize(make_system(A, m))
    W = hermitian_basis(B).kets
    phi = rng.normal(size=5) + 1j * rng.normal(size=5)
    c = bb.h_kets.conj().T @ phi
    b = change_representation(t, c, "lambda_to_omega")
    assert np.allclose(b, W.conj().T @ phi, atol=1e-10)
    assert np.allclose(change_representation(t, b, "omega_to_lambda"), c, atol=1e-10)
    with pytest.raises(ValueError):
        change_representation(t, c, "sideways")


def test_factors_against_counterpart(rng):
    # B = rho A rho^-1 shares eigenvectors W with the similarity, so v = rho^-1 W
    A, eta, _ = constructed_system(rng, 4)
    m = make_metric(eta)
    bb = diagonalize(make_system(A, m))
    t = build_table(hermitian_basis(bb.hermitian_counterpart), bb, m)
    W = m.rho @ bb.h_kets
    assert np.allclose(t.factors_eta, W.conj().T @ m.rho @ W, atol=1e-10)
    assert np.allclose(t.factors_h, W.conj().T @ m.rho_inv @ W, atol=1e-10)
    assert roundtrip_residual(t) < 1e-10


def test_reference_must_be_hermitian():
    with pytest.raises(NotHermitian):
        hermitian_basis(HAND_A)
