import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from metriq.errors import DimensionMismatch, NotHermitian, NotPositiveDefinite
from metriq.metric import (
    apply_metric,
    eta_adjoint,
    eta_inner,
    identity_metric,
    ket_pair,
    make_metric,
    quasi_hermiticity_residual,
)

from conftest import HAND_A, HAND_ETA, constructed_system, random_hermitian


def test_hand_pair():
    m = make_metric(HAND_ETA)
    assert quasi_hermiticity_residual(m, HAND_A) == 0.0
    assert np.allclose(eta_adjoint(m, HAND_A), HAND_A)
    assert m.check_invariants() < 1e-14


def test_inner_product(rng):
    m = make_metric(random_hermitian(rng, 4, [0.5, 1, 2, 3]))
    a = rng.normal(size=4) + 1j * rng.normal(size=4)
    b = rng.normal(size=4) + 1j * rng.normal(size=4)
    assert np.isclose(eta_inner(m, a, b), np.conj(eta_inner(m, b, a)))
    assert eta_inner(m, a, a).real > 0


def test_apply_and_ket_pair(rng):
    m = make_metric(HAND_ETA)
    v = np.array([1.0, 2.0])
    assert np.allclose(apply_metric(m, apply_metric(m, v), "inverse"), v)
    p = ket_pair(m, v)
    assert np.allclose(p.eta_ket, HAND_ETA @ v)
    with pytest.raises(ValueError):
        apply_metric(m, v, "sideways")


def test_read_only():
    m = make_metric(HAND_ETA)
    with pytest.raises(ValueError):
        m.eta[0, 0] = 3.0


def test_rejections():
    with pytest.raises(NotHermitian):
        make_metric([[1.0, 2.0], [0.0, 1.0]])
    with pytest.raises(NotPositiveDefinite):
        make_metric([[1.0, 0.0], [0.0, -1.0]])
    with pytest.raises(DimensionMismatch):
        eta_inner(identity_metric(2), [1, 0, 0], [1, 0])


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_property_constructed_quasi_hermitian(n, seed):
    A, eta, _ = constructed_system(np.random.default_rng(seed), n)
    m = make_metric(eta)
    assert quasi_hermiticity_residual(m, A) < 1e-10
    assert np.allclose(eta_adjoint(m, eta_adjoint(m, A)), A, atol=1e-9)
