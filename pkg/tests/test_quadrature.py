import math

import numpy as np
import pytest
from numpy.polynomial.hermite import hermgauss

from metriq.errors import DegreeOutOfRange, SizeOutOfRange
from metriq.quadrature import gauss_hermite, hermite_function, hermite_functions, hermite_polynomial, integrate


@pytest.mark.parametrize("n", [1, 2, 5, 20, 64, 150])
def test_rule_matches_numpy(n):
    g = gauss_hermite(n)
    x, w = hermgauss(n)
    assert np.allclose(g.nodes, x, rtol=0, atol=1e-12)
    assert np.allclose(g.weights, w, rtol=1e-10, atol=1e-300)
    assert np.allclose(g.scaled_weights, w * np.exp(x * x), rtol=1e-10)


def test_moments_exact():
    g = gauss_hermite(8)
    # int t^{2k} e^{-t^2} = Gamma(k + 1/2)
    for k in range(8):
        val = integrate(g, lambda t: t ** (2 * k) * np.exp(-t * t))
        assert val.real == pytest.approx(math.gamma(k + 0.5), rel=1e-13)


def test_scaled_integration():
    g = gauss_hermite(40)
    val = integrate(g, lambda x: np.exp(-(x * x) / 8.0), scale=2.0)
    assert val.real == pytest.approx(math.sqrt(8.0 * math.pi), rel=1e-13)


def test_large_rule_weights_finite():
    g = gauss_hermite(512)
    assert np.all(np.isfinite(g.scaled_weights)) and np.all(g.scaled_weights > 0)
    assert g.weights.sum() == pytest.approx(math.sqrt(math.pi), rel=1e-12)


def test_hermite_values():
    assert hermite_polynomial(3, 1.0) == -4.0
    assert hermite_polynomial(0, 2.5) == 1.0
    assert hermite_function(0, 0.0, 1.0) == pytest.approx(0.7511255444649425, rel=1e-15)


def test_hermite_functions_orthonormal():
    g = gauss_hermite(120)
    L = 0.7
    x = L * g.nodes
    u = hermite_functions(60, x, L)
    G = (u * g.scaled_weights * L) @ u.T
    assert np.max(np.abs(G - np.eye(61))) < 1e-12


def test_orthonormal_20_on_128():
    g = gauss_hermite(128)
    u = hermite_functions(20, g.nodes)
    G = (u * g.scaled_weights) @ u.T
    assert np.max(np.abs(G - np.eye(21))) <= 1e-10


def test_errors():
    for n in (0, 513):
        with pytest.raises(SizeOutOfRange):
            gauss_hermite(n)
    with pytest.raises(DegreeOutOfRange):
        hermite_function(201, 0.0)
    with pytest.raises(DegreeOutOfRange):
        hermite_polynomial(-1, 0.0)
