import sys
import numpy as np
import pytest


def random_unitary(rng, n):
    Z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def random_hermitian(rng, n, spectrum=None):
    if spectrum is None:
        spectrum = np.sort(rng.uniform(-3.0, 3.0, n))
    Q = random_unitary(rng, n)
    H = (Q * spectrum) @ Q.conj().T
    return 0.5 * (H + H.conj().T)


def constructed_system(rng, n, distinct=True):
    """Return (A, eta, h) with A = rho^-1 h rho, eta = rho^2, rho > 0 Hermitian."""
    if distinct:
        lam = np.sort(rng.uniform(-3.0, 3.0, n))
        while n > 1 and np.min(np.diff(lam)) < 0.05:
            lam = np.sort(rng.uniform(-3.0, 3.0, n))
    else:
        lam = None
    h = random_hermitian(rng, n, lam)
    rho = random_hermitian(rng, n, rng.uniform(0.5, 2.0, n))
    A = np.linalg.solve(rho, h @ rho)
    return A, rho @ rho, h


HAND_A = np.array([[1.0, 1.0], [0.0, 2.0]])
HAND_ETA = np.array([[1.0, -1.0], [-1.0, 2.0]])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
