"""Positive-definite metric operators and the eta inner product.

Kets are plain coordinate vectors; a bra is the conjugate transpose of a ket,
so no separate bra type exists. The "eta ket" of a vector ``v`` is ``eta v``.
"""

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import DimensionMismatch, NotHermitian
from .numkernel import (
    HERMITIAN_TOL,
    as_matrix,
    as_vector,
    dagger,
    fro,
    hermiticity_residual,
    pd_sqrt_pair,
)


@dataclass(frozen=True)
class MetricOperator:
    """Hermitian positive-definite ``eta`` with ``rho = eta**0.5`` and the inverses."""

    eta: np.ndarray
    rho: np.ndarray
    rho_inv: np.ndarray
    eta_inv: np.ndarray

    @property
    def dim(self):
        return self.eta.shape[0]

    def check_invariants(self, tol=1e-10):
        """Return the worst relative invariant residual; raises nothing."""
        eye = np.eye(self.dim)
        scale = max(fro(self.eta), 1.0)
        return max(
            fro(self.rho @ self.rho - self.eta) / scale,
            fro(self.rho @ self.rho_inv - eye),
            fro(self.eta_inv - self.rho_inv @ self.rho_inv) / max(fro(self.eta_inv), 1.0),
        )


@dataclass(frozen=True)
class KetPair:
    h_ket: np.ndarray
    eta_ket: np.ndarray


def make_metric(eta):
    """Validate ``eta`` and precompute ``rho``, ``rho^{-1}`` and ``eta^{-1}``."""
    E = as_matrix(eta)
    if hermiticity_residual(E) > HERMITIAN_TOL:
        raise NotHermitian("metric must be Hermitian")
    E = 0.5 * (E + dagger(E))
    rho, rho_inv = pd_sqrt_pair(E)
    eta_inv = rho_inv @ rho_inv
    eta_inv = 0.5 * (eta_inv + dagger(eta_inv))
    for arr in (E, rho, rho_inv, eta_inv):
        arr.setflags(write=False)
    return MetricOperator(E, rho, rho_inv, eta_inv)


def identity_metric(dim):
    return make_metric(np.eye(dim))


def _check_vec(m, v):
    return as_vector(v, m.dim)


def _check_op(m, A):
    A = as_matrix(A)
    if A.shape[0] != m.dim:
        raise DimensionMismatch(f"operator is {A.shape[0]}x{A.shape[0]}, metric is {m.dim}")
    return A


def eta_inner(m, phi, psi):
    """``<phi, psi>_eta = phi^H eta psi``."""
    phi, psi = _check_vec(m, phi), _check_vec(m, psi)
    return complex(np.vdot(phi, m.eta @ psi))


def apply_metric(m, k, direction: Literal["forward", "inverse"] = "forward"):
    """Map an H-ket to its eta-ket (``forward``) or back (``inverse``)."""
    k = _check_vec(m, k)
    if direction == "forward":
        return m.eta @ k
    if direction == "inverse":
        return m.eta_inv @ k
    raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")


def ket_pair(m, v):
    v = _check_vec(m, v)
    return KetPair(v, m.eta @ v)


def eta_adjoint(m, A):
    """The eta-adjoint ``eta^{-1} A^H eta``; equals ``A`` when A is eta-quasi-Hermitian."""
    A = _check_op(m, A)
    return m.eta_inv @ dagger(A) @ m.eta


def quasi_hermiticity_residual(m, A):
    """Relative residual ``|A^H eta - eta A|_F / (|A|_F |eta|_F)`` of the intertwining relation."""
    A = _check_op(m, A)
    denom = fro(A) * fro(m.eta)
    if denom == 0.0:
        return 0.0
    return fro(dagger(A) @ m.eta - m.eta @ A) / denom
