"""Bi-orthogonal eigensystems of quasi-Hermitian operators.

A is diagonalized only through its Hermitian counterpart ``h = rho A rho^-1``:
with orthonormal eigenvectors ``w_n`` of h the right eigenvectors of A are
``v_n = rho^-1 w_n`` and their eta-kets are ``eta v_n = rho w_n``. The two
families satisfy

    (eta v_m)^H v_n = delta_mn,       sum_n v_n (eta v_n)^H = I,

and A, A^H expand as ``sum_n lam_n v_n (eta v_n)^H`` and
``sum_n lam_n (eta v_n) v_n^H``.
"""

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import DimensionMismatch, NotHermitian, NotQuasiHermitian, SimilarityNotHermitian
from .metric import MetricOperator, make_metric, quasi_hermiticity_residual
from .numkernel import (
    HERMITIAN_TOL,
    as_matrix,
    as_vector,
    dagger,
    fro,
    hermitian_eigen,
    hermiticity_residual,
)

SYSTEM_TOL = 1e-9


@dataclass(frozen=True)
class QuasiHermitianSystem:
    A: np.ndarray
    metric: MetricOperator
    residual: float

    @property
    def dim(self):
        return self.A.shape[0]


@dataclass(frozen=True)
class BiorthogonalBasis:
    eigenvalues: np.ndarray
    h_kets: np.ndarray
    eta_kets: np.ndarray
    hermitian_counterpart: np.ndarray

    @property
    def dim(self):
        return self.eigenvalues.size

    def biorthogonality_residual(self):
        """``|(eta V)^H V - I|_F``."""
        return fro(dagger(self.eta_kets) @ self.h_kets - np.eye(self.dim))

    def operator(self, which="A"):
        """Rebuild A (or A^H) from its spectral resolution."""
        V, W, lam = self.h_kets, self.eta_kets, self.eigenvalues
        if which == "A":
            return (V * lam) @ dagger(W)
        if which == "A_dagger":
            return (W * lam) @ dagger(V)
        raise ValueError(f"which must be 'A' or 'A_dagger', got {which!r}")


def make_system(A, metric, tol=SYSTEM_TOL):
    """Pair ``A`` with a metric (a MetricOperator or a raw eta matrix)."""
    A = as_matrix(A)
    if not isinstance(metric, MetricOperator):
        metric = make_metric(metric)
    if A.shape[0] != metric.dim:
        raise DimensionMismatch(f"operator is {A.shape[0]}-dimensional, metric is {metric.dim}")
    res = quasi_hermiticity_residual(metric, A)
    if res > tol:
        raise NotQuasiHermitian(f"A^H eta - eta A relative residual {res:.3e} exceeds {tol:g}")
    A.setflags(write=False)
    return QuasiHermitianSystem(A, metric, res)


def diagonalize(sys, tol=SYSTEM_TOL):
    """Build the complete bi-orthogonal system of ``sys`` via ``h = rho A rho^-1``."""
    m = sys.metric
    h = m.rho @ sys.A @ m.rho_inv
    res = hermiticity_residual(h)
    if res > tol:
        raise SimilarityNotHermitian(f"rho A rho^-1 is not Hermitian (residual {res:.3e})")
    h = 0.5 * (h + dagger(h))
    lam, Wv = hermitian_eigen(h)
    V = m.rho_inv @ Wv
    etaV = m.rho @ Wv
    return BiorthogonalBasis(lam, V, etaV, h)


def _vec(basis, phi):
    return as_vector(phi, basis.dim)


def expand_coefficients(basis, phi):
    """Coefficients ``c_n = (eta v_n)^H phi`` of phi in the right eigenvectors."""
    return dagger(basis.eta_kets) @ _vec(basis, phi)


def reconstruct(basis, coeffs):
    return basis.h_kets @ _vec(basis, coeffs)


def apply_spectral(basis, phi, which: Literal["A", "A_dagger"] = "A"):
    """Apply A or A^H to ``phi`` through the spectral expansion alone."""
    phi = _vec(basis, phi)
    lam = basis.eigenvalues
    if which == "A":
        return basis.h_kets @ (lam * (dagger(basis.eta_kets) @ phi))
    if which == "A_dagger":
        return basis.eta_kets @ (lam * (dagger(basis.h_kets) @ phi))
    raise ValueError(f"which must be 'A' or 'A_dagger', got {which!r}")


def observable_from_hermitian(m, o):
    """Map a Hermitian observable of the counterpart system to ``rho^-1 o rho``."""
    o = as_matrix(o)
    if o.shape[0] != m.dim:
        raise DimensionMismatch(f"observable is {o.shape[0]}-dimensional, metric is {m.dim}")
    if hermiticity_residual(o) > HERMITIAN_TOL:
        raise NotHermitian("observable must be Hermitian")
    return m.rho_inv @ o @ m.rho


def completeness_residual(basis):
    """Worst of ``|sum v_n (eta v_n)^H - I|_F`` and ``|sum (eta v_n) v_n^H - I|_F``."""
    V, W = basis.h_kets, basis.eta_kets
    eye = np.eye(V.shape[0])
    return max(fro(V @ dagger(W) - eye), fro(W @ dagger(V) - eye))
