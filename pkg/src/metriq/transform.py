"""Change of representation between a Hermitian reference basis and a bi-orthogonal one.

For a Hermitian B with orthonormal eigenvectors ``w_m`` and a bi-orthogonal
basis ``v_n`` the transformation factors are

    factors_eta[m, n] = w_m^H eta v_n,      factors_h[m, n] = w_m^H v_n,

rows ordered by ascending B-eigenvalue, columns by ascending A-eigenvalue.
Coefficient convention: ``lambda_to_omega`` consumes the plain projections
``v_n^H phi`` and returns ``w_m^H phi``; ``omega_to_lambda`` is its inverse.
"""

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import DimensionMismatch, NotHermitian
from .numkernel import HERMITIAN_TOL, as_matrix, as_vector, dagger, fro, hermitian_eigen, hermiticity_residual


@dataclass(frozen=True)
class HermitianBasis:
    eigenvalues: np.ndarray
    kets: np.ndarray

    @property
    def dim(self):
        return self.eigenvalues.size


@dataclass(frozen=True)
class TransformTable:
    factors_eta: np.ndarray
    factors_h: np.ndarray
    b_eigenvalues: np.ndarray
    a_eigenvalues: np.ndarray
    # reverse-direction tables <lambda_n|omega_m>, formed from the bras
    reverse_eta: np.ndarray
    reverse_h: np.ndarray

    def conjugation_residual(self):
        """Largest entrywise gap between the reverse tables and the conjugate transposes."""
        return max(
            float(np.max(np.abs(self.reverse_eta - dagger(self.factors_eta)), initial=0.0)),
            float(np.max(np.abs(self.reverse_h - dagger(self.factors_h)), initial=0.0)),
        )


def hermitian_basis(B):
    B = as_matrix(B)
    if hermiticity_residual(B) > HERMITIAN_TOL:
        raise NotHermitian("reference observable must be Hermitian")
    w, W = hermitian_eigen(B)
    return HermitianBasis(w, W)


def build_table(hb, bb, m):
    """Transformation factors between ``hb`` (Hermitian) and ``bb`` (bi-orthogonal)."""
    if not hb.dim == bb.dim == m.dim:
        raise DimensionMismatch(f"dimensions differ: {hb.dim}, {bb.dim}, {m.dim}")
    W, V = hb.kets, bb.h_kets
    etaV = m.eta @ V
    return TransformTable(
        factors_eta=dagger(W) @ etaV,
        factors_h=dagger(W) @ V,
        b_eigenvalues=hb.eigenvalues.copy(),
        a_eigenvalues=bb.eigenvalues.copy(),
        reverse_eta=dagger(etaV) @ W,
        reverse_h=dagger(V) @ W,
    )


def change_representation(
    t, coeffs, direction: Literal["lambda_to_omega", "omega_to_lambda"] = "lambda_to_omega"
):
    c = as_vector(coeffs, t.factors_eta.shape[1])
    if direction == "lambda_to_omega":
        return t.factors_eta @ c
    if direction == "omega_to_lambda":
        return dagger(t.factors_h) @ c
    raise ValueError(f"unknown direction {direction!r}")


def roundtrip_residual(t):
    """``|factors_h^H factors_eta - I|_F``: the discrete bi-orthogonality contraction."""
    n = t.factors_eta.shape[1]
    return fro(dagger(t.factors_h) @ t.factors_eta - np.eye(n))
