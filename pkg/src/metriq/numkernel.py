"""Dense complex linear-algebra kernels.

Everything downstream (metric factors, bi-orthogonal bases, Gauss-Hermite
nodes) goes through the single Hermitian eigensolver defined here: a cyclic
Jacobi method on the complex Hermitian matrix, with the rotations of each
sweep scheduled in round-robin order so that every step applies a set of
disjoint rotations at once.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DimensionMismatch, NoConvergence, NotHermitian, NotPositiveDefinite

HERMITIAN_TOL = 1e-12
JACOBI_TOL = 1e-13
MAX_SWEEPS = 64
PD_RATIO = 1e-12
PHASE_CUTOFF = 1e-8


def as_matrix(M, square=True):
    """Return ``M`` as a finite complex128 2-D array (a copy)."""
    A = np.array(M, dtype=np.complex128)
    if A.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D matrix, got shape {A.shape}")
    if square and A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix contains NaN or Inf entries")
    return A


def as_vector(v, dim=None):
    x = np.array(v, dtype=np.complex128)
    if x.ndim != 1:
        raise DimensionMismatch(f"expected a 1-D vector, got shape {x.shape}")
    if dim is not None and x.shape[0] != dim:
        raise DimensionMismatch(f"vector has length {x.shape[0]}, expected {dim}")
    return x


def fro(M):
    return float(np.linalg.norm(M))


def dagger(M):
    return np.conj(np.transpose(M))


def hermiticity_residual(M):
    """Relative Frobenius distance ``|M - M^H| / |M|`` (0 for the zero matrix)."""
    scale = fro(M)
    if scale == 0.0:
        return 0.0
    return fro(M - dagger(M)) / scale


@dataclass(frozen=True)
class EigenDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __iter__(self):
        yield self.eigenvalues
        yield self.eigenvectors

    def reconstruct(self):
        V = self.eigenvectors
        return (V * self.eigenvalues) @ dagger(V)


@lru_cache(maxsize=64)
def _round_robin(n):
    # circle-method tournament: n-1 (or n) rounds of disjoint pairs covering
    # every (p, q) exactly once per sweep
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        P, Q = [], []
        for i in range(m // 2):
            p, q = players[i], players[m - 1 - i]
            if p < n and q < n:
                P.append(min(p, q))
                Q.append(max(p, q))
        if P:
            rounds.append((np.array(P), np.array(Q)))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def _off_norm(A):
    off = A.copy()
    np.fill_diagonal(off, 0.0)
    return fro(off)


def fix_phases(V):
    """Make the first component of magnitude > 1e-8 of each column real-positive."""
    V = V.copy()
    for k in range(V.shape[1]):
        col = V[:, k]
        big = np.nonzero(np.abs(col) > PHASE_CUTOFF)[0]
        if big.size:
            z = col[big[0]]
            V[:, k] = col * (np.conj(z) / abs(z))
    return V


def hermitian_eigen(M, tol=JACOBI_TOL, max_sweeps=MAX_SWEEPS, vectors=True):
    """Full eigendecomposition of a complex Hermitian matrix by Jacobi rotations.

    Parameters
    ----------
    M : array_like
        Square Hermitian matrix, ``|M - M^H|_F <= 1e-12 |M|_F``.
    tol : float
        Sweeps stop once the off-diagonal Frobenius norm is below
        ``tol * |M|_F``.
    max_sweeps : int
        Sweep budget; exceeding it raises :class:`NoConvergence`.
    vectors : bool
        When False the rotations are not accumulated and ``eigenvectors`` is
        None.

    Returns
    -------
    EigenDecomposition
        Ascending real eigenvalues and unit eigenvectors as columns, each with
        its first significant component made real-positive.
    """
    A = as_matrix(M)
    n = A.shape[0]
    if hermiticity_residual(A) > HERMITIAN_TOL:
        raise NotHermitian(
            f"matrix is not Hermitian (relative residual {hermiticity_residual(A):.3e})"
        )
    scale = fro(A)
    if n == 0 or scale == 0.0:
        return EigenDecomposition(np.zeros(n), np.eye(n, dtype=np.complex128))
    A = 0.5 * (A + dagger(A))
    # real symmetric input runs in real arithmetic; the rotations stay real
    if not np.any(A.imag):
        A = A.real.copy()
    Vt = np.eye(n, dtype=A.dtype)
    rounds = _round_robin(n)

    for sweep in range(max_sweeps + 1):
        if _off_norm(A) <= tol * scale:
            break
        if sweep == max_sweeps:
            raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")
        for P, Q in rounds:
            apq = A[P, Q]
            b = np.abs(apq)
            active = b > 0.0
            if not active.any():
                continue
            safe_b = np.where(active, b, 1.0)
            phase = np.where(active, apq / safe_b, 1.0)
            with np.errstate(over="ignore"):
                # a subnormal |a_pq| sends tau to inf and t cleanly to 0
                tau = (A[Q, Q].real - A[P, P].real) / (2.0 * safe_b)
                t = np.where(tau >= 0.0, 1.0, -1.0) / (np.abs(tau) + np.hypot(1.0, tau))
            t = np.where(active, t, 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            ephi = np.conj(phase)

            # A <- G^H A G with G = diag(1, e^{-i phi}) R(c, s). Rows P, Q are
            # mixed by G^H, their P, Q columns by G, and Hermiticity supplies
            # the new columns P, Q. Row gathers keep memory access contiguous.
            Rp, Rq = A[P, :], A[Q, :]
            Np = c[:, None] * Rp - (s * phase)[:, None] * Rq
            Nq = s[:, None] * Rp + (c * phase)[:, None] * Rq
            for R in (Np, Nq):
                cp, cq = R[:, P], R[:, Q]
                R[:, P] = cp * c - cq * (s * ephi)
                R[:, Q] = cp * s + cq * (c * ephi)
            idx = np.arange(P.size)
            Np[idx, Q] = 0.0
            Nq[idx, P] = 0.0
            A[P, :] = Np
            A[Q, :] = Nq
            A[:, P] = np.conj(Np.T)
            A[:, Q] = np.conj(Nq.T)
            if not vectors:
                continue
            # Vt holds the eigenvectors as rows: Vt <- G^T Vt
            Vp, Vq = Vt[P, :], Vt[Q, :]
            Vt[P, :] = c[:, None] * Vp - (s * ephi)[:, None] * Vq
            Vt[Q, :] = s[:, None] * Vp + (c * ephi)[:, None] * Vq

    w = np.diag(A).real.copy()
    order = np.argsort(w, kind="stable")
    if not vectors:
        return EigenDecomposition(w[order], None)
    V = Vt.T[:, order].astype(np.complex128)
    return EigenDecomposition(w[order], fix_phases(V))


def pd_sqrt_pair(M):
    """Return ``(S, S^{-1})`` with ``S`` the Hermitian positive-definite root of ``M``."""
    A = as_matrix(M)
    w, V = hermitian_eigen(A)
    if w.size == 0:
        return A.copy(), A.copy()
    if w[-1] <= 0.0 or w[0] <= PD_RATIO * w[-1]:
        raise NotPositiveDefinite(
            f"smallest eigenvalue {w[0]:.3e} not above {PD_RATIO:g} x largest {w[-1]:.3e}"
        )
    r = np.sqrt(w)
    S = (V * r) @ dagger(V)
    S_inv = (V / r) @ dagger(V)
    S = 0.5 * (S + dagger(S))
    S_inv = 0.5 * (S_inv + dagger(S_inv))

    scale = fro(A)
    eye = np.eye(A.shape[0])
    if fro(S @ S - A) > 1e-10 * scale or fro(S @ S_inv - eye) > 1e-10 * max(scale, 1.0):
        raise NotPositiveDefinite("matrix too ill-conditioned for an accurate square root")
    return S, S_inv


def nullspace_gram(K, threshold):
    """Orthonormal basis of the numerical kernel of ``K`` via the Gram matrix ``K^H K``.

    Eigenvectors of ``K^H K`` whose eigenvalue is at most
    ``threshold**2 * max eigenvalue`` are returned as a list of vectors.
    """
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    K = as_matrix(K, square=False)
    G = dagger(K) @ K
    G = 0.5 * (G + dagger(G))
    w, V = hermitian_eigen(G)
    top = w[-1] if w.size else 0.0
    keep = w <= threshold**2 * top
    return [V[:, k].copy() for k in np.nonzero(keep)[0]]
