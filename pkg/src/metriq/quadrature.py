"""Gauss-Hermite quadrature and Hermite-function evaluation."""

from dataclasses import dataclass
from functools import lru_cache
from math import pi, sqrt

import numpy as np

from .errors import DegreeOutOfRange, SizeOutOfRange
from .numkernel import hermitian_eigen

MAX_NODES = 512
MAX_DEGREE = 200


@dataclass(frozen=True)
class QuadratureGrid:
    """Gauss-Hermite rule for the weight ``exp(-t**2)``.

    ``scaled_weights`` holds ``weights * exp(nodes**2)``, computed directly so
    it stays finite where ``weights`` underflows.
    """

    nodes: np.ndarray
    weights: np.ndarray
    scaled_weights: np.ndarray

    def __len__(self):
        return self.nodes.size


def hermite_polynomial(n, x):
    """Physicists' Hermite polynomial H_n(x) by the three-term recurrence."""
    if n < 0:
        raise DegreeOutOfRange("degree must be non-negative")
    x = np.asarray(x, dtype=float)
    prev, cur = np.zeros_like(x), np.ones_like(x)
    for k in range(n):
        prev, cur = cur, 2.0 * x * cur - 2.0 * k * prev
    return cur if cur.ndim else float(cur)


def _hermite_table(nmax, t):
    """Rows 0..nmax of the orthonormal Hermite functions h_k(t) (length scale 1)."""
    t = np.asarray(t, dtype=float)
    out = np.empty((nmax + 1,) + t.shape)
    out[0] = pi**-0.25 * np.exp(-0.5 * t * t)
    if nmax >= 1:
        out[1] = sqrt(2.0) * t * out[0]
    for k in range(1, nmax):
        out[k + 1] = sqrt(2.0 / (k + 1)) * t * out[k] - sqrt(k / (k + 1)) * out[k - 1]
    return out


def hermite_functions(nmax, x, L=1.0):
    """Table ``u[k, ...] = u_k(x)`` for k = 0..nmax on length scale ``L``."""
    if L <= 0:
        raise ValueError("length scale L must be positive")
    if nmax < 0 or nmax > MAX_DEGREE:
        raise DegreeOutOfRange(f"degree {nmax} outside 0..{MAX_DEGREE}")
    x = np.asarray(x, dtype=float)
    return _hermite_table(nmax, x / L) / sqrt(L)


def hermite_function(n, x, L=1.0):
    """Normalized oscillator eigenfunction

    u_n(x) = sqrt(2^-n / (sqrt(pi) n! L)) exp(-x^2 / 2L^2) H_n(x / L),

    evaluated through the normalized recurrence so no factorial is formed.
    """
    if n < 0 or n > MAX_DEGREE:
        raise DegreeOutOfRange(f"degree {n} outside 0..{MAX_DEGREE}")
    val = hermite_functions(n, x, L)[n]
    return val if np.ndim(val) else float(val)


@lru_cache(maxsize=32)
def _gauss_hermite(n):
    # Golub-Welsch: eigenvalues of the Jacobi matrix of the Hermite recurrence.
    # J has a zero diagonal, so J = [[0, B], [B^T, 0]] after an even/odd
    # permutation and the positive nodes are square roots of eig(B^T B), a
    # problem of half the size. Newton below restores full relative accuracy.
    off = np.sqrt(np.arange(1, n) / 2.0)
    J = np.diag(off, 1) + np.diag(off, -1)
    B = J[0::2, 1::2]
    G = B.T @ B if B.shape[1] <= B.shape[0] else B @ B.T
    s = hermitian_eigen(G, vectors=False).eigenvalues if G.size else np.empty(0)
    pos = np.sqrt(np.clip(s, 0.0, None))
    mid = [0.0] if n % 2 else []
    t = np.concatenate([-pos[::-1], mid, pos])

    # Newton polish on h_n(t) = 0; h_n' = sqrt(2n) h_{n-1} - t h_n
    for _ in range(3):
        table = _hermite_table(n, t)
        hn, hm = table[n], table[n - 1]
        t = t - hn / (sqrt(2.0 * n) * hm - t * hn)
    t = 0.5 * (t - t[::-1])

    table = _hermite_table(n - 1, t)
    scaled = 1.0 / np.sum(table * table, axis=0)
    scaled = 0.5 * (scaled + scaled[::-1])
    weights = scaled * np.exp(-t * t)
    for arr in (t, weights, scaled):
        arr.setflags(write=False)
    return QuadratureGrid(t, weights, scaled)


def gauss_hermite(n):
    """Return the ``n``-point Gauss-Hermite rule, 1 <= n <= 512."""
    n = int(n)
    if not 1 <= n <= MAX_NODES:
        raise SizeOutOfRange(f"node count {n} outside 1..{MAX_NODES}")
    return _gauss_hermite(n)


def integrate(grid, f, scale=1.0):
    """Integrate ``f`` over the real line on the grid scaled by ``scale``.

    The Gaussian weight is divided back out, so ``f`` is the full integrand
    and must decay on its own; the rule is exact when ``f(scale*t)`` is a
    polynomial of degree <= 2n-1 times ``exp(-t**2)``. ``f`` is called once
    with the array of abscissae.
    """
    if scale <= 0:
        raise ValueError("scale must be positive")
    x = scale * grid.nodes
    vals = np.asarray(f(x))
    total = np.sum(grid.scaled_weights * vals)
    return complex(scale * total)
