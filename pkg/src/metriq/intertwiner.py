"""Metric discovery: positive-definite Hermitian solutions of ``A^H eta = eta A``.

The Hermitian unknown is written in real coordinates (diagonal entries plus
the real and imaginary parts of the upper triangle), so the kernel of the
real-linear map ``X -> A^H X - X A`` is directly a basis of Hermitian
solutions. A positive-definite member is then searched for in stages:

0. the orthogonal projection of the identity onto the solution space;
1. each basis element with either sign;
2. ``trials`` seeded random combinations ``sum c_k (+-B_k)``, ``c_k`` in (0, 1];
3. projected supergradient ascent of the smallest eigenvalue, which is
   concave on the solution space, started from the best candidate so far.

The search is a heuristic: :class:`MetricNotFound` means "not found" unless
the solution space is at most one-dimensional, where it is decisive.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, DimensionTooLarge, MetricNotFound, NotPositiveDefinite
from .metric import MetricOperator, make_metric, quasi_hermiticity_residual
from .numkernel import as_matrix, dagger, hermitian_eigen, nullspace_gram

MAX_DIM = 32
NULL_THRESHOLD = 1e-7
PD_MARGIN = 1e-8
RESIDUAL_TOL = 1e-9
DEFAULT_TRIALS = 1000
ASCENT_STEPS = 2000


@dataclass(frozen=True)
class IntertwinerSolution:
    metric: MetricOperator
    residual: float
    nullspace_dim: int
    seed: int
    stage: str
    trial: int = -1
    notes: dict = field(default_factory=dict)

    @property
    def eta(self):
        return self.metric.eta


def hermitian_units(n):
    """Frobenius-orthonormal real basis of the n x n Hermitian matrices."""
    units = []
    for i in range(n):
        E = np.zeros((n, n), dtype=np.complex128)
        E[i, i] = 1.0
        units.append(E)
    r = 1.0 / np.sqrt(2.0)
    for i in range(n):
        for j in range(i + 1, n):
            E = np.zeros((n, n), dtype=np.complex128)
            E[i, j] = E[j, i] = r
            units.append(E)
            E = np.zeros((n, n), dtype=np.complex128)
            E[i, j] = 1j * r
            E[j, i] = -1j * r
            units.append(E)
    return units


def hermitian_solutions(A, threshold=NULL_THRESHOLD):
    """Orthonormal (Frobenius) basis of Hermitian X with ``A^H X = X A``."""
    A = as_matrix(A)
    n = A.shape[0]
    units = hermitian_units(n)
    Ad = dagger(A)
    cols = [(Ad @ E - E @ A).ravel() for E in units]
    Kc = np.array(cols).T
    Kr = np.vstack([Kc.real, Kc.imag])
    basis = []
    for x in nullspace_gram(Kr, threshold):
        x = x.real
        X = sum(xk * E for xk, E in zip(x, units))
        basis.append(0.5 * (X + dagger(X)))
    return basis


def _pd_ratio(E):
    w = hermitian_eigen(E, vectors=False).eigenvalues
    if w[-1] <= 0.0:
        return -np.inf
    return w[0] / w[-1]


def _combine(basis, c):
    E = np.zeros_like(basis[0])
    for ck, B in zip(c, basis):
        E = E + ck * B
    return 0.5 * (E + dagger(E))


def _ascend(basis, c0, steps):
    # maximize lambda_min(sum c_k B_k) over the unit ball; the supergradient
    # of lambda_min is (v^H B_k v) for its unit eigenvector v
    c = np.asarray(c0, dtype=float)
    c = c / np.linalg.norm(c)
    for k in range(steps):
        E = _combine(basis, c)
        w, V = hermitian_eigen(E)
        if w[-1] > 0.0 and w[0] > PD_MARGIN * w[-1]:
            return E, k
        v = V[:, 0]
        g = np.array([np.vdot(v, B @ v).real for B in basis])
        c = c + (0.5 / np.sqrt(k + 1.0)) * g / max(np.linalg.norm(g), 1e-300)
        c = c / np.linalg.norm(c)
    return None, steps


def canonicalize_metric(eta):
    """Scale a positive-definite metric so that its trace equals its dimension."""
    E = as_matrix(eta)
    make_metric(E)
    tr = np.trace(E).real
    if tr <= 0.0:
        raise NotPositiveDefinite("metric trace is not positive")
    out = E * (E.shape[0] / tr)
    return 0.5 * (out + dagger(out))


def solve_metric(A, trials=DEFAULT_TRIALS, seed=0):
    """Find a canonical positive-definite metric intertwining ``A`` and ``A^H``.

    Returns
    -------
    IntertwinerSolution
        ``metric`` has trace equal to the dimension; ``stage`` records which
        search stage produced it and ``trial`` the random trial index, if any.

    Raises
    ------
    MetricNotFound
        No positive-definite solution was located. ``exhaustive`` is set when
        the Hermitian solution space has dimension <= 1.
    DimensionTooLarge
        ``A`` is larger than 32 x 32.
    """
    A = as_matrix(A)
    n = A.shape[0]
    if n > MAX_DIM:
        raise DimensionTooLarge(f"dimension {n} exceeds {MAX_DIM}")
    if n == 0:
        raise DimensionMismatch("empty matrix")
    basis = hermitian_solutions(A)
    m = len(basis)
    if m == 0:
        raise MetricNotFound("no Hermitian solution of the intertwining relation", exhaustive=True)

    def accept(E, stage, trial=-1):
        if _pd_ratio(E) <= PD_MARGIN:
            return None
        eta = canonicalize_metric(E)
        metric = make_metric(eta)
        res = quasi_hermiticity_residual(metric, A)
        if res > RESIDUAL_TOL:
            return None
        return IntertwinerSolution(metric, res, m, seed, stage, trial)

    eye = np.eye(n)
    proj = [np.trace(B).real for B in basis]
    found = accept(_combine(basis, proj), "identity-projection") if any(proj) else None
    if found:
        return found

    for k, B in enumerate(basis):
        for sign in (1.0, -1.0):
            found = accept(sign * B, "basis", k)
            if found:
                return found
    if m == 1:
        raise MetricNotFound(
            "one-dimensional Hermitian solution space contains no definite element",
            exhaustive=True,
        )

    rng = np.random.default_rng(seed)
    best, best_score = None, -np.inf
    for t in range(trials):
        c = (1.0 - rng.random(m)) * rng.choice((-1.0, 1.0), size=m)
        E = _combine(basis, c)
        score = _pd_ratio(E)
        if score > PD_MARGIN:
            found = accept(E, "random", t)
            if found:
                return found
        if score > best_score:
            best, best_score = c, score

    start = best if best is not None else np.array(proj) + (eye.trace() == 0)
    E, steps = _ascend(basis, start, ASCENT_STEPS)
    if E is not None:
        found = accept(E, "ascent", steps)
        if found:
            return found
    raise MetricNotFound(
        f"no positive-definite metric found in a {m}-dimensional Hermitian solution space"
    )
