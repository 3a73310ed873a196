"""The non-Hermitian Swanson oscillator

    H = hbar omega (a^dag a + 1/2) + hbar alpha a^2 + hbar beta a^dag^2,   alpha != beta,

represented in the eigenbasis {u_n} of its Hermitian counterpart
``h = p^2 / 2M + M Omega^2 x^2 / 2`` (length scale ``L = sqrt(hbar / M Omega)``).

With the z = 1 similarity ``rho(x) = exp(-g x^2 / 2)``, ``g = (alpha - beta) /
((omega - alpha - beta) ell^2)``, the observables are ``X_rho = x`` and
``P_rho = p + i hbar g x`` and ``H = P_rho^2 / 2M + M Omega^2 X_rho^2 / 2``.
Position and momentum are tridiagonal in {u_n}; every operator matrix is
formed at size N + 2 and cut to N x N so that it is the exact truncation of
the infinite matrix. Identities that involve products are checked on the
leading (N - 2) x (N - 2) block, which the cut does not reach.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegreeOutOfRange, DimensionMismatch, InvalidParameters, QuadratureUnderresolved
from .numkernel import as_vector, dagger, fro, hermiticity_residual
from .quadrature import MAX_DEGREE, _hermite_table, gauss_hermite, hermite_functions

QUASI_TOL = 1e-8
COMMUTATOR_TOL = 1e-8
GRAM_TOL = 1e-8
SPECTRUM_TOL = 1e-6
ETA_HERMITIAN_TOL = 1e-9
# extra basis functions carried by the rho / rho^-1 expansions so that their
# truncation stays out of the leading N coefficients
SPECTRAL_PAD = 32


@dataclass(frozen=True)
class SwansonParams:
    omega: float
    alpha: float
    beta: float
    mass: float = 1.0
    hbar: float = 1.0
    z: float = 1.0

    @property
    def ell(self):
        return math.sqrt(self.hbar / (self.mass * self.omega))

    @property
    def Omega_sq(self):
        return self.omega**2 - 4.0 * self.alpha * self.beta

    @property
    def Omega(self):
        return math.sqrt(self.Omega_sq)


def inverse_mass(p):
    """1 / M(z) of the Hermitian counterpart; None where the closed form is undefined."""
    a, b, w, z = p.alpha, p.beta, p.omega, p.z
    if z <= -1.0:
        return None
    d = a + b - z * w
    rad = d * d - (1.0 - z * z) * (a - b) ** 2
    if rad < 0.0:
        return None
    # d * sqrt(1 - (1-z^2)(a-b)^2 / d^2), written so d = 0 needs no division
    root = math.copysign(math.sqrt(rad), d)
    num = -z * (a + b) + w - root
    return num / ((1.0 + z) * p.hbar / p.ell**2)


def check_params(p, metric=True):
    """List the violated parameter constraints (empty when valid)."""
    bad = []
    if not p.omega > 0:
        bad.append(f"omega must be positive (got {p.omega})")
    if not p.mass > 0:
        bad.append(f"mass must be positive (got {p.mass})")
    if not p.hbar > 0:
        bad.append(f"hbar must be positive (got {p.hbar})")
    if not -1.0 <= p.z <= 1.0:
        bad.append(f"z must lie in [-1, 1] (got {p.z})")
    if bad:
        return bad
    if not p.Omega_sq > 0:
        bad.append(f"Omega^2 = omega^2 - 4 alpha beta = {p.Omega_sq:.6g} must be positive")
    minv = inverse_mass(p)
    if minv is None or not minv > 0:
        bad.append(f"M(z) must be positive and defined (1/M = {minv})")
    if not metric:
        return bad
    if p.z != 1.0:
        bad.append(f"the metric is available only at z = 1 (got z = {p.z})")
        return bad
    denom = p.omega - p.alpha - p.beta
    if denom == 0.0:
        bad.append("omega - alpha - beta must be nonzero")
        return bad
    ratio = (p.alpha - p.beta) / denom
    if p.alpha != p.beta and not ratio > 0:
        bad.append(f"(alpha - beta) / (omega - alpha - beta) = {ratio:.6g} must be positive for a bounded rho")
    if not bad and minv is not None and minv > 0 and p.Omega_sq > 0:
        L2 = p.hbar * minv / p.Omega
        g = ratio / p.ell**2
        if not 1.0 / L2 > g:
            bad.append(f"1/L^2 = {1.0 / L2:.6g} must exceed g = {g:.6g} for normalizable eigenfunctions")
    return bad


def energy(model, n):
    """E_n = hbar Omega (n + 1/2); accepts a SwansonModel or SwansonParams (any z)."""
    if n < 0:
        raise DegreeOutOfRange("level index must be non-negative")
    p = model.params if isinstance(model, SwansonModel) else model
    return p.hbar * p.Omega * (n + 0.5)


def _ladder(n):
    return np.diag(np.sqrt(np.arange(1, n, dtype=float)), 1)


def _gaussian_elements(N, L, c, nodes):
    """Matrix of exp(-c x^2) between u_0..u_{N-1}; exact when nodes >= N."""
    scale = 1.0 / math.sqrt(1.0 / L**2 + c)
    grid = gauss_hermite(nodes)
    x = scale * grid.nodes
    U = _hermite_table(N - 1, x / L) / math.sqrt(L)
    f = grid.scaled_weights * np.exp(-c * x * x) * scale
    M = (U * f) @ U.T
    return 0.5 * (M + M.T)


@dataclass(frozen=True)
class SwansonModel:
    params: SwansonParams
    ell: float
    Omega: float
    M: float
    Lcap: float
    gamma: float
    eta_coeff: float
    N: int
    quad_nodes: int
    Xmat: np.ndarray
    Pmat: np.ndarray
    Hmat: np.ndarray
    Hdagmat: np.ndarray
    EtaMat: np.ndarray
    RhoPad: np.ndarray
    RhoInvPad: np.ndarray
    hermitian_limit: bool = False
    warnings: tuple = field(default_factory=tuple)

    @property
    def RhoMat(self):
        return self.RhoPad[: self.N, : self.N]

    @property
    def RhoInvMat(self):
        return self.RhoInvPad[: self.N, : self.N]

    def energies(self, count=None):
        n = np.arange(self.N if count is None else count)
        return self.params.hbar * self.Omega * (n + 0.5)


def build_model(p, N=64, quad_nodes=None):
    """Assemble the truncated operator matrices and the metric for ``p``.

    Raises
    ------
    InvalidParameters
        With every violated constraint listed; z must equal 1.
    QuadratureUnderresolved
        When the metric matrix or the basis Gram matrix is not resolved.
    """
    N = int(N)
    quad_nodes = 2 * N + 32 if quad_nodes is None else int(quad_nodes)
    bad = check_params(p)
    if N < 4:
        bad.append(f"truncation N must be at least 4 (got {N})")
    if N - 1 > MAX_DEGREE:
        bad.append(f"truncation N must be at most {MAX_DEGREE + 1} (got {N})")
    if quad_nodes < 2 * N + 32:
        bad.append(f"quad_nodes must be at least 2N + 32 = {2 * N + 32} (got {quad_nodes})")
    if bad:
        raise InvalidParameters(bad)

    hbar = p.hbar
    ell = p.ell
    Omega = p.Omega
    M = 1.0 / inverse_mass(p)
    L = math.sqrt(hbar / (M * Omega))
    g = (p.alpha - p.beta) / ((p.omega - p.alpha - p.beta) * ell**2)
    gamma = hbar * g

    K = N + 2
    b = _ladder(K)
    x = L * (b + b.T) / math.sqrt(2.0)
    pm = 1j * hbar * (b.T - b) / (math.sqrt(2.0) * L)
    P_rho = pm + 1j * gamma * x
    H = P_rho @ P_rho / (2.0 * M) + 0.5 * M * Omega**2 * (x @ x)
    H = H[:N, :N]

    eta = _gaussian_elements(N, L, g, quad_nodes)
    if hermiticity_residual(eta) > ETA_HERMITIAN_TOL:
        raise QuadratureUnderresolved("metric matrix is not Hermitian to 1e-9")
    gram = _gaussian_elements(N, L, 0.0, quad_nodes)
    if fro(gram - np.eye(N)) > ETA_HERMITIAN_TOL:
        raise QuadratureUnderresolved("basis functions are not orthonormal on the quadrature grid")

    notes = ()
    hermitian_limit = p.alpha == p.beta
    if hermitian_limit:
        notes = ("alpha == beta: Hermitian limit, H is Hermitian and eta = 1",)

    mats = dict(
        Xmat=x[:N, :N].astype(np.complex128),
        Pmat=P_rho[:N, :N],
        Hmat=H,
        Hdagmat=dagger(H),
        EtaMat=eta.astype(np.complex128),
        RhoPad=_gaussian_elements(N + SPECTRAL_PAD, L, 0.5 * g, quad_nodes).astype(np.complex128),
        RhoInvPad=_gaussian_elements(N + SPECTRAL_PAD, L, -0.5 * g, quad_nodes).astype(np.complex128),
    )
    for arr in mats.values():
        arr.setflags(write=False)
    return SwansonModel(
        params=p, ell=ell, Omega=Omega, M=M, Lcap=L, gamma=gamma, eta_coeff=g,
        N=N, quad_nodes=quad_nodes, hermitian_limit=hermitian_limit, warnings=notes,
        **mats,
    )


def metric_at(model, x):
    """eta(x) = exp(-g x^2)."""
    val = np.exp(-model.eta_coeff * np.asarray(x, dtype=float) ** 2)
    return val if np.ndim(val) else float(val)


def eigenfunction_U(model, n, x):
    """U_n(x) = rho^-1(x) u_n(x), the right eigenfunction of H for E_n."""
    if n < 0 or n > MAX_DEGREE:
        raise DegreeOutOfRange(f"degree {n} outside 0..{MAX_DEGREE}")
    x = np.asarray(x, dtype=float)
    val = np.exp(0.5 * model.eta_coeff * x * x) * hermite_functions(n, x, model.Lcap)[n]
    return val if np.ndim(val) else float(val)


def eigenfunctions_U(model, nmax, x):
    """Table ``U[k, ...]`` of U_0..U_nmax at ``x``."""
    x = np.asarray(x, dtype=float)
    return np.exp(0.5 * model.eta_coeff * x * x) * hermite_functions(nmax, x, model.Lcap)


def eta_gram(model, nmax, nodes=128):
    """<U_n, U_m>_eta for n, m <= nmax by quadrature on ``nodes`` points (scale L)."""
    grid = gauss_hermite(nodes)
    x = model.Lcap * grid.nodes
    U = eigenfunctions_U(model, nmax, x)
    f = grid.scaled_weights * metric_at(model, x) * model.Lcap
    return (U * f) @ U.T


def plain_gram(model, nmax, nodes=128):
    """<u_n, u_m> on the same grid as :func:`eta_gram`."""
    grid = gauss_hermite(nodes)
    x = model.Lcap * grid.nodes
    u = hermite_functions(nmax, x, model.Lcap)
    return (u * (grid.scaled_weights * model.Lcap)) @ u.T


def project(model, f, scale=None, nodes=None):
    """Coefficients ``c_k = int f u_k dx`` of ``f`` in the {u_n} basis.

    ``scale`` sets the quadrature abscissae; it should match the Gaussian
    decay of ``f * u_k`` (the default is L).
    """
    grid = gauss_hermite(nodes or model.quad_nodes)
    s = model.Lcap if scale is None else scale
    x = s * grid.nodes
    u = hermite_functions(model.N - 1, x, model.Lcap)
    vals = np.asarray(f(x), dtype=np.complex128)
    return (u * (grid.scaled_weights * s)) @ vals


def project_gaussian(model, center=0.0, width=1.0):
    """Coefficients of ``exp(-(x - center)^2 / (2 width^2))`` in the {u_n} basis."""
    L = model.Lcap
    scale = 1.0 / math.sqrt(0.5 / L**2 + 0.5 / width**2)
    return project(model, lambda x: np.exp(-((x - center) ** 2) / (2.0 * width**2)), scale)


def _padded(model, coeffs):
    c = as_vector(coeffs, model.N)
    return np.concatenate([c, np.zeros(SPECTRAL_PAD, dtype=np.complex128)])


def eta_coefficients(model, coeffs, count=None):
    """d_n = int eta phi U_n dx = int rho phi u_n dx, for n < count (default N)."""
    d = model.RhoPad @ _padded(model, coeffs)
    return d[: model.N if count is None else count]


def spectral_apply(model, coeffs, which="H"):
    """Apply H (or H^dagger) to a {u_n}-coefficient vector via the U_n expansion.

    H:        sum_n E_n (int eta phi U_n) U_n        ->  R^-1 E R c
    H^dagger: sum_n E_n (int phi U_n) eta U_n        ->  R E R^-1 c

    R, R^-1 are the matrices of rho(x), rho^-1(x); the sums run over N + 32
    levels and the leading N coefficients are returned.
    """
    c = _padded(model, coeffs)
    E = model.params.hbar * model.Omega * (np.arange(c.size) + 0.5)
    if which == "H":
        out = model.RhoInvPad @ (E * (model.RhoPad @ c))
    elif which == "H_dagger":
        out = model.RhoPad @ (E * (model.RhoInvPad @ c))
    else:
        raise ValueError(f"which must be 'H' or 'H_dagger', got {which!r}")
    return out[: model.N]


def completeness_partial_sum(model, f, x, nmax, nodes=None):
    """sum_{n <= nmax} U_n(x) int eta(x') U_n(x') f(x') dx' at the points ``x``."""
    grid = gauss_hermite(nodes or model.quad_nodes)
    xq = model.Lcap * grid.nodes
    Uq = eigenfunctions_U(model, nmax, xq)
    w = grid.scaled_weights * model.Lcap * metric_at(model, xq) * np.asarray(f(xq))
    d = Uq @ w
    return d @ eigenfunctions_U(model, nmax, x)


def _block_rel(R, A, B, k):
    denom = fro(A[:k, :k]) * fro(B[:k, :k])
    return fro(R[:k, :k]) / denom if denom else 0.0


def quasi_hermiticity_block(model, A):
    """``|A^H eta - eta A|_F / (|A|_F |eta|_F)`` on the leading (N - 2) block."""
    k = model.N - 2
    eta = model.EtaMat
    return _block_rel(dagger(A) @ eta - eta @ A, A, eta, k)


def _check(name, value, tol):
    return {"name": name, "value": float(value), "tolerance": tol, "pass": bool(value <= tol)}


def interior_spectrum(model, count=None):
    """Lowest ``count`` eigenvalues of the truncated Hmat (by real part)."""
    ev = np.linalg.eigvals(model.Hmat)
    ev = ev[np.argsort(ev.real, kind="stable")]
    return ev[: (model.N // 2 if count is None else count)]


def verify_model(model, tol_scale=1.0):
    """Run the model's identity checks; returns ``{"checks": [...], "pass": bool}``."""
    N = model.N
    k = N - 2
    checks = [
        _check("quasi-hermiticity X_rho", quasi_hermiticity_block(model, model.Xmat), QUASI_TOL * tol_scale),
        _check("quasi-hermiticity P_rho", quasi_hermiticity_block(model, model.Pmat), QUASI_TOL * tol_scale),
        _check("quasi-hermiticity H", quasi_hermiticity_block(model, model.Hmat), QUASI_TOL * tol_scale),
    ]
    comm = model.Xmat @ model.Pmat - model.Pmat @ model.Xmat
    dev = np.max(np.abs(comm[:k, :k] - 1j * model.params.hbar * np.eye(k))) / model.params.hbar
    checks.append(_check("canonical commutator [X_rho, P_rho] = i hbar", dev, COMMUTATOR_TOL * tol_scale))

    nmax = min(20, N - 4)
    G = eta_gram(model, nmax, nodes=model.quad_nodes)
    checks.append(
        _check("eta-orthonormality <U_n, U_m>_eta", np.max(np.abs(G - np.eye(nmax + 1))), GRAM_TOL * tol_scale)
    )

    ev = interior_spectrum(model)
    E = model.energies(ev.size)
    rel = np.max(np.abs(ev - E) / np.abs(E))
    checks.append(_check("spectrum E_n = hbar Omega (n + 1/2)", rel, SPECTRUM_TOL * tol_scale))
    return {"checks": checks, "pass": all(c["pass"] for c in checks), "interior_levels": int(ev.size)}


def check_dimension(model, coeffs):
    c = np.asarray(coeffs)
    if c.shape != (model.N,):
        raise DimensionMismatch(f"expected {model.N} coefficients, got shape {c.shape}")
    return c
