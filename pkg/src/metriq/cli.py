"""Command-line front end.

    metriq solve-metric --input A.json --out eta.json
    metriq diag --input A.json --metric eta.json
    metriq verify --input A.json --metric eta.json
    metriq transform --input A.json --metric eta.json --reference B.json
    metriq swanson {spectrum,wavefunctions,verify,expand} --omega 2 --alpha 0.5 --beta 0.3

Every command prints one report (JSON by default). Exit status is 0 when all
residuals pass, 1 when any fails and 2 on bad input.
"""

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
import time

import numpy as np

from . import __version__
from .biorth import (
    apply_spectral,
    completeness_residual,
    diagonalize,
    expand_coefficients,
    make_system,
    reconstruct,
)
from .errors import (
    DimensionMismatch,
    InvalidParameters,
    KindViolation,
    MetricNotFound,
    MetriqError,
    NotHermitian,
    NotPositiveDefinite,
    ParseError,
)
from .intertwiner import DEFAULT_TRIALS, solve_metric
from .metric import eta_adjoint, eta_inner, make_metric, quasi_hermiticity_residual
from .numkernel import dagger, fro, hermiticity_residual
from .swanson import (
    SwansonParams,
    build_model,
    check_params,
    eigenfunctions_U,
    energy,
    eta_coefficients,
    eta_gram,
    metric_at,
    plain_gram,
    project_gaussian,
    spectral_apply,
    verify_model,
)
from .transform import build_table, change_representation, hermitian_basis, roundtrip_residual

KINDS = ("general", "hermitian", "metric")


class InputError(Exception):
    """Bad command-line input; ``field`` names the offending flag or file field."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


# --- matrix files -----------------------------------------------------------


def _num(x):
    if not math.isfinite(x):
        raise ValueError("non-finite matrix entry")
    return format(float(x), ".17g")


def dumps_matrix(M, kind="general"):
    """Canonical text of a matrix file (17 significant digits, one entry per line)."""
    M = np.asarray(M, dtype=np.complex128)
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}")
    rows, cols = M.shape
    entries = ",\n".join(f"    [{_num(z.real)}, {_num(z.imag)}]" for z in M.ravel())
    return (
        "{\n"
        f'  "rows": {rows},\n'
        f'  "cols": {cols},\n'
        f'  "kind": "{kind}",\n'
        '  "entries": [\n'
        f"{entries}\n"
        "  ]\n"
        "}\n"
    )


def save_matrix(path, M, kind="general"):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_matrix(M, kind))


def loads_matrix(text, source="<string>"):
    """Parse matrix-file text; returns ``(matrix, kind)``."""
    try:
        # "-0" must stay a float so signed zeros survive a round trip
        doc = json.loads(text, parse_int=lambda tok: -0.0 if tok == "-0" else int(tok))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ParseError(f"{source}: top level must be an object")
    for key in ("rows", "cols", "entries"):
        if key not in doc:
            raise ParseError(f"{source}: missing field '{key}'")
    rows, cols = doc["rows"], doc["cols"]
    for key, val in (("rows", rows), ("cols", cols)):
        if not isinstance(val, int) or isinstance(val, bool) or val < 1:
            raise ParseError(f"{source}: field '{key}' must be a positive integer")
    entries = doc["entries"]
    if not isinstance(entries, list):
        raise ParseError(f"{source}: field 'entries' must be a list")
    if len(entries) != rows * cols:
        raise ParseError(
            f"{source}: field 'entries' has {len(entries)} items, expected rows*cols = {rows * cols}"
        )
    vals = []
    for i, e in enumerate(entries):
        ok = (
            isinstance(e, list)
            and len(e) == 2
            and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in e)
        )
        if not ok or not all(math.isfinite(v) for v in e):
            raise ParseError(f"{source}: entries[{i}] must be a finite [re, im] pair")
        vals.append(complex(e[0], e[1]))
    kind = doc.get("kind", "general")
    if kind not in KINDS:
        raise ParseError(f"{source}: field 'kind' must be one of {', '.join(KINDS)}")
    M = np.array(vals, dtype=np.complex128).reshape(rows, cols)
    if kind in ("hermitian", "metric"):
        if rows != cols or hermiticity_residual(M) > 1e-12:
            raise KindViolation(f"{source}: kind '{kind}' requires a Hermitian matrix")
    if kind == "metric":
        try:
            make_metric(M)
        except NotPositiveDefinite as exc:
            raise KindViolation(f"{source}: kind 'metric' requires positive definiteness ({exc})") from None
    return M, kind


def load_matrix(path):
    with open(path, encoding="utf-8") as fh:
        return loads_matrix(fh.read(), source=str(path))[0]


# --- reports ----------------------------------------------------------------


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    return x


class Report:
    def __init__(self, argv):
        self.command = list(argv)
        self.inputs = {}
        self.results = {}
        self.residuals = []
        self.dumps = {}
        self._start = time.perf_counter()

    def add_input(self, path):
        with open(path, "rb") as fh:
            self.inputs[str(path)] = "sha256:" + hashlib.sha256(fh.read()).hexdigest()

    def check(self, name, value, tolerance):
        value = float(value)
        self.residuals.append(
            {"name": name, "value": value, "tolerance": float(tolerance), "pass": bool(value <= tolerance)}
        )

    @property
    def ok(self):
        return all(r["pass"] for r in self.residuals)

    def as_dict(self):
        return {
            "command": self.command,
            "version": __version__,
            "inputs": self.inputs,
            "results": _jsonable(self.results),
            "residuals": self.residuals,
            "pass": self.ok,
            "timing": {"seconds": round(time.perf_counter() - self._start, 6)},
        }

    def render(self, fmt):
        if fmt == "json":
            return json.dumps(self.as_dict(), indent=2) + "\n"
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if self.dumps:
            for header, rows in self.dumps.values():
                w.writerow(header)
                w.writerows(rows)
        else:
            w.writerow(["name", "value", "tolerance", "pass"])
            for r in self.residuals:
                w.writerow([r["name"], repr(r["value"]), repr(r["tolerance"]), r["pass"]])
        return buf.getvalue()


# --- helpers ----------------------------------------------------------------


def _read(report, path, field):
    if path is None:
        raise InputError(field, "is required")
    try:
        M = load_matrix(path)
    except FileNotFoundError:
        raise InputError(field, f"file not found: {path}") from None
    except (ParseError, KindViolation) as exc:
        raise InputError(field, str(exc)) from None
    report.add_input(path)
    return M


def _system(report, args):
    A = _read(report, args.input, "--input")
    eta = _read(report, args.metric, "--metric")
    if A.shape[0] != A.shape[1]:
        raise InputError("--input", f"matrix must be square, got {A.shape}")
    if eta.shape != A.shape:
        raise InputError("--metric", f"shape {eta.shape} does not match --input {A.shape}")
    try:
        metric = make_metric(eta)
    except (NotHermitian, NotPositiveDefinite) as exc:
        raise InputError("--metric", str(exc)) from None
    return A, metric


def _rng(args):
    return np.random.default_rng(args.seed)


def _random_vectors(rng, n, count):
    return rng.normal(size=(count, n)) + 1j * rng.normal(size=(count, n))


def _rel(a, b):
    return fro(a - b) / max(fro(b), 1e-300)


def _biorth_checks(report, A, metric, basis, ts):
    report.check("quasi-hermiticity A^H eta = eta A", quasi_hermiticity_residual(metric, A), 1e-9 * ts)
    report.check("hermitian counterpart rho A rho^-1", hermiticity_residual(basis.hermitian_counterpart), 1e-9 * ts)
    report.check("biorthogonality (eta v_m)^H v_n = delta", basis.biorthogonality_residual(), 1e-10 * ts)
    report.check("completeness sum v_n (eta v_n)^H = I", completeness_residual(basis), 1e-10 * ts)
    report.check("spectral resolution of A", _rel(basis.operator("A"), A), 1e-10 * ts)
    report.check("spectral resolution of A^H", _rel(basis.operator("A_dagger"), dagger(A)), 1e-10 * ts)


# --- commands ---------------------------------------------------------------


def cmd_solve_metric(args, report):
    A = _read(report, args.input, "--input")
    if A.shape[0] != A.shape[1]:
        raise InputError("--input", f"matrix must be square, got {A.shape}")
    report.results["dimension"] = A.shape[0]
    report.results["seed"] = args.seed
    report.results["trials"] = args.trials
    try:
        sol = solve_metric(A, trials=args.trials, seed=args.seed)
    except MetricNotFound as exc:
        report.results["found"] = False
        report.results["message"] = str(exc)
        report.results["exhaustive"] = exc.exhaustive
        report.check("metric found", 1.0, 0.0)
        return
    report.results["found"] = True
    report.results["stage"] = sol.stage
    report.results["trial"] = sol.trial
    report.results["nullspace_dim"] = sol.nullspace_dim
    report.results["eta"] = sol.eta
    report.check("quasi-hermiticity A^H eta = eta A", sol.residual, 1e-9 * args.tol_scale)
    w = np.linalg.eigvalsh(sol.eta)
    report.results["eta_eigenvalues"] = w
    if args.out:
        save_matrix(args.out, sol.eta, kind="metric")
        report.results["out"] = args.out


def cmd_diag(args, report):
    A, metric = _system(report, args)
    ts = args.tol_scale
    try:
        basis = diagonalize(make_system(A, metric))
    except MetriqError as exc:
        report.results["error"] = str(exc)
        report.check("quasi-hermiticity A^H eta = eta A", quasi_hermiticity_residual(metric, A), 1e-9 * ts)
        return
    report.results["eigenvalues"] = basis.eigenvalues
    report.results["h_kets"] = basis.h_kets
    report.results["eta_kets"] = basis.eta_kets
    _biorth_checks(report, A, metric, basis, ts)
    report.dumps["eigenvalues"] = (["n", "eigenvalue"], [[n, repr(float(v))] for n, v in enumerate(basis.eigenvalues)])


def cmd_verify(args, report):
    A, metric = _system(report, args)
    ts = args.tol_scale
    n = A.shape[0]
    try:
        basis = diagonalize(make_system(A, metric))
    except MetriqError as exc:
        report.results["error"] = str(exc)
        report.check("quasi-hermiticity A^H eta = eta A", quasi_hermiticity_residual(metric, A), 1e-9 * ts)
        return
    _biorth_checks(report, A, metric, basis, ts)
    report.check("metric factors rho^2 = eta, rho rho^-1 = I", metric.check_invariants(), 1e-10 * ts)
    report.check("eta-adjoint involution", _rel(eta_adjoint(metric, eta_adjoint(metric, A)), A), 1e-10 * ts)
    report.check("eta-adjoint of A equals A", _rel(eta_adjoint(metric, A), A), 1e-9 * ts)

    vecs = _random_vectors(_rng(args), n, args.vectors)
    worst = {"A": 0.0, "A_dagger": 0.0, "round": 0.0, "inner": 0.0, "left": 0.0}
    for phi in vecs:
        worst["A"] = max(worst["A"], _rel(apply_spectral(basis, phi, "A"), A @ phi))
        worst["A_dagger"] = max(worst["A_dagger"], _rel(apply_spectral(basis, phi, "A_dagger"), dagger(A) @ phi))
        worst["round"] = max(worst["round"], _rel(reconstruct(basis, expand_coefficients(basis, phi)), phi))
    for a, b in zip(vecs, vecs[::-1]):
        g = eta_inner(metric, a, b)
        worst["inner"] = max(worst["inner"], abs(g - np.conj(eta_inner(metric, b, a))) / max(abs(g), 1e-300))
    phi, psi = vecs[0], vecs[-1]
    lhs = np.vdot(phi, dagger(A) @ psi)
    rhs = np.vdot(phi, metric.eta @ (A @ (metric.eta_inv @ psi)))
    report.check("A^H = eta A eta^-1 in matrix elements", abs(lhs - rhs) / max(abs(lhs), 1e-300), 1e-10 * ts)
    left = dagger(basis.eta_kets) @ A - basis.eigenvalues[:, None] * dagger(basis.eta_kets)
    report.check("spectral expansion of A", worst["A"], 1e-10 * ts)
    report.check("spectral expansion of A^H", worst["A_dagger"], 1e-10 * ts)
    report.check("expansion round trip", worst["round"], 1e-10 * ts)
    report.check("eta inner product conjugate symmetry", worst["inner"], 1e-12 * ts)
    report.check("eta-kets are left eigenvectors", fro(left) / max(fro(A), 1e-300), 1e-10 * ts)
    report.results["eigenvalues"] = basis.eigenvalues
    report.results["vectors"] = args.vectors
    report.results["seed"] = args.seed


def cmd_transform(args, report):
    A, metric = _system(report, args)
    B = _read(report, args.reference, "--reference")
    if B.shape != A.shape:
        raise InputError("--reference", f"shape {B.shape} does not match --input {A.shape}")
    try:
        hb = hermitian_basis(B)
    except NotHermitian as exc:
        raise InputError("--reference", str(exc)) from None
    ts = args.tol_scale
    try:
        bb = diagonalize(make_system(A, metric))
    except MetriqError as exc:
        report.results["error"] = str(exc)
        report.check("quasi-hermiticity A^H eta = eta A", quasi_hermiticity_residual(metric, A), 1e-9 * ts)
        return
    t = build_table(hb, bb, metric)
    report.results["b_eigenvalues"] = t.b_eigenvalues
    report.results["a_eigenvalues"] = t.a_eigenvalues
    report.results["factors_eta"] = t.factors_eta
    report.results["factors_h"] = t.factors_h
    report.check("conjugation of transformation factors", t.conjugation_residual(), 1e-12 * ts)
    report.check("bi-orthogonality contraction", roundtrip_residual(t), 1e-10 * ts)

    n = A.shape[0]
    worst_round, worst_proj = 0.0, 0.0
    for phi in _random_vectors(_rng(args), n, args.vectors):
        c = dagger(bb.h_kets) @ phi
        b = change_representation(t, c, "lambda_to_omega")
        back = change_representation(t, b, "omega_to_lambda")
        worst_round = max(worst_round, _rel(back, c))
        worst_proj = max(worst_proj, _rel(b, dagger(hb.kets) @ phi))
    report.check("representation round trip", worst_round, 1e-10 * ts)
    report.check("lambda-to-omega matches plain projections", worst_proj, 1e-10 * ts)


def _swanson_params(args):
    return SwansonParams(args.omega, args.alpha, args.beta, args.mass, args.hbar, args.z)


def _swanson_model(args):
    p = _swanson_params(args)
    try:
        return build_model(p, args.trunc, args.quad)
    except InvalidParameters as exc:
        raise InputError("swanson parameters", str(exc)) from None


def cmd_swanson(args, report):
    p = _swanson_params(args)
    report.results["params"] = {
        "omega": p.omega, "alpha": p.alpha, "beta": p.beta, "mass": p.mass, "hbar": p.hbar, "z": p.z
    }
    action = args.action
    ts = args.tol_scale

    if action == "spectrum":
        bad = check_params(p, metric=False)
        if bad:
            raise InputError("swanson parameters", "; ".join(bad))
        E = [energy(p, k) for k in range(args.levels)]
        report.results["Omega"] = p.Omega
        report.results["energies"] = E
        report.dumps["spectrum"] = (["n", "energy"], [[k, repr(e)] for k, e in enumerate(E)])
        return

    model = _swanson_model(args)
    report.results.update(
        ell=model.ell, Omega=model.Omega, M=model.M, L=model.Lcap, gamma=model.gamma,
        N=model.N, quad_nodes=model.quad_nodes, hermitian_limit=model.hermitian_limit,
    )

    if action == "wavefunctions":
        x = np.linspace(args.xmin, args.xmax, args.points)
        k = args.index
        if not 0 <= k < model.N:
            raise InputError("--index", f"must lie in 0..{model.N - 1}")
        U = eigenfunctions_U(model, k, x)[k]
        report.results["index"] = k
        report.results["x"] = x
        report.results["U"] = U
        report.results["eta"] = metric_at(model, x)
        report.dumps["wavefunction"] = (["x", f"U_{k}"], [[repr(float(a)), repr(float(b))] for a, b in zip(x, U)])
        return

    if action == "verify":
        out = verify_model(model, tol_scale=ts)
        for c in out["checks"]:
            report.check(c["name"], c["value"], c["tolerance"])
        nmax = min(20, model.N - 4)
        G = eta_gram(model, nmax, nodes=args.gram_nodes)
        report.check(
            f"eta-orthonormality on {args.gram_nodes} nodes", np.max(np.abs(G - np.eye(nmax + 1))), 1e-8 * ts
        )
        report.check(
            "eta-Gram equals plain Gram", np.max(np.abs(G - plain_gram(model, nmax, args.gram_nodes))), 1e-12 * ts
        )
        _swanson_spectral_checks(model, project_gaussian(model), report, ts)
        report.results["interior_levels"] = out["interior_levels"]
        return

    if action == "expand":
        c = project_gaussian(model, args.center, args.width)
        d = eta_coefficients(model, c)
        report.results["center"] = args.center
        report.results["width"] = args.width
        report.results["u_coefficients"] = c[: args.levels]
        report.results["eta_coefficients"] = d[: args.levels]
        report.dumps["coefficients"] = (
            ["n", "eta_coefficient_re", "eta_coefficient_im"],
            [[k, repr(float(z.real)), repr(float(z.imag))] for k, z in enumerate(d[: args.levels])],
        )
        _swanson_spectral_checks(model, c, report, ts)
        return
    raise InputError("action", f"unknown swanson action {action!r}")


def _swanson_spectral_checks(model, c, report, ts):
    k = model.N - 2
    for which, mat, label in (("H", model.Hmat, "H"), ("H_dagger", model.Hdagmat, "H^dagger")):
        direct = mat @ c
        got = spectral_apply(model, c, which)
        err = np.max(np.abs(got[:k] - direct[:k])) / max(np.max(np.abs(direct[:k])), 1e-300)
        report.check(f"spectral expansion of {label}", err, 1e-6 * ts)


# --- argument parsing -------------------------------------------------------


def _common():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=int, default=None, help="RNG seed (default: $METRIQ_SEED or 0)")
    common.add_argument("--tol-scale", "--tol", type=float, default=1.0, dest="tol_scale")
    common.add_argument("--report", default=None, help="also write the report to this file")
    return common


def build_parser():
    common = _common()
    parser = argparse.ArgumentParser(prog="metriq", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"metriq {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve-metric", parents=[common], help="find a positive-definite metric for A")
    s.add_argument("--input", required=True)
    s.add_argument("--out")
    s.add_argument("--trials", type=int, default=DEFAULT_TRIALS)

    for name, help_ in (("diag", "bi-orthogonal eigensystem"), ("verify", "check every identity")):
        s = sub.add_parser(name, parents=[common], help=help_)
        s.add_argument("--input", required=True)
        s.add_argument("--metric", required=True)
        if name == "verify":
            s.add_argument("--vectors", type=int, default=100)

    s = sub.add_parser("transform", parents=[common], help="transformation table against a Hermitian B")
    s.add_argument("--input", required=True)
    s.add_argument("--metric", required=True)
    s.add_argument("--reference", required=True)
    s.add_argument("--vectors", type=int, default=20)

    s = sub.add_parser("swanson", parents=[common], help="the Swanson oscillator")
    s.add_argument("action", choices=("spectrum", "wavefunctions", "verify", "expand"))
    s.add_argument("--omega", type=float, default=2.0)
    s.add_argument("--alpha", type=float, default=0.5)
    s.add_argument("--beta", type=float, default=0.3)
    s.add_argument("--mass", type=float, default=1.0)
    s.add_argument("--hbar", type=float, default=1.0)
    s.add_argument("--z", type=float, default=1.0)
    s.add_argument("-n", "--levels", type=int, default=10)
    s.add_argument("--trunc", type=int, default=64)
    s.add_argument("--quad", type=int, default=None)
    s.add_argument("--gram-nodes", type=int, default=128, dest="gram_nodes")
    s.add_argument("--index", type=int, default=0)
    s.add_argument("--xmin", type=float, default=-5.0)
    s.add_argument("--xmax", type=float, default=5.0)
    s.add_argument("--points", type=int, default=201)
    s.add_argument("--center", type=float, default=0.0)
    s.add_argument("--width", type=float, default=1.0)
    return parser


COMMANDS = {
    "solve-metric": cmd_solve_metric,
    "diag": cmd_diag,
    "verify": cmd_verify,
    "transform": cmd_transform,
    "swanson": cmd_swanson,
}


def _resolve_seed(args):
    if args.seed is not None:
        return args.seed
    env = os.environ.get("METRIQ_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise InputError("METRIQ_SEED", f"not an integer: {env!r}") from None


def run(argv, stdout=None, stderr=None):
    """Execute one command; returns the exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    report = Report(argv)
    try:
        args.seed = _resolve_seed(args)
        for flag in ("levels", "points", "trials", "vectors"):
            if getattr(args, flag, 1) < 1:
                raise InputError(f"--{flag}", "must be at least 1")
        COMMANDS[args.command](args, report)
    except InputError as exc:
        print(f"metriq: error: {exc}", file=stderr)
        return 2
    except (DimensionMismatch, InvalidParameters, ValueError) as exc:
        print(f"metriq: error: input: {exc}", file=stderr)
        return 2
    text = report.render(args.format)
    stdout.write(text)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text)
    return 0 if report.ok else 1


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
