import json
import subprocess
import sys

import numpy as np
import pytest

from metriq.cli import dumps_matrix, load_matrix, loads_matrix, run, save_matrix
from metriq.errors import KindViolation, ParseError


def _run(argv, capsys):
    code = run(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def files(tmp_path):
    A = tmp_path / "A.json"
    B = tmp_path / "B.json"
    save_matrix(A, [[1, 1], [0, 2]])
    save_matrix(B, [[0, 1], [1, 0]], kind="hermitian")
    return tmp_path, A, B


def test_matrix_round_trip_bytes(tmp_path, rng):
    M = rng.normal(size=(3, 4)) + 1j * rng.normal(size=(3, 4))
    M[0, 0] = 0.1
    M[0, 1] = -0.0
    text = dumps_matrix(M)
    back, kind = loads_matrix(text)
    assert kind == "general"
    assert np.array_equal(back, M)
    assert dumps_matrix(back) == text
    p = tmp_path / "m.json"
    save_matrix(p, back)
    assert dumps_matrix(load_matrix(p)) == text


@pytest.mark.parametrize(
    "text, where",
    [
        ("{", "1:2"),
        ('{"rows": 1, "cols": 1}', "entries"),
        ('{"rows": 0, "cols": 1, "entries": []}', "rows"),
        ('{"rows": 1, "cols": 2, "entries": [[1, 0]]}', "entries"),
        ('{"rows": 1, "cols": 1, "entries": [[1]]}', "entries[0]"),
        ('{"rows": 1, "cols": 1, "entries": [[1, 0]], "kind": "weird"}', "kind"),
    ],
)
def test_parse_errors(text, where):
    with pytest.raises(ParseError) as info:
        loads_matrix(text)
    assert where in str(info.value)


def test_kind_violations():
    with pytest.raises(KindViolation):
        loads_matrix(dumps_matrix(np.array([[1, 2], [0, 1]]), "hermitian"))
    with pytest.raises(KindViolation):
        loads_matrix(dumps_matrix(np.diag([1.0, -1.0]), "metric"))


def test_solve_diag_verify_transform(files, capsys):
    d, A, B = files
    eta = d / "eta.json"
    code, out, _ = _run(["solve-metric", "--input", str(A), "--out", str(eta)], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["pass"] and rep["results"]["found"]
    assert rep["inputs"][str(A)].startswith("sha256:")
    assert load_matrix(eta).shape == (2, 2)
    for cmd in (["diag"], ["verify"], ["transform", "--reference", str(B)]):
        code, out, _ = _run(cmd + ["--input", str(A), "--metric", str(eta)], capsys)
        assert code == 0, out
        assert all(r["pass"] for r in json.loads(out)["residuals"])


def test_metric_not_found_exit_1(tmp_path, capsys):
    A = tmp_path / "rot.json"
    save_matrix(A, [[0, 1], [-1, 0]])
    code, out, _ = _run(["solve-metric", "--input", str(A)], capsys)
    assert code == 1 and json.loads(out)["results"]["found"] is False


def test_wrong_metric_exit_1(files, capsys):
    d, A, _ = files
    I = d / "I.json"
    save_matrix(I, np.eye(2), "metric")
    code, out, _ = _run(["diag", "--input", str(A), "--metric", str(I)], capsys)
    assert code == 1 and not json.loads(out)["pass"]


def test_input_errors_exit_2(files, capsys):
    d, A, _ = files
    code, _, err = _run(["diag", "--input", str(d / "missing.json"), "--metric", str(A)], capsys)
    assert code == 2 and "--input" in err
    bad = d / "bad.json"
    bad.write_text("{not json")
    code, _, err = _run(["solve-metric", "--input", str(bad)], capsys)
    assert code == 2 and "--input" in err
    code, _, err = _run(["diag", "--input", str(A), "--metric", str(A)], capsys)
    assert code == 2 and "--metric" in err
    code, _, err = _run(["swanson", "verify", "--omega", "1", "--alpha", "0.4", "--beta", "0.7"], capsys)
    assert code == 2 and "Omega" in err
    code, _, _ = _run(["swanson", "nonsense"], capsys)
    assert code == 2


def test_swanson_spectrum_csv(capsys):
    code, out, _ = _run(
        ["swanson", "spectrum", "--omega", "2", "--alpha", "0.5", "--beta", "0.3", "-n", "5", "--format", "csv"],
        capsys,
    )
    rows = [line.split(",") for line in out.strip().splitlines()]
    assert code == 0 and rows[0] == ["n", "energy"]
    got = [round(float(r[1]), 8) for r in rows[1:]]
    assert got == [0.92195445, 2.76586334, 4.60977223, 6.45368112, 8.29759001]


def test_swanson_verify_hermitian_limit(capsys):
    code, out, _ = _run(["swanson", "verify", "--omega", "1", "--alpha", "0", "--beta", "0", "--trunc", "16"], capsys)
    assert code == 0 and json.loads(out)["pass"]


def test_swanson_wavefunction_and_expand(capsys):
    code, out, _ = _run(["swanson", "wavefunctions", "--points", "3", "--format", "csv", "--trunc", "16"], capsys)
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "x,U_0" and len(lines) == 4
    assert float(lines[2].split(",")[1]) == pytest.approx(0.9945109834380133)
    code, out, _ = _run(["swanson", "expand", "-n", "3", "--trunc", "32"], capsys)
    assert code == 0 and len(json.loads(out)["results"]["eta_coefficients"]) == 3


def test_seed_env(files, capsys, monkeypatch):
    d, A, _ = files
    eta = d / "eta.json"
    _run(["solve-metric", "--input", str(A), "--out", str(eta)], capsys)
    monkeypatch.setenv("METRIQ_SEED", "7")
    _, out, _ = _run(["verify", "--input", str(A), "--metric", str(eta)], capsys)
    assert json.loads(out)["results"]["seed"] == 7
    _, out, _ = _run(["verify", "--input", str(A), "--metric", str(eta), "--seed", "3"], capsys)
    assert json.loads(out)["results"]["seed"] == 3
    monkeypatch.setenv("METRIQ_SEED", "x")
    code, _, err = _run(["verify", "--input", str(A), "--metric", str(eta)], capsys)
    assert code == 2 and "METRIQ_SEED" in err


def test_console_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "metriq.cli", "swanson", "spectrum", "-n", "2"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"]["energies"][0] == pytest.approx(0.9219544457292888)
