from __future__ import annotations

import json
import subprocess
import sys

import pytest

from qtbeta.cli import EXIT_CONFIG, EXIT_OK, EXIT_TOL, ConfigError, emit_plot_data, main, run

QUAD = {"alpha": "1", "beta": "-2", "gamma": {"gauss": [[0, 1], [1, 1]]}, "delta": {"gauss": [[0, 1], [-1, 1]]},
        "series": "degenerate"}


@pytest.fixture
def files(tmp_path):
    quad = tmp_path / "degenerate.json"
    quad.write_text(json.dumps(QUAD))
    params = tmp_path / "p.json"
    params.write_text(json.dumps({"q": "1/2", "t": "1/3", "N": 1, "quad": QUAD}))
    zw = tmp_path / "zw.json"
    zw.write_text(json.dumps({"tau": 1, "z": [-0.5, 1], "w": [4, 0.5]}))
    return {"quad": str(quad), "params": str(params), "zw": str(zw), "dir": tmp_path}


def test_poly_macdonald():
    report, code = run(["poly", "macdonald", "--nu", "2,1", "--N", "3", "--q", "1/2", "--t", "1/3"])
    assert code == EXIT_OK
    terms = {tuple(t["lambda"]): t["coef"] for t in report["results"]["polynomial"]["terms"]}
    assert terms[(2, 1)] == {"rat": [1, 1]}


def test_verify_stability(files):
    _, code = run(["verify", "stability", "--max-size", "4", "--q", "1/2", "--t", "1/3", "--quad", files["quad"]])
    assert code == EXIT_OK


def test_verify_z1(files):
    report, code = run(["verify", "z1", "--params", files["params"]])
    assert code == EXIT_OK and report["residuals"]["z1"] < 1e-10


def test_coeff_and_symmetry(files):
    report, code = run(["coeff", "pi", "--lam", "1", "--mu", "", "--quad", files["quad"]])
    assert code == EXIT_OK and "rat" in report["results"]["value"]
    _, code = run(["verify", "symmetry", "--max-size", "2", "--quad", files["quad"]])
    assert code == EXIT_OK


def test_tolerance_failure_exit_code(files):
    _, code = run(["degenerate", "discrete-coherency", "--params", files["zw"], "--N", "2", "--window", "40",
                   "--match-tol", "1e-10"])
    assert code == EXIT_OK
    # the lattice sums cannot reach a 1e-30 relative match in double precision
    _, code = run(["verify", "z1", "--params", files["params"], "--match-tol", "1e-30"])
    assert code == EXIT_TOL


def test_config_errors(files):
    assert run(["verify", "nonsense"])[1] == EXIT_CONFIG
    assert run(["verify", "z1"])[1] == EXIT_CONFIG
    assert run(["verify", "z1", "--params", str(files["dir"] / "missing.json")])[1] == EXIT_CONFIG


def test_csv_is_byte_stable(files, capsys):
    out = files["dir"] / "a.csv"
    argv = ["degenerate", "limit-discrete", "--params", files["zw"], "--nu", "1", "--q-seq", "0.8,0.9",
            "--out", "csv", "--output", str(out)]
    assert main(argv) == EXIT_OK
    first = out.read_bytes()
    assert main(argv) == EXIT_OK
    assert out.read_bytes() == first
    assert first.decode().splitlines()[0] == "q,abs_error"


def test_plot_data_needs_series():
    with pytest.raises(ConfigError):
        emit_plot_data({"results": {}})


def test_help_lists_every_command():
    out = subprocess.run([sys.executable, "-m", "qtbeta.cli", "--help"], capture_output=True, text=True).stdout
    for cmd in ("poly", "coeff", "ensemble", "verify", "degenerate", "sample", "probe"):
        assert cmd in out


def test_sample_reproducible(files):
    a, _ = run(["sample", "--params", files["params"], "--seed", "3", "--count", "5"])
    b, _ = run(["sample", "--params", files["params"], "--seed", "3", "--count", "5"])
    assert a["results"] == b["results"]
