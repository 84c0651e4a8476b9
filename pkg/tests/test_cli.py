import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from siegel_toeplitz.cli import main
from siegel_toeplitz.sampling import parse_grid, sample
from siegel_toeplitz.spectral import CompactPoint, phi_a


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


# --- sample -----------------------------------------------------------------------

def test_sample_phi_plus(capsys):
    code, out, _ = run(["sample", "--case", "phi-plus", "--n", "2", "--grid", "t1=-4:4:17"], capsys)
    assert code == 0
    data = rows(out)
    assert len(data) == 17 * 4
    at0 = {(r["j"], r["k"]): float(r["value"]) for r in data if float(r["t1"]) == 0.0}
    assert at0[("1", "1")] == pytest.approx(0.5, abs=1e-15)
    assert at0[("1", "2")] == pytest.approx(0.3989423, abs=1e-7)


def test_sample_b_constant_is_identity(capsys):
    code, out, _ = run(["sample", "--case", "b-1n", "--symbol", "const:1", "--n", "3",
                        "--grid", "t2=0.1:10:5"], capsys)
    assert code == 0
    data = rows(out)
    assert len(data) == 5 * 9
    for r in data:
        assert r["t1"] == ""
        assert float(r["value"]) == pytest.approx(1.0 if r["j"] == r["k"] else 0.0, abs=1e-9)


def test_sample_phi_a_right_edge(capsys):
    code, out, _ = run(["sample", "--case", "phi-a", "--symbol", "sigmoid", "--n", "1",
                        "--grid", "t1=-1:1:3,t2=0.5:2:4", "--include-boundary"], capsys)
    assert code == 0
    data = rows(out)
    kinds = {r["kind"] for r in data}
    assert kinds == {"interior", "left", "right", "bottom", "top"}
    (edge,) = [r for r in data if r["kind"] == "right" and r["t2"] == "2.0"]
    assert edge["t1"] == "+inf"
    assert abs(float(edge["value"]) + 1 / 3) < 1e-12
    assert any(r["t1"] == "-inf" for r in data) and any(r["t2"] == "+inf" for r in data)


def test_sample_json(capsys):
    code, out, _ = run(["sample", "--case", "phi-a", "--symbol", "chi+", "--n", "2",
                        "--grid", "t1=-1:1:2,t2=1:2:2", "--include-boundary",
                        "--format", "json"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["case"] == "phi-a" and doc["n"] == 2 and doc["symbol"] == "chi+"
    assert len(doc["samples"]) == 4 * 4
    first = doc["samples"][0]
    assert first["point"] == {"kind": "left", "t1": "-inf", "t2": 0.0}
    assert np.allclose(first["matrix"], np.eye(2))


def test_sample_default_grid_includes_boundary(tmp_path):
    out = tmp_path / "b.csv"
    assert main(["sample", "--case", "b-1n", "--symbol", "b:ind01", "--n", "2",
                 "--out", str(out)]) == 0
    data = rows(out.read_text())
    assert len(data) == 43 * 4
    assert {r["kind"] for r in data} == {"interior", "bottom", "top"}


def test_csv_round_trip_is_bit_identical(tmp_path):
    out = tmp_path / "phi.csv"
    grid_text = "t1=-2:2:5,t2=0.1:10:3:log"
    assert main(["sample", "--case", "phi-a", "--symbol", "pc:witch+1*chi+", "--n", "2",
                 "--grid", grid_text, "--include-boundary", "--out", str(out)]) == 0
    from siegel_toeplitz.symbols import parse_symbol
    a = parse_symbol("pc:witch+1*chi+")
    for r in rows(out.read_text()):
        p = CompactPoint.at(float(r["t1"]), float(r["t2"]))
        assert p.kind == r["kind"]
        M = phi_a(a, 2, p).entries
        assert float(r["value"]) == M[int(r["j"]) - 1, int(r["k"]) - 1]
    again = tmp_path / "again.csv"
    main(["sample", "--case", "phi-a", "--symbol", "pc:witch+1*chi+", "--n", "2",
          "--grid", grid_text, "--include-boundary", "--out", str(again)])
    assert again.read_text() == out.read_text()


@pytest.mark.parametrize("case, symbol", [("a-1n", "sigmoid"), ("a-n1", "witch"),
                                          ("c-1n", "sigmoid*b:inv1p"), ("c-n1", "b:ind01")])
def test_sample_other_cases(case, symbol, capsys):
    code, out, _ = run(["sample", "--case", case, "--symbol", symbol, "--n", "2",
                        "--grid", "t1=-1:1:2,t2=0.5:1:2"], capsys)
    assert code == 0
    assert len(rows(out)) == 4 * 4
    ref = sample(case, symbol, 2, parse_grid("t1=-1:1:2,t2=0.5:1:2"))
    assert float(rows(out)[1]["value"]) == ref[0].entries[0, 1]


def test_sample_plot(tmp_path):
    png = tmp_path / "phi.png"
    assert main(["sample", "--case", "phi-a", "--symbol", "sigmoid", "--n", "2",
                 "--grid", "t1=-2:2:5,t2=0.1:10:4:log", "--out", str(tmp_path / "s.csv"),
                 "--plot", str(png)]) == 0
    assert png.stat().st_size > 0
    png = tmp_path / "b.png"
    assert main(["sample", "--case", "b-1n", "--symbol", "b:inv1p", "--n", "2",
                 "--out", str(tmp_path / "b.csv"), "--plot", str(png)]) == 0
    assert png.stat().st_size > 0


# --- eigencurves ------------------------------------------------------------------

def test_eigencurves_scalar_matches_erfc(tmp_path):
    out = tmp_path / "ev.csv"
    assert main(["eigencurves", "--n", "1", "--grid", "t1=-4:4:33", "--out", str(out)]) == 0
    data = rows(out.read_text())
    assert len(data) == 35
    for r in data:
        t = float(r["t"])
        ref = 1.0 if t == -math.inf else 0.0 if t == math.inf else math.erfc(t) / 2
        assert abs(float(r["lambda"]) - ref) < 1e-10
    assert (tmp_path / "ev_B.csv").exists()


def test_eigencurves_table(tmp_path, capsys):
    out = tmp_path / "ev.csv"
    png = tmp_path / "ev.png"
    assert main(["eigencurves", "--n", "3", "--out", str(out), "--plot", str(png)]) == 0
    data = rows(out.read_text())
    lam = [float(r["lambda"]) for r in data]
    assert min(lam) >= 0.0 and max(lam) <= 1.0
    assert all(float(r["lambda"]) == 1.0 for r in data if r["t"] == "-inf")
    assert all(float(r["lambda"]) == 0.0 for r in data if r["t"] == "+inf")
    B = rows((tmp_path / "ev_B.csv").read_text())
    assert len(B) == 43 * 9
    assert png.stat().st_size > 0


# --- separate ---------------------------------------------------------------------

def test_separate_examples(capsys):
    code, out, _ = run(["separate", "--p", "0,1", "--q", "0,4"], capsys)
    assert code == 0 and out.startswith("separable, c2=-12")
    code, out, _ = run(["separate", "--p", "0.5,2", "--q", "0.5,2"], capsys)
    assert code == 0 and out.startswith("not separable")
    code, out, _ = run(["separate", "--p", "0,0.25", "--q", "0,0.25", "--v", "1,0",
                        "--w", "0,1", "--n", "2"], capsys)
    assert code == 0 and out.splitlines()[-1] == "states differ"
    code, out, _ = run(["separate", "--p", "0,0.25", "--q", "0,1", "--v", "1,1j",
                        "--w", "1j,-1"], capsys)
    assert code == 0 and out.splitlines()[-1] == "states coincide"


# --- verify and exit codes ------------------------------------------------------------

def test_verify_suites_pass(capsys):
    for suite in ("specfun", "spectral", "algebra"):
        code, out, _ = run(["verify", "--suite", suite], capsys)
        assert code == 0, out
        assert "all checks passed" in out


def test_verify_json_and_failure(capsys):
    code, out, _ = run(["verify", "--suite", "specfun", "--format", "json",
                        "--override", "hermite-orthonormality=0"], capsys)
    assert code == 1
    doc = json.loads(out)
    assert doc["passed"] is False
    assert [c["name"] for c in doc["checks"] if not c["passed"]] == ["hermite-orthonormality"]


@pytest.mark.parametrize("argv", [
    ["sample", "--case", "phi-a", "--n", "2"],
    ["sample", "--case", "phi-a", "--symbol", "cosine"],
    ["sample", "--case", "phi-a", "--symbol", "sigmoid", "--grid", "t1=1:0:3"],
    ["sample", "--case", "phi-a", "--symbol", "sigmoid", "--grid", "t3=0:1:2"],
    ["sample", "--case", "b-1n", "--symbol", "sigmoid"],
    ["sample", "--case", "a-1n", "--symbol", "sigmoid", "--include-boundary"],
    ["sample", "--case", "phi-plus", "--n", "13"],
    ["sample", "--case", "nope"],
    ["eigencurves", "--grid", "t1=0:1:1"],
    ["verify", "--override", "oops"],
    ["separate", "--p", "0", "--q", "0,1"],
    ["separate", "--p", "0,0", "--q", "0,1"],
    ["separate", "--p", "0,1", "--q", "0,1", "--v", "1,0"],
])
def test_usage_errors_exit_2(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as exc:  # argparse rejects some inputs itself
        code = exc.code
    assert code == 2


def test_evaluation_failure_exit_1(capsys, monkeypatch):
    import siegel_toeplitz.cli as cli

    def boom(*args, **kwargs):
        raise RuntimeError("quadrature diverged")
    monkeypatch.setattr(cli, "sample", boom)
    code, _, err = run(["sample", "--case", "phi-plus"], capsys)
    assert code == 1 and "quadrature diverged" in err


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "siegel_toeplitz.cli", "separate",
                           "--p", "0,1", "--q", "0,4"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("separable")
