import json
import subprocess
import sys

import numpy as np
import pytest

from nonlocal_fourier import cli
from nonlocal_fourier.function_space import make_grid, read_csv, write_csv


@pytest.fixture
def fcsv(tmp_path):
    g = make_grid(np.pi, 64)
    p = tmp_path / "f.csv"
    write_csv(g.sample(lambda x: np.sin(x) ** 2 + 0.2j * np.cos(x)), p)
    return p


def run(*argv):
    return cli.main([str(a) for a in argv])


def test_delta_zero_constant(tmp_path):
    out = tmp_path / "d.csv"
    assert run("delta", "--preset", "zero", "--grid=-2,2,5,-1,1,3", "--out", out) == 0
    rows = cli.load_delta_csv(out)
    assert rows.shape == (15, 2) and np.all(rows[:, 1] == 1)


def test_delta_stdout(capsys):
    assert run("delta", "--preset", "antiperiodic", "--grid", "1,1,1,0,0,1") == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "re_lambda,im_lambda,re_delta,im_delta"
    assert abs(float(lines[1].split(",")[2])) < 1e-15


def test_spectrum_round_trip(tmp_path):
    out = tmp_path / "s.json"
    assert run("spectrum", "--preset", "antiperiodic", "--radius", 6, "--out", out) == 0
    R, N, sp = cli.load_spectrum_json(out)
    assert R == 6 and N == 6 and len(sp) == 6
    assert run("spectrum", "--preset", "empty", "--out", out) == 0
    assert cli.load_spectrum_json(out)[2] == []


def test_resolve_and_convolve(tmp_path, fcsv):
    out = tmp_path / "y.csv"
    assert run("resolve", "--n", 64, "--lambda", "0.3,0.1", "--f", fcsv, "--out", out) == 0
    y = read_csv(out, make_grid(np.pi, 64))
    assert y.sup_norm() > 0
    assert run("resolve", "--n", 64, "--lambda", "3,0", "--f", fcsv, "--out", out) == cli.EXIT_NUMERICAL
    assert run("convolve", "--n", 64, "--f", fcsv, "--g", fcsv, "--out", out) == 0


def test_expand_round_trip(tmp_path, fcsv):
    out = tmp_path / "c.json"
    assert run("expand", "--n", 64, "--preset", "double", "--radius", 4, "--f", fcsv,
               "--paranoid", "--out", out) == 0
    c = cli.load_coefficients(out)
    assert sorted(len(v) for v in c.blocks.values()) == [1, 1, 2]


def test_remainder_round_trip(tmp_path, fcsv):
    out = tmp_path / "r.csv"
    assert run("remainder", "--n", 64, "--f", fcsv, "--radii", "5,10", "--method", "coefficients",
               "--out", out) == 0
    rows = cli.load_remainder_csv(out)
    assert [r["R"] for r in rows] == [5.0, 10.0]
    assert set(rows[0]) == {"R", "weighted_norm", "sup_norm", "l2_norm"}


def test_deterministic(tmp_path, fcsv):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert run("diagnose", "--n", 64, "--radius", 5, "--seed", 3, "--out", p) == 0
    assert a.read_bytes() == b.read_bytes()
    rep = json.loads(a.read_text())
    assert rep["conditions"]["conminmax_holds"] is True


def test_config_errors(tmp_path, fcsv):
    assert run("spectrum", "--n", 4) == cli.EXIT_CONFIG
    assert run("delta", "--grid", "1,2") == cli.EXIT_CONFIG
    assert run("resolve", "--lambda", "x,y", "--f", fcsv) == cli.EXIT_CONFIG
    assert run("convolve", "--f", tmp_path / "missing.csv", "--g", fcsv) == cli.EXIT_CONFIG
    bad = tmp_path / "c.json"
    bad.write_text("{not json")
    assert run("spectrum", "--config", bad) == cli.EXIT_CONFIG


def test_sigma_file(tmp_path):
    s = tmp_path / "sigma.json"
    s.write_text(json.dumps({"kind": "indicator_i", "c": 1.0}))
    out = tmp_path / "s.json"
    assert run("spectrum", "--sigma", s, "--out", out) == 0
    assert cli.load_spectrum_json(out)[1] == 0


def test_verify_json(tmp_path):
    out = tmp_path / "v.json"
    assert run("verify", "--preset", "zero", "--n", 32, "--json", "--out", out) == 0
    rep = json.loads(out.read_text())
    assert rep["passed"] and all(c["passed"] for c in rep["checks"])


def test_entry_point_help():
    r = subprocess.run([sys.executable, "-m", "nonlocal_fourier.cli", "--help"], capture_output=True, text=True)
    assert r.returncode == 0 and "verify" in r.stdout


def test_verify_failure_exit_code(monkeypatch, capsys):
    from nonlocal_fourier.verify import Check, VerifyReport

    monkeypatch.setattr(cli, "run_verification",
                        lambda cfg: VerifyReport("x", [Check("ok", True), Check("broken", False, 1.0, 0.5)]))
    assert run("verify", "--preset", "zero") == cli.EXIT_VERIFY
    out = capsys.readouterr().out
    assert "[FAIL] broken" in out and "1/2 checks passed" in out


def test_verify_records_exceptions():
    from nonlocal_fourier.config import RunConfig
    from nonlocal_fourier.verify import _Suite

    s = _Suite(RunConfig(sigma="zero", n=16))
    s.run("boom", lambda: 1 / 0)
    assert not s.checks[0].passed and "ZeroDivisionError" in s.checks[0].detail
