import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from ch_ist.cli import main
from ch_ist.scattering import SpectralData


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify_json(capsys):
    code, out, _ = run(capsys, "classify", "--xi", "1")
    info = json.loads(out)
    assert code == 0
    assert info["case"] == "II" and info["n_xi"] == 2


def test_classify_sign_grid(tmp_path, capsys):
    path = tmp_path / "sign.csv"
    code, _, _ = run(capsys, "classify", "--xi", "-0.1", "--sign-grid", str(path), "--re=-1:1:5", "--im", "0.5:1:3")
    rows = list(csv.DictReader(open(path)))
    assert code == 0 and len(rows) == 14  # i/2 is a pole of theta and is skipped
    assert {r["sign"] for r in rows} <= {"-1", "0", "1"}


def test_domain_error_exit_code(capsys):
    code, _, err = run(capsys, "classify", "--xi", "2")
    assert code == 2 and "error" in err


def test_validation_error_exit_code(capsys, tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("x,q0\n0,1\n")
    code, _, _ = run(capsys, "scatter", "--input", str(bad), "--out", str(tmp_path / "s.json"))
    assert code == 3
    code, _, _ = run(capsys, "soliton", "--a", "0.7", "--t", "0", "--x", "0:1:3")
    assert code == 3


def test_soliton_csv_precision(capsys):
    code, out, _ = run(capsys, "soliton", "--a", "0.25", "--t", "0", "--x=-1:1:3")
    lines = out.strip().splitlines()
    assert code == 0
    assert lines[0] == "x,t,q,y,alpha"
    q = lines[2].split(",")[2]
    assert float(q) == pytest.approx(0.6666666666666666, rel=1e-12) or len(q.replace(".", "")) >= 15


@pytest.fixture
def spec_file(tmp_path, smooth_spec):
    path = tmp_path / "spec.json"
    smooth_spec.save(path)
    return path


def test_scatter_writes_spectral_json(tmp_path, capsys):
    x = np.linspace(-30, 30, 3841)
    path = tmp_path / "datum.csv"
    np.savetxt(path, np.column_stack([x, 0.05 * np.exp(-x * x)]), delimiter=",", header="x,q0", comments="")
    out = tmp_path / "spec.json"
    code, _, _ = run(capsys, "scatter", "--input", str(path), "--out", str(out), "--nz", "20")
    spec = SpectralData.load(out)
    # any positive bump binds a weak eigenvalue close to 0
    assert code == 0 and len(spec.poles) == 1 and spec.poles[0].a < 0.05
    assert 0 < np.max(np.abs(spec.r)) < 0.1


def test_asymptote(spec_file, capsys):
    code, out, _ = run(capsys, "asymptote", "--spec", str(spec_file), "--t", "20", "--x", "0:40:5")
    rows = list(csv.DictReader(out.strip().splitlines()))
    assert code == 0 and len(rows) == 5
    assert set(rows[0]) == {"x", "t", "q_leading", "correction", "q_total", "order_tag"}


def test_asymptote_small_t(spec_file, capsys):
    code, _, _ = run(capsys, "asymptote", "--spec", str(spec_file), "--t", "1", "--x", "0:1:2")
    assert code == 2


def test_sweep_matches_asymptote(spec_file, capsys, monkeypatch):
    monkeypatch.setenv("CH_IST_THREADS", "2")
    _, swept, _ = run(capsys, "sweep", "--spec", str(spec_file), "--t", "20", "30", "--x", "0:40:3")
    _, single, _ = run(capsys, "asymptote", "--spec", str(spec_file), "--t", "30", "--x", "0:40:3")
    assert swept.strip().splitlines()[-3:] == single.strip().splitlines()[-3:]
    monkeypatch.setenv("CH_IST_THREADS", "zero")
    code, _, _ = run(capsys, "sweep", "--spec", str(spec_file), "--t", "20", "--x", "0:40:3")
    assert code == 3


def test_evolve(tmp_path, capsys):
    x = np.linspace(-20, 20, 401)
    path = tmp_path / "q0.csv"
    np.savetxt(path, np.column_stack([x, 0.1 * np.exp(-x * x)]), delimiter=",", header="x,q0", comments="")
    out, cons = tmp_path / "traj.csv", tmp_path / "cons.csv"
    code, _, _ = run(capsys, "evolve", "--input", str(path), "--t-final", "0.1", "--L", "20", "--N", "256",
                     "--out", str(out), "--conserved", str(cons), "--stride", "8")
    assert code == 0
    assert len(list(csv.DictReader(open(cons)))) == 2
    assert len(list(csv.DictReader(open(out)))) == 2 * 32


def test_verify_phase_console_script():
    res = subprocess.run([sys.executable, "-m", "ch_ist.cli", "verify", "--suite", "phase"], capture_output=True, text=True)
    assert res.returncode == 0
    assert "FAIL" not in res.stdout
