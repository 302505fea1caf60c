import json
import subprocess
import sys
from pathlib import Path

import pytest

PKG = Path(__file__).resolve().parents[1]

ONE_COMPONENT = """CC
[rx1,bx2]
[gz2]
[bz1?p]
[gy1,ry2]
CC
"""

SIM_CONFIG = """\
label: smoke
model: |
  CC
  [rx1,bx2]
  [gz2]
  [bz1?p]
  [gy1,ry2]
  CC
L: 3
reps: 2
periods: 6
seed: 5
observables: [X3]
points:
  - [0.5]
"""


def run_cli(*argv):
    return subprocess.run(
        [sys.executable, "-m", "dacc.cli", *argv],
        capture_output=True, text=True, cwd=PKG)


def test_algebra_queries():
    r = run_cli("algebra", "class", "(rgb)(xy)")
    assert r.returncode == 0
    data = json.loads(r.stdout)
    assert data["class"] == "C{(ccc)(ss)}"
    assert data["log2_d2"] == 4
    r = run_cli("algebra", "transition", "(rxgybz)", "(rgb)")
    assert json.loads(r.stdout)["transition_map"] == "(rz)(gx)(by)"
    r = run_cli("algebra", "fuse", "rx", "rz")
    assert json.loads(r.stdout)["result"] == "ry"
    r = run_cli("algebra", "lemma1", "all")
    assert json.loads(r.stdout) == {"checked": 72, "passed": True}


def test_algebra_bad_input_exit_1():
    r = run_cli("algebra", "class", "(rgx)")
    assert r.returncode == 1
    assert "error" in r.stderr


def test_sequence_commands(tmp_path):
    f = tmp_path / "seq.txt"
    f.write_text(ONE_COMPONENT)
    r = run_cli("sequence", "corners", str(f))
    assert r.returncode == 0
    data = json.loads(r.stdout)
    assert data["corners"] == {"0": "(rxgybz)", "1": "(rgb)"}
    r = run_cli("sequence", "measured-anyon", str(f), "p")
    assert r.stdout.strip() == "rx*gz"
    clean = tmp_path / "clean.txt"
    clean.write_text("CC\n[rx1,bx2]\n[bz1,gz2]\n[gy1,ry2]\nCC\n")
    r = run_cli("sequence", "compute", str(clean))
    assert r.stdout.strip() == "(rgb)"
    r = run_cli("sequence", "validate", str(clean))
    assert r.returncode == 0 and json.loads(r.stdout)["ok"]
    bad = tmp_path / "bad.txt"
    bad.write_text("CC\n[rx1,bx2]\n[gx1]\nCC\n")
    r = run_cli("sequence", "validate", str(bad))
    assert r.returncode == 2
    assert json.loads(r.stdout)["kind"] == "intralayer"


def test_sequence_synthesize_roundtrip(tmp_path):
    r = run_cli("sequence", "synthesize", "(rgb)(xzy)")
    assert r.returncode == 0
    f = tmp_path / "synth.txt"
    f.write_text(r.stdout)
    r2 = run_cli("sequence", "compute", str(f))
    assert r2.stdout.strip() == "(rgb)(xzy)"


def test_graph_commands(tmp_path):
    r = run_cli("graph", "adjacent", "id", "(ry)(gx)(bz)")
    assert json.loads(r.stdout)["adjacent"] is True
    r = run_cli("graph", "distance", "(rb)", "(rgb)(xy)")
    assert json.loads(r.stdout)["distance"] == 2
    r = run_cli("graph", "distance", "id", "(rg)")
    assert json.loads(r.stdout)["distance"] == "inf"
    r = run_cli("graph", "logical", "(rxgybz)", "(rgb)")
    data = json.loads(r.stdout)
    assert data["logically_connected"] is True and data["table"] == "F"
    out = tmp_path / "d.csv"
    r = run_cli("graph", "export-distances", str(out))
    assert r.returncode == 0
    assert out.read_text().count("\n") == 73


def test_simulate_and_fit(tmp_path):
    cfg = tmp_path / "cfg.yaml"
    cfg.write_text(SIM_CONFIG)
    outdir = tmp_path / "results"
    r = run_cli("simulate", str(cfg), "--out", str(outdir))
    assert r.returncode == 0, r.stderr
    csv_path = outdir / "smoke.csv"
    assert csv_path.exists()
    header = csv_path.read_text().splitlines()[0]
    assert header == "L,p1,seed,t,S,G_X3"
    summary = json.loads((outdir / "smoke.json").read_text())
    assert summary["points"][0]["p"] == [0.5]
    r = run_cli("fit", str(csv_path))
    assert r.returncode == 0
    fit = json.loads(r.stdout)
    assert fit["points"][0]["L"] == 3


def test_simulate_bad_config_exit_1(tmp_path):
    cfg = tmp_path / "bad.yaml"
    cfg.write_text("model: CC\nL: 3\n")
    r = run_cli("simulate", str(cfg))
    assert r.returncode == 1


def test_percolation_command(tmp_path):
    out = tmp_path / "perc.csv"
    r = run_cli("percolation", "--kind", "triangular", "--sizes", "8", "16",
                "--samples", "200", "--grid", "11", "--out", str(out))
    assert r.returncode == 0, r.stderr
    data = json.loads(r.stdout)
    assert "p_c" in data
    lines = out.read_text().splitlines()
    assert lines[0] == "kind,L,p,wrap_fraction,err"
    assert len(lines) == 1 + 2 * 11
