"""Regenerate the shipped sample data with the dacc CLI.

Run from this directory:  python3 generate.py
Produces entropy/, tau_grid/ and collapse/ record sets used by the
figure-script tests.  Runtimes are a few minutes on one core.
"""

import subprocess
import sys
from pathlib import Path

HERE = Path(__file__).resolve().parent

ONE_COMPONENT = """\
  CC
  [rx1,bx2]
  [gz2]
  [bz1?p]
  [gy1,ry2]
  CC
"""

EX1 = """\
  CC
  [rx1,bx2]
  [gz1,gy2]
  [by1?p1]
  [rx1,bx2]
  [gy2?p2]
  CC
"""

ENTROPY_CFG = f"""\
label: entropy
model: |
{ONE_COMPONENT}
L: 9
reps: 40
periods: 96
seed: 11
points: [[0.1], [0.35], [0.9]]
"""

TAU_GRID_CFG = f"""\
label: tau_grid
model: |
{EX1}
L: 6
reps: 24
periods: 48
seed: 12
grid: [[0.0, 0.25, 0.5, 0.75, 1.0], [0.0, 0.25, 0.5, 0.75, 1.0]]
"""


def collapse_cfg(L):
    return f"""\
label: collapse_L{L}
model: |
{EX1}
L: {L}
reps: 60
periods: 96
seed: {200 + L}
trajectory: {{from: [0.0, 0.26], to: [0.0, 0.44], num: 10}}
"""


def simulate(cfg_text, outdir):
    cfg = HERE / "_tmp_config.yaml"
    cfg.write_text(cfg_text)
    subprocess.run([sys.executable, "-m", "dacc.cli", "simulate", str(cfg),
                    "--out", str(outdir)], check=True)
    cfg.unlink()


def main():
    simulate(ENTROPY_CFG, HERE / "entropy")
    simulate(TAU_GRID_CFG, HERE / "tau_grid")
    for L in (6, 9, 12):
        simulate(collapse_cfg(L), HERE / "collapse")


if __name__ == "__main__":
    main()
