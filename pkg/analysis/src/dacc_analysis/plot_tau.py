"""Purification-timescale heatmap over a two-parameter grid.

Consumes the fit/summary JSON (per-point tau values) produced by the
simulator; rejects scans that do not form a 2D grid.
Usage: dacc-plot-tau INDIR OUTDIR"""

from __future__ import annotations

import argparse
from pathlib import Path

import numpy as np

from .loader import SchemaError, load_bundle, summary_points


def tau_grid(bundle):
    """Figure data: (p1 axis, p2 axis, tau matrix) from JSON summaries."""
    pts = summary_points(bundle)
    if not pts:
        raise SchemaError("no JSON summary points found")
    coords = [p for (_, p, _) in pts]
    if any(len(p) != 2 for p in coords):
        raise SchemaError("tau heatmap needs a 2-parameter model")
    xs = sorted({p[0] for p in coords})
    ys = sorted({p[1] for p in coords})
    if len(xs) < 2 or len(ys) < 2 or len(pts) != len(xs) * len(ys):
        raise SchemaError("points do not form a 2D grid")
    grid = np.full((len(ys), len(xs)), np.nan)
    for (_, (x, y), entry) in pts:
        tau = entry.get("tau")
        if tau is not None and np.isfinite(tau):
            grid[ys.index(y), xs.index(x)] = tau
    return np.array(xs), np.array(ys), grid


def render(xs, ys, grid, outpath: Path, cap=None):
    from .figstyle import plt
    fig, ax = plt.subplots()
    shown = grid.copy()
    if cap is None:
        finite = shown[np.isfinite(shown)]
        cap = float(finite.max()) if finite.size else 1.0
    shown = np.where(np.isfinite(shown), np.minimum(shown, cap), cap)
    im = ax.pcolormesh(xs, ys, shown, shading="nearest", cmap="viridis_r")
    fig.colorbar(im, ax=ax, label="tau = 1/Gamma (periods, capped)")
    ax.set_xlabel("p1")
    ax.set_ylabel("p2")
    fig.savefig(outpath)
    plt.close(fig)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("indir")
    ap.add_argument("outdir")
    args = ap.parse_args(argv)
    indir, outdir = Path(args.indir), Path(args.outdir)
    inputs = sorted(indir.glob("*.json"))
    if not inputs:
        raise SystemExit(f"no JSON summaries in {indir}")
    bundle = load_bundle(inputs)
    xs, ys, grid = tau_grid(bundle)
    outdir.mkdir(parents=True, exist_ok=True)
    out = outdir / "tau_heatmap.png"
    render(xs, ys, grid, out)
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
