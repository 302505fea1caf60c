"""Finite-size scaling collapse of tau across system sizes.

Consumes fit JSON points {L, p, tau}; plots ln(tau) against
(p - p_c) L^(1/nu) and reports the local-interpolation collapse
residual for the chosen exponents.
Usage: dacc-plot-collapse INDIR OUTDIR [--p-c 0.346 --nu 1.31]"""

from __future__ import annotations

import argparse
import json
from pathlib import Path

import numpy as np

from .loader import SchemaError, load_bundle, summary_points


def collapse_points(bundle, scan_axis=-1):
    """(L, p, ln tau) samples from summaries, finite taus only."""
    pts = []
    for (L, point, entry) in summary_points(bundle):
        tau = entry.get("tau")
        if L is None or tau is None or not np.isfinite(tau) or tau <= 0:
            continue
        pts.append((int(L), float(point[scan_axis]), float(np.log(tau))))
    sizes = {L for (L, _, _) in pts}
    if len(sizes) < 2:
        raise SchemaError("scaling collapse needs at least 2 system sizes")
    return pts


def collapse_residual(points, p_c, nu):
    """Mean squared distance of each sample to the interpolated master
    curve built from the other sizes (dimensionless)."""
    xs = np.array([(p - p_c) * L ** (1.0 / nu) for (L, p, _) in points])
    ys = np.array([y for (_, _, y) in points])
    Ls = np.array([L for (L, _, _) in points])
    total, count = 0.0, 0
    for i in range(len(points)):
        mask = Ls != Ls[i]
        if not mask.any():
            continue
        xo, yo = xs[mask], ys[mask]
        order = np.argsort(xo)
        xo, yo = xo[order], yo[order]
        if not (xo[0] <= xs[i] <= xo[-1]):
            continue
        y_hat = np.interp(xs[i], xo, yo)
        total += (ys[i] - y_hat) ** 2
        count += 1
    return total / max(count, 1)


def render(points, p_c, nu, outpath: Path):
    from .figstyle import COLORS, plt
    fig, ax = plt.subplots()
    sizes = sorted({L for (L, _, _) in points})
    for k, L in enumerate(sizes):
        xs = [(p - p_c) * L ** (1.0 / nu) for (sz, p, _) in points if sz == L]
        ys = [y for (sz, _, y) in points if sz == L]
        order = np.argsort(xs)
        ax.plot(np.array(xs)[order], np.array(ys)[order], "o-",
                ms=4, color=COLORS[k % len(COLORS)], label=f"L={L}")
    resid = collapse_residual(points, p_c, nu)
    ax.set_xlabel(rf"$(p - {p_c:.3f})\,L^{{1/{nu:.2f}}}$")
    ax.set_ylabel(r"$\ln\,\tau$")
    ax.set_title(f"collapse residual = {resid:.4f}")
    ax.legend(loc="best")
    fig.savefig(outpath)
    plt.close(fig)
    return resid


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("indir")
    ap.add_argument("outdir")
    ap.add_argument("--p-c", dest="p_c", type=float, default=0.346)
    ap.add_argument("--nu", type=float, default=1.31)
    ap.add_argument("--scan-axis", type=int, default=-1)
    args = ap.parse_args(argv)
    indir, outdir = Path(args.indir), Path(args.outdir)
    inputs = sorted(indir.glob("*.json"))
    if not inputs:
        raise SystemExit(f"no JSON summaries in {indir}")
    bundle = load_bundle(inputs)
    points = collapse_points(bundle, args.scan_axis)
    outdir.mkdir(parents=True, exist_ok=True)
    out = outdir / "collapse.png"
    resid = render(points, args.p_c, args.nu, out)
    report = {"p_c": args.p_c, "nu": args.nu, "residual": resid,
              "figure": str(out)}
    (outdir / "collapse_residual.json").write_text(json.dumps(report, indent=1))
    print(json.dumps(report))


if __name__ == "__main__":
    main()
