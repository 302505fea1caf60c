"""Entropy-curve figure: mean S(t) with standard-error ribbons, one
curve per parameter point.  Usage: dacc-plot-entropy INDIR OUTDIR"""

from __future__ import annotations

import argparse
from pathlib import Path

import numpy as np

from .loader import ResultBundle, SchemaError, load_bundle


def entropy_curves(bundle: ResultBundle):
    """Figure data: {(L, point): (t, mean, sem)} for every point."""
    if not bundle.records:
        raise SchemaError("no records to plot")
    out = {}
    for (L, point) in sorted(bundle.records):
        ts, S = bundle.entropy_series(L, point)
        mean = S.mean(axis=0)
        sem = (S.std(axis=0, ddof=1) / np.sqrt(S.shape[0])
               if S.shape[0] > 1 else np.zeros_like(mean))
        out[(L, point)] = (ts, mean, sem)
    return out


def render(curves, outpath: Path):
    from .figstyle import COLORS, plt
    fig, ax = plt.subplots()
    for k, ((L, point), (ts, mean, sem)) in enumerate(sorted(curves.items())):
        color = COLORS[k % len(COLORS)]
        label = f"L={L}, p=({', '.join(f'{x:g}' for x in point)})"
        ax.plot(ts, mean, color=color, label=label)
        if sem.any():
            ax.fill_between(ts, mean - sem, mean + sem, color=color,
                            alpha=0.25, linewidth=0)
    ax.set_xlabel("period t")
    ax.set_ylabel("mean entropy S(t) [bits]")
    ax.set_ylim(bottom=-0.1)
    ax.legend(loc="best")
    fig.savefig(outpath)
    plt.close(fig)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("indir")
    ap.add_argument("outdir")
    args = ap.parse_args(argv)
    indir, outdir = Path(args.indir), Path(args.outdir)
    csvs = sorted(indir.glob("*.csv"))
    if not csvs:
        raise SystemExit(f"no CSV files in {indir}")
    bundle = load_bundle(csvs)
    curves = entropy_curves(bundle)
    outdir.mkdir(parents=True, exist_ok=True)
    out = outdir / "entropy_curves.png"
    render(curves, out)
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
