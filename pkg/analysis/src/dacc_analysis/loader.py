"""Reading and validating the simulator's CSV/JSON outputs.

The delimited schema is: L, p1..pm, seed, t, S, then one G_<name>
column per observable.  JSON summaries carry per-point statistics
(tau, Gamma, purified fraction, Fourier magnitudes).
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

REQUIRED = ("L", "seed", "t", "S")


class SchemaError(ValueError):
    """The input does not match the documented record schema."""


@dataclass
class ResultBundle:
    """Parsed records keyed by (L, point); raw rows kept as arrays."""

    params: tuple
    observables: tuple
    records: dict = field(default_factory=dict)
    summaries: list = field(default_factory=list)

    @property
    def sizes(self):
        return sorted({L for (L, _) in self.records})

    def points_for(self, L):
        return sorted(point for (sz, point) in self.records if sz == L)

    def entropy_series(self, L, point):
        """(t values, per-seed S matrix) for one (L, point)."""
        rows = self.records[(L, point)]
        seeds = sorted(rows)
        ts = sorted(rows[seeds[0]])
        S = np.array([[rows[s][t][0] for t in ts] for s in seeds])
        return np.array(ts), S


def load_bundle(paths) -> ResultBundle:
    """Load one or more record CSVs (plus optional JSON summaries)."""
    bundle = None
    for path in map(Path, paths):
        if path.suffix == ".json":
            if bundle is None:
                bundle = ResultBundle((), ())
            bundle.summaries.append(json.loads(path.read_text()))
            continue
        with open(path) as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None:
                raise SchemaError(f"{path} is empty")
            params = tuple(h for h in header
                           if h.startswith("p") and h[1:].isdigit())
            observables = tuple(h[2:] for h in header if h.startswith("G_"))
            missing = [c for c in REQUIRED if c not in header]
            if missing or not params:
                raise SchemaError(
                    f"{path} is missing required columns: "
                    f"{missing + (['p1'] if not params else [])}")
            col = {h: i for i, h in enumerate(header)}
            if bundle is None:
                bundle = ResultBundle(params, observables)
            elif bundle.params and bundle.params != params:
                raise SchemaError("mixed parameter arities across inputs")
            for row in reader:
                L = int(row[col["L"]])
                point = tuple(float(row[col[p]]) for p in params)
                seed = int(row[col["seed"]])
                t = int(row[col["t"]])
                S = float(row[col["S"]])
                gs = tuple(float(row[col["G_" + o]]) for o in observables)
                bundle.records.setdefault((L, point), {}).setdefault(
                    seed, {})[t] = (S,) + gs
    if bundle is None or (not bundle.records and not bundle.summaries):
        raise SchemaError("no input records found")
    return bundle


def summary_points(bundle: ResultBundle):
    """Flatten JSON summaries into (L, point, stats) tuples."""
    out = []
    for summary in bundle.summaries:
        L = summary.get("L")
        for entry in summary.get("points", []):
            point = tuple(entry.get("p", ()))
            out.append((entry.get("L", L), point, entry))
    return out
