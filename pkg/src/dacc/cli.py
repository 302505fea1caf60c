"""Command-line interface.

Subcommands: algebra (class/localized/IMS queries), sequence
(validate/compute/synthesize/corners/measured-anyon), graph
(adjacent/distance/logical/exports), simulate (run a YAML config),
percolation (oracle runs), fit (post-process record CSVs).

Exit codes: 0 ok, 1 configuration/usage error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np


def _read(path):
    return Path(path).read_text()


# -- algebra ------------------------------------------------------------------


def cmd_algebra(args):
    from .anyons import anyon_name, braid, fuse, parse_anyon, spin
    from .automorphisms import (Automorphism, invariant_mutual_semion_pairs,
                                lemma1_check, localized_anyons,
                                transition_map, all_automorphisms)
    out = {}
    if args.query == "class":
        phi = Automorphism.parse(args.arg[0])
        cls = phi.conjugacy_class()
        out = {"automorphism": str(phi), "class": cls.ascii_name,
               "cycle_type": str(list(cls.cycle_type)),
               "parity": cls.parity, "log2_d2": cls.log2_d2, "ims": cls.ims}
    elif args.query == "localized":
        phi = Automorphism.parse(args.arg[0])
        out = {"automorphism": str(phi),
               "localized": sorted(anyon_name(a)
                                   for a in localized_anyons(phi))}
    elif args.query == "ims":
        phi = Automorphism.parse(args.arg[0])
        pairs = invariant_mutual_semion_pairs(phi)
        out = {"automorphism": str(phi),
               "pairs": [[anyon_name(a), anyon_name(b)] for a, b in pairs]}
    elif args.query == "lemma1":
        targets = (all_automorphisms() if args.arg[0] == "all"
                   else [Automorphism.parse(args.arg[0])])
        reports = [lemma1_check(t) for t in targets]
        out = {"checked": len(reports),
               "passed": all(r.passed for r in reports)}
    elif args.query == "fuse":
        out = {"result": anyon_name(fuse(parse_anyon(args.arg[0]),
                                         parse_anyon(args.arg[1])))}
    elif args.query == "braid":
        out = {"phase": braid(parse_anyon(args.arg[0]),
                              parse_anyon(args.arg[1]))}
    elif args.query == "spin":
        out = {"spin": spin(parse_anyon(args.arg[0]))}
    elif args.query == "transition":
        tau = transition_map(Automorphism.parse(args.arg[0]),
                             Automorphism.parse(args.arg[1]))
        out = {"transition_map": str(tau),
               "class": tau.conjugacy_class().ascii_name}
    print(json.dumps(out, indent=1))


# -- sequence -------------------------------------------------------------------


def cmd_sequence(args):
    from .automorphisms import Automorphism
    from .sequences import (DisorderModel, MeasurementSequence,
                            check_reversible, compute_automorphism,
                            measured_anyon, parse_theory, synthesize_sequence)
    from .anyons import anyon_name
    if args.action == "validate":
        seq = MeasurementSequence.parse(_read(args.file))
        verdict = check_reversible(seq)
        print(json.dumps({
            "ok": bool(verdict), "kind": verdict.kind,
            "stage": verdict.stage_index, "detail": verdict.detail}))
        if not verdict:
            sys.exit(2)
    elif args.action == "compute":
        seq = MeasurementSequence.parse(_read(args.file))
        print(str(compute_automorphism(seq)))
    elif args.action == "corners":
        model = DisorderModel.parse(_read(args.file))
        table = model.corners_json()
        text = json.dumps({"parameters": list(model.parameters),
                           "corners": table}, indent=1)
        if args.out:
            Path(args.out).write_text(text)
        print(text)
    elif args.action == "synthesize":
        phi = Automorphism.parse(args.automorphism)
        kw = {}
        if args.first:
            kw["first"] = parse_theory(args.first)
        if args.last:
            kw["last"] = parse_theory(args.last)
        print(str(synthesize_sequence(phi, **kw)))
    elif args.action == "measured-anyon":
        model = DisorderModel.parse(_read(args.file))
        print(anyon_name(measured_anyon(model, args.parameter)))


# -- graph ---------------------------------------------------------------------


def cmd_graph(args):
    from .automorphisms import Automorphism
    from .fetgraph import (adjacent, distance, fet_graph,
                           logically_connected, witness_model)
    if args.action == "adjacent":
        a, b = map(Automorphism.parse, args.pair)
        print(json.dumps({"adjacent": adjacent(a, b)}))
    elif args.action == "distance":
        a, b = map(Automorphism.parse, args.pair)
        d = distance(a, b)
        print(json.dumps({"distance": d if d is not None else "inf"}))
    elif args.action == "logical":
        a, b = map(Automorphism.parse, args.pair)
        res = logically_connected(a, b)
        print(json.dumps({"logically_connected": res.connected,
                          "reason": res.reason, "table": res.table}))
    elif args.action == "witness":
        a, b = map(Automorphism.parse, args.pair)
        print(str(witness_model(a, b).sequence))
    elif args.action == "export-distances":
        Path(args.out).write_text(fet_graph().distance_csv())
        print(f"wrote {args.out}")
    elif args.action == "export-dot":
        Path(args.out).write_text(fet_graph().dot())
        print(f"wrote {args.out}")


# -- simulate ---------------------------------------------------------------------


def cmd_simulate(args):
    from .experiment import (ExperimentConfig, records_to_csv, summary_json,
                             sweep)
    config = ExperimentConfig.from_yaml(_read(args.config))
    records = sweep(config)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    csv_path = outdir / f"{config.label}.csv"
    csv_path.write_text(records_to_csv(config, records))
    summary = summary_json(config, records, s_inf=args.s_inf)
    json_path = outdir / f"{config.label}.json"
    json_path.write_text(json.dumps(summary, indent=1))
    print(f"wrote {csv_path} and {json_path}")


# -- percolation --------------------------------------------------------------------


def cmd_percolation(args):
    from .percolation import (estimate_crossing, kagome, percolation_csv,
                              triangular, wrap_thresholds, wrapping_curve)
    builder = {"triangular": triangular, "kagome": kagome}[args.kind]
    rows = []
    curves = {}
    for L in args.sizes:
        sl = builder(L)
        th = wrap_thresholds(sl, args.samples, seed=args.seed + L)
        ps = np.linspace(args.pmin, args.pmax, args.grid)
        curve = wrapping_curve(sl, th, ps)
        err = np.sqrt(np.maximum(curve * (1 - curve), 1.0 / args.samples)
                      / args.samples)
        curves[L] = (ps, curve)
        for p, f, e in zip(ps, curve, err):
            rows.append((args.kind, L, p, f, e))
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(percolation_csv(rows))
    result = {"csv": str(out)}
    if len(args.sizes) >= 2:
        est = estimate_crossing(builder, tuple(args.sizes), args.samples,
                                seed=args.seed)
        result.update({"p_c": est["p_c"], "nu": est["nu"],
                       "crossings": est["crossings"]})
    print(json.dumps(result, indent=1))


# -- fit --------------------------------------------------------------------------


def _load_records_csv(path):
    import csv as csvmod
    with open(path) as fh:
        reader = csvmod.DictReader(fh)
        rows = list(reader)
    if not rows:
        raise ValueError(f"{path} is empty")
    return rows


def cmd_fit(args):
    from .fits import (criticality_from_percolation_rows,
                       estimate_criticality, fit_decay)
    if args.percolation:
        rows = []
        for path in args.csv:
            for row in _load_records_csv(path):
                rows.append((row["kind"], row["L"], row["p"],
                             row["wrap_fraction"], row["err"]))
        p_c, nu, resid = criticality_from_percolation_rows(rows)
        text = json.dumps({"p_c": p_c, "nu": nu, "residual": resid}, indent=1)
        if args.out:
            Path(args.out).write_text(text)
        print(text)
        return
    by_point = {}
    for path in args.csv:
        for row in _load_records_csv(path):
            L = int(row["L"])
            pcols = sorted(k for k in row if k.startswith("p")
                           and k[1:].isdigit())
            point = tuple(float(row[k]) for k in pcols)
            key = (L, point)
            by_point.setdefault(key, {}).setdefault(
                int(row["seed"]), {})[int(row["t"])] = float(row["S"])
    taus = []
    samples = []
    for (L, point), seeds in sorted(by_point.items()):
        series = []
        finals = []
        for seed, ts in sorted(seeds.items()):
            s = np.array([ts[t] for t in sorted(ts)])
            series.append(s)
            finals.append(1.0 if s[-1] < s[0] else 0.0)
        mean_S = np.mean(series, axis=0)
        gamma, tau = fit_decay(mean_S, args.s_inf)
        taus.append({"L": L, "p": list(point), "Gamma": gamma,
                     "tau": tau if np.isfinite(tau) else None,
                     "purified_fraction": float(np.mean(finals))})
        scan_coord = point[args.scan_axis]
        samples.append((L, scan_coord, np.asarray(finals)))
    result = {"points": taus}
    sizes = {L for L, _, _ in samples}
    if args.criticality and len(sizes) >= 3:
        result["criticality"] = estimate_criticality(
            samples, seed=args.seed, n_boot=args.bootstrap)
    text = json.dumps(result, indent=1)
    if args.out:
        Path(args.out).write_text(text)
    print(text)


# -- entry point --------------------------------------------------------------------


def build_parser():
    ap = argparse.ArgumentParser(
        prog="dacc",
        description="Disordered dynamic-automorphism color code toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("algebra", help="anyon/automorphism queries")
    a.add_argument("query", choices=["class", "localized", "ims", "lemma1",
                                     "fuse", "braid", "spin", "transition"])
    a.add_argument("arg", nargs="+")
    a.set_defaults(func=cmd_algebra)

    s = sub.add_parser("sequence", help="measurement-sequence operations")
    sact = s.add_subparsers(dest="action", required=True)
    for name in ("validate", "compute"):
        p = sact.add_parser(name)
        p.add_argument("file")
        p.set_defaults(func=cmd_sequence)
    p = sact.add_parser("corners")
    p.add_argument("file")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sequence)
    p = sact.add_parser("synthesize")
    p.add_argument("automorphism")
    p.add_argument("--first")
    p.add_argument("--last")
    p.set_defaults(func=cmd_sequence)
    p = sact.add_parser("measured-anyon")
    p.add_argument("file")
    p.add_argument("parameter")
    p.set_defaults(func=cmd_sequence)

    g = sub.add_parser("graph", help="FET graph queries and exports")
    gact = g.add_subparsers(dest="action", required=True)
    for name in ("adjacent", "distance", "logical", "witness"):
        p = gact.add_parser(name)
        p.add_argument("pair", nargs=2)
        p.set_defaults(func=cmd_graph)
    for name in ("export-distances", "export-dot"):
        p = gact.add_parser(name)
        p.add_argument("out")
        p.set_defaults(func=cmd_graph)

    m = sub.add_parser("simulate", help="run a YAML experiment config")
    m.add_argument("config")
    m.add_argument("--out", default="results")
    m.add_argument("--s-inf", type=float, default=2.0)
    m.set_defaults(func=cmd_simulate)

    pc = sub.add_parser("percolation", help="bond-percolation oracle")
    pc.add_argument("--kind", choices=["triangular", "kagome"],
                    default="triangular")
    pc.add_argument("--sizes", type=int, nargs="+", default=[32, 64, 128])
    pc.add_argument("--samples", type=int, default=2000)
    pc.add_argument("--seed", type=int, default=0)
    pc.add_argument("--pmin", type=float, default=0.25)
    pc.add_argument("--pmax", type=float, default=0.65)
    pc.add_argument("--grid", type=int, default=41)
    pc.add_argument("--out", default="percolation.csv")
    pc.set_defaults(func=cmd_percolation)

    f = sub.add_parser("fit", help="post-process record CSVs")
    f.add_argument("csv", nargs="+")
    f.add_argument("--s-inf", dest="s_inf", type=float, default=2.0)
    f.add_argument("--criticality", action="store_true")
    f.add_argument("--percolation", action="store_true",
                   help="inputs are percolation-oracle CSVs")
    f.add_argument("--scan-axis", type=int, default=-1,
                   help="which parameter coordinate varies along the scan")
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--bootstrap", type=int, default=32)
    f.add_argument("--out")
    f.set_defaults(func=cmd_fit)
    return ap


def main(argv=None):
    from .experiment import ConfigError
    from .sequences import SequenceError
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        raise SystemExit(1 if exc.code not in (0, None) else 0)
    try:
        args.func(args)
    except (ConfigError, FileNotFoundError, KeyError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        sys.exit(1)
    except SequenceError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        sys.exit(2)
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        sys.exit(1)
    except SystemExit:
        raise
    except Exception as exc:  # unexpected runtime failure
        print(f"runtime error: {exc}", file=sys.stderr)
        sys.exit(2)


if __name__ == "__main__":
    main()
