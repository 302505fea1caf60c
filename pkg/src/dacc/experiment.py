"""Monte Carlo driver for disordered measurement schedules.

One period executes the TCxTC stages of a schedule in order followed by
the closing interlayer-link stage; disorder-tagged link sets are
resampled independently every period.  Metrics: entropy S(t), squared
expectations G(t) of requested observables, Fourier components g(lambda),
decay fits, and purified fractions; results go to CSV plus a JSON summary.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Optional

import numpy as np
import yaml

from . import _kernels as K
from .anyons import parse_anyon
from .engine import Tableau
from .lattice import (PauliOperator, build_lattice, logical_representative,
                      standard_logicals, LOGICAL_LABELS)
from .naive_engine import NaiveTableau
from .sequences import DisorderModel
from .fetgraph import protected_algebra

COLOR_INDEX = {"r": 0, "g": 1, "b": 2}


class ConfigError(ValueError):
    """Bad experiment configuration."""


# -- compiled schedules -------------------------------------------------------


@dataclass
class CompiledStage:
    """One stage as flat operator arrays ready for the batch kernel."""

    x_flat: np.ndarray
    x_off: np.ndarray
    z_flat: np.ndarray
    z_off: np.ndarray
    sign: np.ndarray
    disorder_ops: Optional[np.ndarray] = None  # indices sampled per period
    parameter: Optional[str] = None

    @property
    def n_ops(self) -> int:
        return len(self.sign)


def _pack_ops(ops):
    x_off = np.zeros(len(ops) + 1, dtype=np.int64)
    z_off = np.zeros(len(ops) + 1, dtype=np.int64)
    xs, zs, signs = [], [], []
    for i, op in enumerate(ops):
        xs.extend(op.xq)
        zs.extend(op.zq)
        x_off[i + 1] = len(xs)
        z_off[i + 1] = len(zs)
        signs.append(op.sign)
    return CompiledStage(
        np.asarray(xs, dtype=np.int64), x_off,
        np.asarray(zs, dtype=np.int64), z_off,
        np.asarray(signs, dtype=np.uint8))


def compile_period(model_or_seq, lat) -> list:
    """Compile the TCxTC stages plus the closing CC stage into flat
    operator arrays; tagged link sets record their parameter name."""
    seq = (model_or_seq.sequence if isinstance(model_or_seq, DisorderModel)
           else model_or_seq)
    stages = []
    for st in seq.tctc_stages:
        ops, tagged = [], []
        for b in st.bosons:
            hops = lat.hopping_operators(COLOR_INDEX[b.color], b.flavor,
                                         b.layer - 1)
            if st.disorder is not None and b == st.disorder_boson:
                tagged = list(range(len(ops), len(ops) + len(hops)))
            ops.extend(hops)
        cs = _pack_ops(ops)
        if st.disorder is not None:
            cs.disorder_ops = np.asarray(tagged, dtype=np.int64)
            cs.parameter = st.disorder
        stages.append(cs)
    stages.append(_pack_ops(lat.interlayer_links()))
    return stages


# -- configuration -------------------------------------------------------------


@dataclass
class ExperimentConfig:
    model_text: str
    L: int
    reps: int
    periods: int
    seed: int
    init: str = "mixed"          # mixed | plus | stabilizers
    init_stabilizers: tuple = ()  # (observable_expr, sign) pairs
    observables: tuple = ()
    points: tuple = ()           # tuple of parameter vectors
    stop_on_drop: bool = False
    label: str = "run"

    def __post_init__(self):
        self.model = DisorderModel.parse(self.model_text)
        self.parameters = self.model.parameters
        for p in self.points:
            if len(p) != len(self.parameters):
                raise ConfigError(
                    f"point {p} has {len(p)} coords, model has "
                    f"{len(self.parameters)} parameters")
        for lam in (2, 3):
            if self.periods % lam:
                raise ConfigError(
                    f"periods={self.periods} must be a multiple of the "
                    f"Fourier periods under study (got remainder at {lam})")

    @staticmethod
    def from_yaml(text: str) -> "ExperimentConfig":
        raw = yaml.safe_load(text)
        if not isinstance(raw, dict):
            raise ConfigError("config must be a mapping")
        try:
            model_text = raw["model"]
            points = _expand_points(raw)
            init = raw.get("init", "mixed")
            init_stabs = tuple(
                (s.lstrip("+-"), -1 if s.startswith("-") else +1)
                for s in raw.get("init_stabilizers", []))
            return ExperimentConfig(
                model_text=model_text,
                L=int(raw["L"]),
                reps=int(raw.get("reps", 100)),
                periods=int(raw.get("periods", 96)),
                seed=int(raw.get("seed", 0)),
                init=init,
                init_stabilizers=init_stabs,
                observables=tuple(raw.get("observables", [])),
                points=points,
                stop_on_drop=bool(raw.get("stop_on_drop", False)),
                label=str(raw.get("label", "run")),
            )
        except KeyError as exc:
            raise ConfigError(f"missing config key {exc}") from exc


def _expand_points(raw) -> tuple:
    if "points" in raw:
        return tuple(tuple(float(x) for x in p) for p in raw["points"])
    if "grid" in raw:
        axes = [np.asarray(v, dtype=float) for v in raw["grid"]]
        grids = np.meshgrid(*axes, indexing="ij")
        return tuple(tuple(float(g[idx]) for g in grids)
                     for idx in np.ndindex(grids[0].shape))
    if "trajectory" in raw:
        t = raw["trajectory"]
        p0 = np.asarray(t["from"], dtype=float)
        p1 = np.asarray(t["to"], dtype=float)
        num = int(t.get("num", 11))
        if "values" in t:
            ts = np.asarray(t["values"], dtype=float)
        else:
            ts = np.linspace(0.0, 1.0, num)
        return tuple(tuple(p0 + s * (p1 - p0)) for s in ts)
    raise ConfigError("config needs one of points / grid / trajectory")


def parse_observable(expr: str, L: int) -> PauliOperator:
    """Observable names: the standard logicals X1..Z4, protected-table
    entries like 'F:Xt1', or generic strings 'O[rx*bz]_v'."""
    expr = expr.strip()
    if expr in LOGICAL_LABELS:
        return standard_logicals(L)[expr]
    if ":" in expr:
        group, name = expr.split(":", 1)
        for op in protected_algebra(group):
            if op.name == name:
                lat = build_lattice(L)
                return logical_representative(lat, op.anyon,
                                              op.direction).operator
        raise ConfigError(f"unknown protected operator {expr!r}")
    if expr.startswith("O[") and "]_" in expr:
        body, direction = expr[2:].split("]_", 1)
        lat = build_lattice(L)
        return logical_representative(lat, parse_anyon(body),
                                      direction).operator
    raise ConfigError(f"unknown observable {expr!r}")


# -- trajectory runner ----------------------------------------------------------


def _rng_for(master_seed: int, point_index: int, rep: int):
    seq = np.random.SeedSequence(master_seed,
                                 spawn_key=(point_index, rep))
    return np.random.Generator(np.random.Philox(seq))


def initialize_state(lat, rng, init, init_ops=()):
    """Operational initialization: plaquettes then interlayer links give
    the maximally mixed codestate; further forced logicals optional."""
    t = Tableau(lat.n_qubits)
    stages = [_pack_ops(lat.all_plaquette_ops()),
              _pack_ops(lat.interlayer_links())]
    for cs in stages:
        bits = rng.integers(0, 2, size=cs.n_ops, dtype=np.uint8)
        keep = np.ones(cs.n_ops, dtype=np.uint8)
        K._measure_batch(t.rows, t.signs, t.row_pivot, t.pivot_slot,
                         t.colbits, t.free_stack, t.meta,
                         cs.x_flat, cs.x_off, cs.z_flat, cs.z_off, cs.sign,
                         keep, bits, t._mask, t._row)
    if t.entropy() != 4:
        raise RuntimeError(
            f"clean initialization gave entropy {t.entropy()}, expected 4")
    for op, sign in init_ops:
        t.measure(op, forced=sign)
    return t


def run_trajectory(tableau, stages, pvec_by_param, periods, rng,
                   observables=(), stop_on_drop=False):
    """Run up to ``periods`` periods; returns (S array, G matrix).

    S has length periods+1 (t=0 included); G is (n_obs, periods+1) with
    squared expectations.  Per period every tagged link set is resampled
    with its parameter's probability.  When ``stop_on_drop`` is set the
    run ends at the first entropy drop (remaining samples repeat the
    last value; only used for purified-fraction sweeps).
    """
    t = tableau
    S = np.empty(periods + 1, dtype=np.int32)
    G = np.zeros((len(observables), periods + 1), dtype=np.int8)
    S[0] = t.entropy()
    for k, op in enumerate(observables):
        G[k, 0] = t.expectation_squared(op)
    for step in range(1, periods + 1):
        for cs in stages:
            keep = np.ones(cs.n_ops, dtype=np.uint8)
            if cs.parameter is not None:
                p = pvec_by_param[cs.parameter]
                u = rng.random(len(cs.disorder_ops))
                keep[cs.disorder_ops] = u < p
            bits = rng.integers(0, 2, size=cs.n_ops, dtype=np.uint8)
            K._measure_batch(t.rows, t.signs, t.row_pivot, t.pivot_slot,
                             t.colbits, t.free_stack, t.meta,
                             cs.x_flat, cs.x_off, cs.z_flat, cs.z_off,
                             cs.sign, keep, bits, t._mask, t._row)
        S[step] = t.entropy()
        for k, op in enumerate(observables):
            G[k, step] = t.expectation_squared(op)
        if stop_on_drop and S[step] < S[0]:
            S[step + 1:] = S[step]
            G[:, step + 1:] = G[:, step:step + 1]
            break
    return S, G


def run_trajectory_naive(lat, stages, pvec_by_param, periods, rng):
    """Same schedule on the reference engine with identical random
    consumption; returns the entropy series only."""
    t = NaiveTableau(lat.n_qubits)
    for cs in [_pack_ops(lat.all_plaquette_ops()),
               _pack_ops(lat.interlayer_links())]:
        bits = rng.integers(0, 2, size=cs.n_ops, dtype=np.uint8)
        _naive_batch(t, lat, cs, np.ones(cs.n_ops, dtype=np.uint8), bits)
    assert t.entropy() == 4
    S = np.empty(periods + 1, dtype=np.int32)
    S[0] = t.entropy()
    for step in range(1, periods + 1):
        for cs in stages:
            keep = np.ones(cs.n_ops, dtype=np.uint8)
            if cs.parameter is not None:
                p = pvec_by_param[cs.parameter]
                u = rng.random(len(cs.disorder_ops))
                keep[cs.disorder_ops] = u < p
            bits = rng.integers(0, 2, size=cs.n_ops, dtype=np.uint8)
            _naive_batch(t, lat, cs, keep, bits)
        S[step] = t.entropy()
    return S


def _naive_batch(t, lat, cs, keep, bits):
    for i in range(cs.n_ops):
        if not keep[i]:
            continue
        op = PauliOperator.make(
            lat.n_qubits,
            xq=cs.x_flat[cs.x_off[i]:cs.x_off[i + 1]],
            zq=cs.z_flat[cs.z_off[i]:cs.z_off[i + 1]],
            sign=int(cs.sign[i]))
        t.measure(op, rand_bit=int(bits[i]), want_outcome=False)


# -- point runner and sweep ------------------------------------------------------


@dataclass
class PointRecord:
    """Aggregated results of one parameter point."""

    point: tuple
    S: np.ndarray              # (reps, periods+1)
    G: np.ndarray              # (reps, n_obs, periods+1)

    def mean_entropy(self) -> np.ndarray:
        return self.S.mean(axis=0)

    def purified_fraction(self) -> float:
        return float(np.mean(self.S[:, -1] < self.S[:, 0]))


def run_point(config: ExperimentConfig, point, point_index: int) -> PointRecord:
    lat = build_lattice(config.L)
    stages = compile_period(config.model, lat)
    pvec = dict(zip(config.parameters, point))
    observables = [parse_observable(o, config.L) for o in config.observables]
    init_ops = []
    if config.init == "plus":
        logicals = standard_logicals(config.L)
        init_ops = [(logicals[n], +1) for n in ("X1", "X2", "X3", "X4")]
    elif config.init == "stabilizers":
        init_ops = [(parse_observable(expr, config.L), sign)
                    for expr, sign in config.init_stabilizers]
    elif config.init != "mixed":
        raise ConfigError(f"unknown init {config.init!r}")

    S_all = np.empty((config.reps, config.periods + 1), dtype=np.int32)
    G_all = np.zeros((config.reps, len(observables), config.periods + 1),
                     dtype=np.int8)
    for rep in range(config.reps):
        rng = _rng_for(config.seed, point_index, rep)
        t = initialize_state(lat, rng, config.init, init_ops)
        S, G = run_trajectory(t, stages, pvec, config.periods, rng,
                              observables, config.stop_on_drop)
        S_all[rep] = S
        G_all[rep] = G
    return PointRecord(tuple(point), S_all, G_all)


def sweep(config: ExperimentConfig):
    """Sequential map of run_point over the configured points; each
    (point, repetition) pair owns an independent RNG stream."""
    return [run_point(config, p, i) for i, p in enumerate(config.points)]


# -- persistence -------------------------------------------------------------------


def csv_header(config: ExperimentConfig) -> str:
    cols = ["L"] + [f"p{i+1}" for i in range(len(config.parameters))]
    cols += ["seed", "t", "S"]
    cols += [f"G_{name}" for name in config.observables]
    return ",".join(cols)


def records_to_csv(config: ExperimentConfig, records) -> str:
    """Documented delimited output: one row per (point, seed, t)."""
    buf = io.StringIO()
    buf.write(csv_header(config) + "\n")
    for rec in records:
        coords = ",".join(format(x, ".10g") for x in rec.point)
        for rep in range(rec.S.shape[0]):
            for t in range(rec.S.shape[1]):
                row = f"{config.L},{coords},{rep},{t},{rec.S[rep, t]}"
                for k in range(rec.G.shape[1]):
                    row += f",{rec.G[rep, k, t]}"
                buf.write(row + "\n")
    return buf.getvalue()


def summary_json(config: ExperimentConfig, records,
                 lambdas=(2, 3), s_inf: float = 2.0) -> dict:
    from .fits import fit_decay, fourier_g
    points = []
    for rec in records:
        mean_S = rec.mean_entropy()
        gamma, tau = fit_decay(mean_S, s_inf)
        if not np.isfinite(tau):
            tau = None  # JSON-safe marker for "no decay"
        entry = {
            "p": list(rec.point),
            "S_final_mean": float(rec.S[:, -1].mean()),
            "S_final_se": float(rec.S[:, -1].std(ddof=1)
                                / np.sqrt(rec.S.shape[0]))
            if rec.S.shape[0] > 1 else 0.0,
            "purified_fraction": rec.purified_fraction(),
            "Gamma": gamma,
            "tau": tau,
            "g": {},
        }
        for k, name in enumerate(config.observables):
            # the Fourier window is t = 0 .. T'-1
            series = rec.G[:, k, :config.periods].mean(axis=0)
            entry["g"][name] = {str(lam): fourier_g(series, lam)
                                for lam in lambdas}
        points.append(entry)
    return {
        "label": config.label,
        "L": config.L,
        "reps": config.reps,
        "periods": config.periods,
        "seed": config.seed,
        "parameters": list(config.parameters),
        "observables": list(config.observables),
        "points": points,
    }
