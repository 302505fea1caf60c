import json

import numpy as np
import pytest

from dacc.experiment import (ConfigError, ExperimentConfig, compile_period,
                             csv_header, initialize_state, parse_observable,
                             records_to_csv, run_point, run_trajectory,
                             run_trajectory_naive, summary_json, sweep)
from dacc.fits import fit_decay, fourier_g
from dacc.lattice import build_lattice, standard_logicals
from dacc.sequences import DisorderModel

ONE_COMPONENT = """
CC
[rx1,bx2]
[gz2]
[bz1?p]
[gy1,ry2]
CC
"""

EX1 = """
CC
[rx1,bx2]
[gz1,gy2]
[by1?p1]
[rx1,bx2]
[gy2?p2]
CC
"""


def make_config(**kw):
    base = dict(model_text=ONE_COMPONENT, L=3, reps=2, periods=6, seed=7,
                points=((0.5,),))
    base.update(kw)
    return ExperimentConfig(**base)


def test_config_from_yaml_grid_and_trajectory():
    cfg = ExperimentConfig.from_yaml(f"""
model: |
{chr(10).join('  ' + l for l in EX1.strip().splitlines())}
L: 3
reps: 2
periods: 6
seed: 1
grid: [[0, 1], [0, 1]]
""")
    assert cfg.points == ((0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0))
    cfg2 = ExperimentConfig.from_yaml(f"""
model: |
{chr(10).join('  ' + l for l in EX1.strip().splitlines())}
L: 3
periods: 6
trajectory: {{from: [0, 0], to: [0, 1], num: 3}}
""")
    assert cfg2.points == ((0.0, 0.0), (0.0, 0.5), (0.0, 1.0))


def test_config_validation():
    with pytest.raises(ConfigError):
        make_config(points=((0.1, 0.2),))  # wrong arity
    with pytest.raises(ConfigError):
        make_config(periods=7)  # not a multiple of 2 and 3
    with pytest.raises(ConfigError):
        ExperimentConfig.from_yaml("model: CC\nL: 3")


def test_compile_period_stage_structure():
    lat = build_lattice(3)
    stages = compile_period(DisorderModel.parse(ONE_COMPONENT), lat)
    # 4 TCxTC stages + closing CC stage
    assert len(stages) == 5
    assert stages[0].n_ops == 18      # rx1 + bx2 hops
    assert stages[1].n_ops == 9       # gz2
    assert stages[2].parameter == "p"
    assert len(stages[2].disorder_ops) == 9
    assert stages[4].n_ops == 18      # interlayer links
    assert stages[4].parameter is None


def test_clean_run_keeps_entropy_4():
    cfg = make_config(points=((0.0,), (1.0,)), reps=2, periods=6)
    for i, point in enumerate(cfg.points):
        rec = run_point(cfg, point, i)
        assert np.all(rec.S == 4), point


def test_logical_permutation_over_clean_period():
    """At p=1 the schedule enacts (rgb): prepared logical strings map to
    their automorphism images (squared expectation follows the orbit)."""
    from dacc.automorphisms import Automorphism
    from dacc.lattice import logical_representative
    L = 3
    lat = build_lattice(L)
    model = DisorderModel.parse(ONE_COMPONENT)
    stages = compile_period(model, lat)
    phi = Automorphism.parse("(rgb)")
    base = standard_logicals(L)
    rng = np.random.Generator(np.random.Philox(5))
    t = initialize_state(lat, rng, "mixed")
    t.measure(base["X1"], forced=+1)  # O[rx]_v
    from dacc.anyons import BOSONS
    img = logical_representative(lat, phi.apply(BOSONS["rx"]), "v").operator
    assert t.expectation_squared(img) == 0
    S, _ = run_trajectory(t, stages, {"p": 1.0}, 1, rng)
    assert t.expectation_squared(img) == 1
    assert t.expectation_squared(base["X1"]) == 0


def test_ex1_corner_g_signatures():
    cfg = ExperimentConfig(
        model_text=EX1, L=6, reps=1, periods=96, seed=3, init="plus",
        observables=("X3",),
        points=((0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)))
    g2, g3 = {}, {}
    for i, point in enumerate(cfg.points):
        rec = run_point(cfg, point, i)
        assert np.all(rec.S == 0)  # pure logical state stays pure
        series = rec.G[0, 0, :96]
        g2[point] = fourier_g(series, 2)
        g3[point] = fourier_g(series, 3)
    assert abs(g2[(1.0, 0.0)] - 1.0) < 1e-12
    assert abs(g2[(0.0, 1.0)] - 1.0) < 1e-12
    assert abs(g3[(1.0, 1.0)] - 2.0 / 3.0) < 1e-12
    assert g2[(0.0, 0.0)] < 1e-12 and g3[(0.0, 0.0)] < 1e-12
    assert g2[(1.0, 1.0)] < 1e-12
    assert g3[(1.0, 0.0)] < 1e-12


def test_seed_determinism_byte_identical_csv():
    cfg = make_config(reps=3, periods=6, points=((0.4,),),
                      observables=("X3",))
    csv1 = records_to_csv(cfg, sweep(cfg))
    csv2 = records_to_csv(cfg, sweep(cfg))
    assert csv1 == csv2
    cfg_other = make_config(reps=3, periods=6, points=((0.4,),),
                            observables=("X3",), seed=8)
    assert records_to_csv(cfg_other, sweep(cfg_other)) != csv1


def test_csv_and_summary_shapes():
    cfg = make_config(reps=2, periods=6, points=((0.3,), (0.7,)),
                      observables=("X3", "Z3"))
    records = sweep(cfg)
    csv = records_to_csv(cfg, records)
    lines = csv.strip().split("\n")
    assert lines[0] == "L,p1,seed,t,S,G_X3,G_Z3"
    assert len(lines) == 1 + 2 * 2 * 7
    summary = summary_json(cfg, records)
    assert len(summary["points"]) == 2
    assert "2" in summary["points"][0]["g"]["X3"]
    json.dumps(summary)  # serializable


def test_fast_vs_naive_trajectories_small():
    lat = build_lattice(3)
    model = DisorderModel.parse(ONE_COMPONENT)
    stages = compile_period(model, lat)
    for seed in range(3):
        for p in (0.2, 0.8):
            rng_f = np.random.Generator(np.random.Philox(
                np.random.SeedSequence(seed, spawn_key=(0, 0))))
            rng_n = np.random.Generator(np.random.Philox(
                np.random.SeedSequence(seed, spawn_key=(0, 0))))
            t = initialize_state(lat, rng_f, "mixed")
            S_fast, _ = run_trajectory(t, stages, {"p": p}, 10, rng_f)
            S_naive = run_trajectory_naive(lat, stages, {"p": p}, 10, rng_n)
            assert np.array_equal(S_fast, S_naive)


def test_parse_observable_forms():
    L = 3
    assert parse_observable("X1", L) == standard_logicals(L)["X1"]
    op = parse_observable("O[rx*bz]_v", L)
    logs = standard_logicals(L)
    assert op == logs["X1"].mul(logs["Z4"])
    prot = parse_observable("F:Xt1", L)
    assert prot == op
    with pytest.raises(ConfigError):
        parse_observable("Q9", L)


def test_stop_on_drop_short_circuits():
    cfg = make_config(L=6, reps=4, periods=12, points=((0.5,),),
                      stop_on_drop=True, seed=2)
    rec = run_point(cfg, (0.5,), 0)
    # after a drop the series repeats its last value
    for row in rec.S:
        if row[-1] < 4:
            first = np.argmax(row < 4)
            assert np.all(row[first:] == row[first])


def test_fourier_closed_forms():
    g = np.zeros(96)
    g[::2] = 1
    assert abs(fourier_g(g, 2) - 1.0) < 1e-12
    g3 = np.zeros(96)
    g3[::3] = 1
    assert abs(fourier_g(g3, 3) - 2.0 / 3.0) < 1e-12
    assert fourier_g(np.ones(96), 2) < 1e-12
    with pytest.raises(ValueError):
        fourier_g(np.ones(10), 3)


def test_fit_decay_synthetic():
    t = np.arange(97)
    S = 2 + 2 * np.exp(-t / 5.0)
    gamma, tau = fit_decay(S, 2.0)
    assert abs(gamma - 0.2) < 0.002
    assert abs(tau - 5.0) < 0.05
    gamma_flat, tau_flat = fit_decay(np.full(97, 4.0), 2.0)
    assert gamma_flat == 0.0 and tau_flat == float("inf")
