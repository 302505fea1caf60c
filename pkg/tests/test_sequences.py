import pytest

from dacc.anyons import VACUUM, parse_anyon
from dacc.automorphisms import (Automorphism, all_automorphisms,
                                localized_anyons, transition_map)
from dacc.sequences import (DisorderModel, IrrP, MeasurementSequence,
                            SequenceError, check_reversible,
                            compute_automorphism, concatenate, measured_anyon,
                            parse_theory, synthesize_sequence)

ID = Automorphism.identity()

# canonical fixture sequences -------------------------------------------

RGB_SEQUENCE = """
CC
[rx1,bx2]
[bz1,gz2]
[gy1,ry2]
CC
"""

ONE_COMPONENT_EXAMPLE = """
CC
[rx1,bx2]
[gz2]
[bz1?p]
[gy1,ry2]
CC
"""

INTRALAYER_BROKEN = """
CC
[rx1,bx2]
[gz2]
[bz1?p]
[gx1,ry2]
CC
"""

EX1_TWO_COMPONENT = """
CC
[rx1,bx2]
[gz1,gy2]
[by1?p1]
[rx1,bx2]
[gy2?p2]
CC
"""

DIFFPARITY = """
CC
[rx1,bx2]
[gy2]
[gy1?p1]
[rx2?p2]
CC
"""

TWO_PARAM_UNPROTECTED = """
CC
[rx1,bx2]
[gy1,gz2]
[rz1?p1]
[bx2?p2]
[bx1,ry2]
CC
"""

TWO_PARAM_ONE_IRRP = """
CC
[rx1,bx2]
[by1,gy2]
[gx1?p1]
[rx2?p2]
CC
"""

TWO_PARAM_ODD_PARITY = """
CC
[rx1,bx2]
[by1,ry2]
[rz1?p1]
[gz2?p2]
[gx1,bx2]
CC
"""

# the six one-parameter models adjacent to the trivial schedule
TRIVIAL_ADJACENT = {
    "(ry)(gx)(bz)": "CC\n[rx1,bx2]\n[gy1?p]\nCC",
    "(rz)(gx)(by)": "CC\n[rx1,bx2]\n[gy2?p]\nCC",
    "(ry)(gz)(bx)": "CC\n[rx1,gx2]\n[by1?p]\nCC",
    "(rx)(gz)(by)": "CC\n[gx1,bx2]\n[ry2?p]\nCC",
    "(rx)(gy)(bz)": "CC\n[rx1,bx2]\n[gy1?p]\n[bz1]\n[rx1]\nCC",
    "(rz)(gy)(bx)": "CC\n[rx1,bx2]\n[gy2?p]\n[rz2]\n[bx2]\nCC",
}


def test_parse_round_trip():
    seq = MeasurementSequence.parse(ONE_COMPONENT_EXAMPLE)
    assert MeasurementSequence.parse(str(seq)) == seq
    assert str(seq.stages[3]) == "[bz1?p]"
    # whitespace-insensitive
    assert MeasurementSequence.parse(
        " CC \n [ rx1 , bx2 ] \n CC") == MeasurementSequence.parse(
        "CC\n[rx1,bx2]\nCC")


def test_parser_rejections():
    with pytest.raises(SequenceError):
        MeasurementSequence.parse("[rx1,bx2]\nCC")  # must start at CC
    with pytest.raises(SequenceError):
        MeasurementSequence.parse("CC\n[rx1?a,bx2?b]\nCC")  # two tags
    with pytest.raises(SequenceError):
        MeasurementSequence.parse("CC\n[rx1,rz1]\nCC")  # one layer twice
    with pytest.raises(SequenceError):
        MeasurementSequence.parse("CC\n[rx1,bx2]\nCC\n[rx1,bx2]\nCC")
    with pytest.raises(SequenceError):
        MeasurementSequence.parse("CC\n[qq1]\nCC")


def test_check_reversible_fixtures():
    assert check_reversible(MeasurementSequence.parse(RGB_SEQUENCE))
    # removing the tagged bz1 from the broken variant hits rx1 -> gx1
    broken = DisorderModel.parse(INTRALAYER_BROKEN).corner_sequence([0])
    verdict = check_reversible(broken)
    assert not verdict and verdict.kind == "intralayer"
    assert "rx1 -> gx1" in verdict.detail
    # interlayer violation at a corner of the mixed-parity model
    model = DisorderModel.parse(DIFFPARITY)
    v10 = check_reversible(model.corner_sequence([1, 0]))
    assert not v10 and v10.kind == "interlayer"


def test_compute_automorphism_fixtures():
    assert str(compute_automorphism(
        MeasurementSequence.parse(RGB_SEQUENCE))) == "(rgb)"
    worked = MeasurementSequence.parse("CC\n[rx1,gx2]\n[gy1]\n[rx1,by2]\nCC")
    assert str(compute_automorphism(worked)) == "(rz)(gy)(bx)"
    model = DisorderModel.parse(ONE_COMPONENT_EXAMPLE)
    assert str(compute_automorphism(model.corner_sequence([0]))) == "(rxgybz)"
    assert str(compute_automorphism(model.corner_sequence([1]))) == "(rgb)"


def test_corner_tables_exact():
    def table(text):
        return {bits: (str(v) if not isinstance(v, IrrP) else v)
                for bits, v in DisorderModel.parse(text).corner_outcomes().items()}

    assert table(EX1_TWO_COMPONENT) == {
        (0, 0): "id", (1, 0): "(rx)(gy)(bz)",
        (0, 1): "(rz)(gx)(by)", (1, 1): "(rgb)(xzy)"}
    t = DisorderModel.parse(DIFFPARITY).corner_outcomes()
    assert str(t[(0, 0)]) == "(rz)(gx)(by)"
    assert t[(1, 0)] == IrrP("interlayer", 0)
    assert t[(0, 1)] == IrrP("interlayer", 0)
    assert str(t[(1, 1)]) == "(rybz)(gx)"
    assert table(TWO_PARAM_UNPROTECTED) == {
        (0, 0): "(rb)(xy)", (1, 0): "(rygxbz)",
        (0, 1): "(rzbygx)", (1, 1): "(xzy)"}
    t3 = DisorderModel.parse(TWO_PARAM_ONE_IRRP).corner_outcomes()
    assert str(t3[(0, 0)]) == "(rg)(xz)"
    assert t3[(1, 0)] == IrrP("interlayer", 0)
    assert str(t3[(0, 1)]) == "(rygxbz)"
    assert str(t3[(1, 1)]) == "(rgb)"
    assert table(TWO_PARAM_ODD_PARITY) == {
        (0, 0): "(rg)", (1, 0): "(rxgy)(bz)",
        (0, 1): "(rzgy)(bx)", (1, 1): "(rbg)(xz)"}


def test_trivial_adjacent_models():
    for phi_text, model_text in TRIVIAL_ADJACENT.items():
        model = DisorderModel.parse(model_text)
        outcomes = model.corner_outcomes()
        assert str(outcomes[(0,)]) == "id", phi_text
        assert str(outcomes[(1,)]) == phi_text


def test_corners_json_export():
    table = DisorderModel.parse(DIFFPARITY).corners_json()
    assert table["00"] == "(rz)(gx)(by)"
    assert table["10"] == "IrrP(interlayer)"
    assert table["11"] == "(rybz)(gx)"


def test_synthesize_round_trip_all_72():
    for phi in all_automorphisms():
        seq = synthesize_sequence(phi)
        assert len(seq.tctc_stages) <= 4
        assert compute_automorphism(seq) == phi


def test_synthesize_identity_minimal():
    seq = synthesize_sequence(ID)
    assert str(seq) == "CC\n[rx1,bx2]\nCC"


def _boundary_reachable(phi, theory, pin):
    """Closed-form oracle for which automorphisms a pinned boundary theory
    can reach: phi = iso(last) . R1^a . R2^b . iso(first)^-1."""
    from dacc.sequences import (_R1, _R2, _cc_adjacent_theories,
                                _iso_contribution)
    rparts = [ID, _R1, _R2, _R1.compose(_R2)]
    fixed = _iso_contribution(theory)
    for rp in rparts:
        for other in _cc_adjacent_theories():
            iso = _iso_contribution(other)
            if pin == "first":
                cand = iso.compose(rp).compose(fixed.inverse())
            else:
                cand = fixed.compose(rp).compose(iso.inverse())
            if cand == phi:
                return True
    return False


def test_synthesize_with_boundary():
    t = parse_theory("[gy1,ry2]")
    with pytest.raises(SequenceError):
        synthesize_sequence(ID, first=t, last=t)
    hits = {"first": 0, "last": 0}
    for phi in all_automorphisms():
        for pin in ("first", "last"):
            kw = {pin: t}
            if _boundary_reachable(phi, t, pin):
                seq = synthesize_sequence(phi, **kw)
                theories = seq.effective_theories()
                assert (theories[0] if pin == "first" else theories[-1]) == t
                assert compute_automorphism(seq) == phi
                hits[pin] += 1
            else:
                with pytest.raises(SequenceError):
                    synthesize_sequence(phi, **kw)
    # a fixed boundary reaches part of the group; both directions are rich
    assert hits["first"] == hits["last"] == 48


def test_every_automorphism_has_feasible_boundaries():
    from dacc.sequences import _cc_adjacent_theories
    theories = _cc_adjacent_theories()
    for phi in all_automorphisms():
        assert any(_boundary_reachable(phi, t, "first") for t in theories)
        assert any(_boundary_reachable(phi, t, "last") for t in theories)


def test_synthesize_witness_for_rgb():
    seq = synthesize_sequence(Automorphism.parse("(rgb)"))
    assert compute_automorphism(seq) == compute_automorphism(
        MeasurementSequence.parse(RGB_SEQUENCE))


def test_concatenate():
    a = synthesize_sequence(Automorphism.parse("(rgb)"))
    boundary = a.effective_theories()[-1]
    # an identity continuation is always feasible at any boundary
    ident = synthesize_sequence(ID, first=boundary)
    assert compute_automorphism(concatenate(a, ident)) == Automorphism.parse("(rgb)")
    # homomorphism over every feasible continuation at this boundary
    checked = 0
    for phi_c in all_automorphisms():
        if not _boundary_reachable(phi_c, boundary, "first"):
            continue
        c = synthesize_sequence(phi_c, first=boundary)
        combined = concatenate(a, c)
        assert compute_automorphism(combined) == phi_c.compose(
            Automorphism.parse("(rgb)"))
        checked += 1
    assert checked == 48
    mismatched = synthesize_sequence(ID)
    if mismatched.effective_theories()[0] != boundary:
        with pytest.raises(SequenceError):
            concatenate(a, mismatched)


def test_alpha_beta_mod2():
    # doubling a layer's round trip leaves the automorphism unchanged
    base = MeasurementSequence.parse("CC\n[rx1,bx2]\n[gy1]\n[rx1]\nCC")
    extended = MeasurementSequence.parse(
        "CC\n[rx1,bx2]\n[gy1]\n[rx1]\n[gy1]\n[rx1]\nCC")
    assert compute_automorphism(base) == compute_automorphism(extended)


def test_measured_anyon_fixtures():
    model = DisorderModel.parse(ONE_COMPONENT_EXAMPLE)
    assert measured_anyon(model, "p") == parse_anyon("ry*bz")
    # trivial disorder: both branches enact the same automorphism
    trivial = DisorderModel.parse("CC\n[rx1,bx2]\n[gy1?p]\n[rx1]\nCC")
    assert measured_anyon(trivial, "p") == VACUUM
    adj = DisorderModel.parse(TRIVIAL_ADJACENT["(ry)(gx)(bz)"])
    tau = Automorphism.parse("(ry)(gx)(bz)")
    expected = next(a for a in localized_anyons(tau) if a != VACUUM)
    assert measured_anyon(adj, "p") == expected
    with pytest.raises(SequenceError):
        measured_anyon(model, "nope")


def test_measured_anyon_irreversible_branch_rejected():
    model = DisorderModel.parse(DIFFPARITY)
    with pytest.raises(SequenceError):
        measured_anyon(model, "p1")


def test_one_component_separation_condition_sweep():
    """Tagging any single condensation of any synthesized schedule either
    breaks a branch or yields corner automorphisms separated by a
    single-fermion twist."""
    checked = 0
    for phi in all_automorphisms():
        seq = synthesize_sequence(phi)
        for k, stage in enumerate(seq.stages):
            for b in stage.bosons:
                from dacc.sequences import Stage
                stages = list(seq.stages)
                stages[k] = Stage(stage.bosons, "p", b)
                model = DisorderModel(MeasurementSequence(stages))
                outcomes = model.corner_outcomes()
                both = [outcomes[(0,)], outcomes[(1,)]]
                if any(isinstance(o, IrrP) for o in both):
                    continue
                tau = transition_map(both[0], both[1])
                if tau == ID:
                    continue
                assert tau.conjugacy_class().name == "C{(cσ)(cσ)(cσ)}", str(seq)
                checked += 1
    assert checked > 50
