"""Anyon-condensation measurement sequences for the two-layer color code.

A sequence maps the effective color code CC-tilde through a chain of
doubled-toric-code stages and back, enacting an automorphism that is
computed from the first and last stage theories plus the per-layer
transition-count parities.  Disorder parameters attach to individual
condensations; the corners of the parameter hypercube are materialized
into clean sequences and compiled (or rejected as irreversible).

Text format, one stage per line:

    CC
    [rx1,bx2]
    [bz1?p1]
    [gy1,ry2]
    CC

``?name`` tags the preceding boson's link set with a disorder parameter.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

from .anyons import BOSONS, VACUUM, anyon_name, braid
from .automorphisms import Automorphism, CLASS_CS3, localized_anyons

# contributions of a layer transition to the compiled automorphism
_R1 = Automorphism.parse("(rx)(gy)(bz)")
_R2 = Automorphism.parse("(rz)(gy)(bx)")


class SequenceError(ValueError):
    """Structural or reversibility failure of a measurement sequence."""


@dataclass(frozen=True, order=True)
class CondensedBoson:
    """A nontrivial boson condensed in one color-code layer."""

    color: str
    flavor: str
    layer: int

    def __post_init__(self):
        if self.color not in "rgb" or self.flavor not in "xyz":
            raise SequenceError(f"bad boson label {self.color}{self.flavor}")
        if self.layer not in (1, 2):
            raise SequenceError(f"bad layer {self.layer}")

    @property
    def anyon(self) -> int:
        return BOSONS[self.color + self.flavor]

    def __str__(self):
        return f"{self.color}{self.flavor}{self.layer}"


@dataclass(frozen=True)
class Stage:
    """One measurement stage: the effective-CC stage or a TCxTC stage.

    ``bosons`` is empty for a CC-tilde stage.  ``disorder`` optionally
    names the parameter tagging one boson of the stage.
    """

    bosons: tuple = ()
    disorder: Optional[str] = None
    disorder_boson: Optional[CondensedBoson] = None

    def __post_init__(self):
        layers = [b.layer for b in self.bosons]
        if len(set(layers)) != len(layers):
            raise SequenceError("two condensations on one layer in a stage")
        if self.disorder is not None and self.disorder_boson not in self.bosons:
            raise SequenceError("disorder tag must name a boson of the stage")
        # canonical layer order so printing and parsing round-trip exactly
        object.__setattr__(self, "bosons",
                           tuple(sorted(self.bosons, key=lambda b: b.layer)))

    @property
    def is_cc(self) -> bool:
        return not self.bosons

    def boson_on(self, layer: int) -> Optional[CondensedBoson]:
        for b in self.bosons:
            if b.layer == layer:
                return b
        return None

    def __str__(self):
        if self.is_cc:
            return "CC"
        parts = []
        for b in sorted(self.bosons, key=lambda x: x.layer):
            tag = f"?{self.disorder}" if b == self.disorder_boson else ""
            parts.append(f"{b}{tag}")
        return "[" + ",".join(parts) + "]"


def _parse_stage(line: str) -> Stage:
    s = "".join(line.split())
    if s.upper() == "CC":
        return Stage()
    if not (s.startswith("[") and s.endswith("]")):
        raise SequenceError(f"bad stage line {line!r}")
    bosons, disorder, disorder_boson = [], None, None
    body = s[1:-1]
    if not body:
        raise SequenceError(f"empty TCxTC stage in {line!r}")
    for tok in body.split(","):
        tag = None
        if "?" in tok:
            tok, tag = tok.split("?", 1)
            if not tag:
                raise SequenceError(f"empty disorder name in {line!r}")
        if len(tok) != 3:
            raise SequenceError(f"bad boson token {tok!r} in {line!r}")
        b = CondensedBoson(tok[0], tok[1], int(tok[2]))
        bosons.append(b)
        if tag is not None:
            if disorder is not None:
                raise SequenceError(f"two disorder tags in one stage: {line!r}")
            disorder, disorder_boson = tag, b
    return Stage(tuple(bosons), disorder, disorder_boson)


class MeasurementSequence:
    """An ordered list of stages starting and ending at CC-tilde."""

    def __init__(self, stages):
        stages = tuple(stages)
        if len(stages) < 2 or not stages[0].is_cc or not stages[-1].is_cc:
            raise SequenceError("sequence must start and end at CC")
        for st in stages[1:-1]:
            if st.is_cc:
                raise SequenceError("intermediary CC stages are unsupported")
        self.stages = stages

    # -- construction ---------------------------------------------------

    @staticmethod
    def parse(text: str) -> "MeasurementSequence":
        lines = [ln for ln in (l.strip() for l in text.splitlines())
                 if ln and not ln.startswith("#")]
        return MeasurementSequence([_parse_stage(ln) for ln in lines])

    def __str__(self):
        return "\n".join(str(st) for st in self.stages)

    def __eq__(self, other):
        return (isinstance(other, MeasurementSequence)
                and self.stages == other.stages)

    def __hash__(self):
        return hash(self.stages)

    # -- structure ------------------------------------------------------

    @property
    def tctc_stages(self) -> tuple:
        return self.stages[1:-1]

    def effective_theories(self):
        """Per-TCxTC-stage effective (layer1, layer2) bosons; a layer with
        no condensation in a stage retains its previous boson."""
        out, current = [], {1: None, 2: None}
        for st in self.tctc_stages:
            for b in st.bosons:
                current[b.layer] = b
            out.append((current[1], current[2]))
        return out

    def disorder_parameters(self) -> tuple:
        names = []
        for st in self.stages:
            if st.disorder is not None:
                if st.disorder in names:
                    raise SequenceError(
                        f"duplicate disorder parameter {st.disorder!r}")
                names.append(st.disorder)
        return tuple(names)


# -- reversibility ------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    """Outcome of the reversibility check; ``ok`` or a located violation."""

    ok: bool
    kind: Optional[str] = None       # 'intralayer' | 'interlayer'
    stage_index: Optional[int] = None
    detail: str = ""

    def __bool__(self):
        return self.ok


def _mutual_semions(b1: CondensedBoson, b2: CondensedBoson) -> bool:
    return b1.color != b2.color and b1.flavor != b2.flavor


def _cc_compatible(t) -> Optional[str]:
    """Why a TCxTC theory cannot border CC-tilde, or None if it can."""
    b1, b2 = t
    if b1 is None or b2 is None:
        missing = 1 if b1 is None else 2
        return f"layer {missing} has no condensate"
    if b1.color == b2.color:
        return f"{b1} and {b2} share a color"
    if "z" in (b1.flavor, b2.flavor):
        return f"z-flavored condensate in ({b1},{b2})"
    return None


def check_reversible(seq: MeasurementSequence) -> Verdict:
    """Intralayer mutual-semion rule between consecutive effective bosons
    plus the interlayer color/flavor rule at both CC-tilde boundaries."""
    theories = seq.effective_theories()
    if not theories:
        return Verdict(True)
    why = _cc_compatible(theories[0])
    if why is not None:
        return Verdict(False, "interlayer", 1, f"CC -> first theory: {why}")
    prev = theories[0]
    for k, cur in enumerate(theories[1:], start=2):
        for layer in (1, 2):
            b_old, b_new = prev[layer - 1], cur[layer - 1]
            if b_old is not None and b_new is not None and b_old != b_new:
                if not _mutual_semions(b_old, b_new):
                    return Verdict(False, "intralayer", k,
                                   f"{b_old} -> {b_new} braid trivially")
        prev = cur
    why = _cc_compatible(theories[-1])
    if why is not None:
        return Verdict(False, "interlayer", len(seq.stages) - 1,
                       f"last theory -> CC: {why}")
    return Verdict(True)


# -- compilation --------------------------------------------------------


def _iso_contribution(theory) -> Automorphism:
    """Isomorphism of a CC-tilde <-> TCxTC transition.

    The color part sends r to the layer-1 color and b to the layer-2
    color; the flavor part is (xy) exactly when the two flavors differ.
    """
    b1, b2 = theory
    perm = list(range(6))
    c1, c2 = "rgb".index(b1.color), "rgb".index(b2.color)
    c3 = 3 - c1 - c2
    perm[0], perm[2], perm[1] = c1, c2, c3
    if b1.flavor != b2.flavor:
        perm[3], perm[4] = 4, 3
    return Automorphism(perm)


def compute_automorphism(seq: MeasurementSequence) -> Automorphism:
    """Automorphism enacted by one clean period of the sequence."""
    verdict = check_reversible(seq)
    if not verdict:
        raise SequenceError(
            f"sequence is not reversible: {verdict.kind} violation at "
            f"stage {verdict.stage_index} ({verdict.detail})")
    theories = seq.effective_theories()
    if not theories:
        return Automorphism.identity()
    alpha = beta = 0
    for prev, cur in zip(theories, theories[1:]):
        alpha += prev[0] != cur[0]
        beta += prev[1] != cur[1]
    phi = _iso_contribution(theories[-1])
    if alpha % 2:
        phi = phi.compose(_R1)
    if beta % 2:
        phi = phi.compose(_R2)
    return phi.compose(_iso_contribution(theories[0]).inverse())


def concatenate(seq_a: MeasurementSequence,
                seq_c: MeasurementSequence) -> MeasurementSequence:
    """Splice two sequences whose shared boundary theory matches; the
    result enacts the composition (second automorphism after the first)."""
    ta, tc = seq_a.effective_theories(), seq_c.effective_theories()
    if not ta or not tc:
        raise SequenceError("cannot concatenate an empty sequence")
    if ta[-1] != tc[0]:
        raise SequenceError(
            f"boundary mismatch: {tuple(map(str, ta[-1]))} != "
            f"{tuple(map(str, tc[0]))}")
    return MeasurementSequence(
        seq_a.stages[:-1] + seq_c.stages[2:])


# -- disorder models ------------------------------------------------------


class IrrP:
    """Marker for an irreversible corner of a disorder model."""

    def __init__(self, kind: str, stage_index: int, detail: str = ""):
        self.kind = kind
        self.stage_index = stage_index
        self.detail = detail

    def __str__(self):
        return f"IrrP({self.kind})"

    def __repr__(self):
        return f"IrrP({self.kind!r}, stage={self.stage_index})"

    def __eq__(self, other):
        return isinstance(other, IrrP) and self.kind == other.kind

    def __hash__(self):
        return hash(("IrrP", self.kind))


class DisorderModel:
    """A measurement sequence with m disorder parameters in [0,1]."""

    def __init__(self, seq: MeasurementSequence):
        self.sequence = seq
        self.parameters = seq.disorder_parameters()
        if not self.parameters:
            raise SequenceError("disorder model needs at least one parameter")

    @staticmethod
    def parse(text: str) -> "DisorderModel":
        return DisorderModel(MeasurementSequence.parse(text))

    @property
    def m(self) -> int:
        return len(self.parameters)

    def corner_sequence(self, bits) -> MeasurementSequence:
        """Clean sequence at a corner: tagged condensations are removed at
        0 and kept (untagged) at 1; emptied stages are dropped."""
        bits = tuple(bits)
        if len(bits) != self.m:
            raise SequenceError(f"corner needs {self.m} bits")
        setting = dict(zip(self.parameters, bits))
        stages = []
        for st in self.sequence.stages:
            if st.disorder is None:
                stages.append(Stage(st.bosons))
                continue
            if setting[st.disorder]:
                stages.append(Stage(st.bosons))
            else:
                rest = tuple(b for b in st.bosons if b != st.disorder_boson)
                if rest:
                    stages.append(Stage(rest))
        return MeasurementSequence(stages)

    def corner_outcomes(self) -> dict:
        """Automorphism or IrrP verdict at every corner of {0,1}^m,
        recomputed from scratch on each call."""
        out = {}
        for idx in range(2 ** self.m):
            bits = tuple((idx >> k) & 1 for k in range(self.m))
            sub = self.corner_sequence(bits)
            verdict = check_reversible(sub)
            if verdict:
                out[bits] = compute_automorphism(sub)
            else:
                out[bits] = IrrP(verdict.kind, verdict.stage_index,
                                 verdict.detail)
        return out

    def corners_json(self) -> dict:
        """JSON-friendly corner table keyed by bitstrings like '10'."""
        table = {}
        for bits, res in self.corner_outcomes().items():
            key = "".join(str(b) for b in bits)
            table[key] = str(res) if isinstance(res, IrrP) else str(res)
        return table


# -- synthesis ------------------------------------------------------------

_VALID_FLAVORS = "xy"


def _cc_adjacent_theories():
    """All TCxTC theories reversible against CC-tilde, in canonical order.

    Layer-2 colors are enumerated in reverse so the first theory overall
    is (rx1, bx2), the complementary pairing used by the standard
    identity-schedule witness.
    """
    out = []
    for c1 in "rgb":
        for f1 in _VALID_FLAVORS:
            for c2 in "bgr":
                if c2 == c1:
                    continue
                for f2 in _VALID_FLAVORS:
                    out.append((CondensedBoson(c1, f1, 1),
                                CondensedBoson(c2, f2, 2)))
    return out


def _layer_moves(b: CondensedBoson):
    moves = []
    for c in "rgb":
        for f in "xyz":
            if c != b.color and f != b.flavor:
                moves.append(CondensedBoson(c, f, b.layer))
    return moves


def parse_theory(text: str):
    """Parse a TCxTC theory like '[rx1,bx2]' into a layer-ordered pair."""
    st = _parse_stage(text)
    b1, b2 = st.boson_on(1), st.boson_on(2)
    if b1 is None or b2 is None:
        raise SequenceError(f"theory must condense both layers: {text!r}")
    return (b1, b2)


def synthesize_sequence(phi: Automorphism, first=None,
                        last=None) -> MeasurementSequence:
    """Shortest reversible sequence enacting ``phi`` (at most 4 TCxTC
    stages), optionally pinning the first or the last TCxTC theory.

    Deterministic: breadth-first over total stage count with all start
    theories advanced in lockstep and lexicographic boson order inside a
    level.  Raises when a pinned boundary makes ``phi`` unreachable (a
    fixed boundary contribution reaches only part of the group).
    """
    if first is not None and last is not None:
        raise SequenceError("can pin only the first or the last theory")
    starts = [first] if first is not None else _cc_adjacent_theories()

    searches = []
    for start in starts:
        if _cc_compatible(start) is not None:
            raise SequenceError(
                f"invalid boundary theory ({start[0]},{start[1]})")
        searches.append({
            "phi_i_inv": _iso_contribution(start).inverse(),
            "frontier": deque([((start, 0, 0), (start,))]),
            "visited": {(start, 0, 0)},
        })

    def accepts(search, theory, alpha, beta):
        if _cc_compatible(theory) is not None:
            return False
        if last is not None and theory != last:
            return False
        cand = _iso_contribution(theory)
        if alpha % 2:
            cand = cand.compose(_R1)
        if beta % 2:
            cand = cand.compose(_R2)
        return cand.compose(search["phi_i_inv"]) == phi

    for search in searches:
        (state, path) = search["frontier"][0]
        if accepts(search, *state):
            return _theories_to_sequence(path)

    for _ in range(3):  # grow to at most 4 TCxTC stages
        for search in searches:
            nxt = deque()
            while search["frontier"]:
                (theory, a, b), path = search["frontier"].popleft()
                b1, b2 = theory
                options = ([(m, b2) for m in _layer_moves(b1)]
                           + [(b1, m) for m in _layer_moves(b2)]
                           + [(m1, m2) for m1 in _layer_moves(b1)
                              for m2 in _layer_moves(b2)])
                for t2 in options:
                    state = (t2, (a + (t2[0] != b1)) % 2,
                             (b + (t2[1] != b2)) % 2)
                    if state in search["visited"]:
                        continue
                    search["visited"].add(state)
                    nxt.append((state, path + (t2,)))
            search["frontier"] = nxt
        for search in searches:
            for state, path in search["frontier"]:
                if accepts(search, *state):
                    return _theories_to_sequence(path)
    raise SequenceError(
        f"no sequence of at most 4 stages enacts {phi}"
        + (" with the requested boundary" if (first or last) else ""))


def _theories_to_sequence(theories) -> MeasurementSequence:
    stages = [Stage()]
    prev = (None, None)
    for t in theories:
        bosons = tuple(b for b, p in zip(t, prev) if b != p)
        stages.append(Stage(bosons))
        prev = t
    stages.append(Stage())
    return MeasurementSequence(stages)


# -- measured anyon -------------------------------------------------------

# layer-resolved anyons are 8-bit vectors: low 4 bits layer 1, high 4 layer 2
_CC_TILDE_CONDENSATE = (BOSONS["rz"] | (BOSONS["rz"] << 4),
                        BOSONS["gz"] | (BOSONS["gz"] << 4))


def _braid8(a: int, b: int) -> int:
    return braid(a & 15, b & 15) * braid(a >> 4, b >> 4)


def _subgroup(gens):
    group = {0}
    for g in gens:
        group |= {x ^ g for x in group}
    return group


def _deconfined_representative(f8: int, current_gens, next_gens):
    for x in _subgroup(current_gens):
        cand = f8 ^ x
        if all(_braid8(cand, g) == 1 for g in next_gens):
            return cand
    return None


def _cc_tilde_label(f8: int) -> int:
    """CC anyon label of a deconfined layer-resolved anyon at CC-tilde."""
    rep = {1: BOSONS["rx"] | (BOSONS["rx"] << 4), 2: BOSONS["rz"],
           4: BOSONS["gx"] | (BOSONS["gx"] << 4), 8: BOSONS["gz"]}
    cosets = _subgroup(_CC_TILDE_CONDENSATE)
    for a in range(16):
        r = 0
        for g in (1, 2, 4, 8):
            if a & g:
                r ^= rep[g]
        if (r ^ f8) in cosets:
            return a
    raise SequenceError(f"anyon {f8:#x} is confined at CC-tilde")


def measured_anyon(dm: DisorderModel, parameter: str) -> int:
    """Anyon measured along noncontractible boundaries of the disorder on
    ``parameter``, expressed in the end-of-period CC-tilde frame.

    Computed microscopically (the tagged boson fused with the preceding
    condensate of the same layer, pushed forward stage by stage) and
    cross-checked against the nontrivial localized anyon of the branch
    transition map.
    """
    if parameter not in dm.parameters:
        raise SequenceError(f"unknown parameter {parameter!r}")
    zeros = [0] * dm.m
    ones = list(zeros)
    ones[dm.parameters.index(parameter)] = 1
    seq0, seq1 = dm.corner_sequence(zeros), dm.corner_sequence(ones)
    for s, bits in ((seq0, zeros), (seq1, ones)):
        if not check_reversible(s):
            raise SequenceError(
                f"branch {bits} of {parameter!r} is irreversible")

    # locate the tagged stage inside the kept branch
    tagged_pos = tagged_boson = None
    kept_stages = []
    for st in dm.sequence.stages:
        if st.disorder == parameter:
            tagged_pos = len(kept_stages)
            tagged_boson = st.disorder_boson
            kept_stages.append(Stage(st.bosons))
        elif st.disorder is not None:
            rest = tuple(b for b in st.bosons if b != st.disorder_boson)
            if rest:
                kept_stages.append(Stage(rest))
        else:
            kept_stages.append(st)
    branch = MeasurementSequence(kept_stages)
    theories = branch.effective_theories()
    t_idx = tagged_pos - 1  # index into theories

    prev = None
    if t_idx > 0:
        prev = theories[t_idx - 1][tagged_boson.layer - 1]
    if prev is None or prev == tagged_boson:
        raise SequenceError(
            f"parameter {parameter!r} has no preceding condensate to pair")
    shift = 0 if tagged_boson.layer == 1 else 4
    f8 = (prev.anyon << shift) ^ (tagged_boson.anyon << shift)

    def gens(theory):
        b1, b2 = theory
        out = []
        if b1 is not None:
            out.append(b1.anyon)
        if b2 is not None:
            out.append(b2.anyon << 4)
        return out

    for k in range(t_idx, len(theories)):
        nxt = (gens(theories[k + 1]) if k + 1 < len(theories)
               else list(_CC_TILDE_CONDENSATE))
        f8 = _deconfined_representative(f8, gens(theories[k]), nxt)
        if f8 is None:
            raise SequenceError("measured anyon confined during pushforward")
    result = _cc_tilde_label(f8)

    # dual route: the localized anyon of the branch transition map
    tau = compute_automorphism(seq1).compose(
        compute_automorphism(seq0).inverse())
    loc = localized_anyons(tau) - {VACUUM}
    if not loc:
        expected = VACUUM
    elif tau.conjugacy_class() is CLASS_CS3:
        expected = next(iter(loc))
    else:
        raise SequenceError(
            f"branch transition map {tau} is not a single-fermion twist")
    if result != expected:
        raise SequenceError(
            f"pushforward {anyon_name(result)} disagrees with localized "
            f"anyon {anyon_name(expected)} of {tau}")
    return result
