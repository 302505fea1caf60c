"""Adjacency, connectivity and logical connectivity of the 72 FETs.

Nodes are automorphism-labeled FETs.  Two FETs are adjacent when their
transition map is a single-fermion twist (the separation condition);
adjacency is additionally certified by constructing an explicit
1-component disorder model realizing both automorphisms.  Logical
connectivity adds the protected-subspace conditions on top.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .anyons import VACUUM, fermion_group, parse_anyon
from .automorphisms import (Automorphism, CLASS_CCC_SSS, CLASS_CS3,
                            all_automorphisms, localized_anyons,
                            transition_map)
from .sequences import (DisorderModel, IrrP, MeasurementSequence, Stage,
                        SequenceError, concatenate, synthesize_sequence)

UNREACHABLE = -1


def separation_condition(phi_a: Automorphism, phi_b: Automorphism) -> bool:
    return transition_map(phi_a, phi_b).conjugacy_class() is CLASS_CS3


@lru_cache(maxsize=1)
def _node_index() -> dict:
    return {phi: i for i, phi in enumerate(all_automorphisms())}


class FetGraph:
    """The 72-node FET graph with cached adjacency and BFS distances."""

    def __init__(self):
        self.nodes = all_automorphisms()
        self.index = _node_index()
        n = len(self.nodes)
        self.adjacency = np.zeros((n, n), dtype=bool)
        for i, a in enumerate(self.nodes):
            for j, b in enumerate(self.nodes):
                if i != j and separation_condition(a, b):
                    self.adjacency[i, j] = True
        self.distances = self._bfs_all()

    def _bfs_all(self) -> np.ndarray:
        n = len(self.nodes)
        dist = np.full((n, n), UNREACHABLE, dtype=np.int32)
        for s in range(n):
            dist[s, s] = 0
            frontier = [s]
            d = 0
            while frontier:
                d += 1
                nxt = []
                for u in frontier:
                    for v in np.flatnonzero(self.adjacency[u]):
                        if dist[s, v] == UNREACHABLE:
                            dist[s, v] = d
                            nxt.append(v)
                frontier = nxt
        return dist

    # -- queries ---------------------------------------------------------

    def adjacent(self, phi_a: Automorphism, phi_b: Automorphism) -> bool:
        return bool(self.adjacency[self.index[phi_a], self.index[phi_b]])

    def distance(self, phi_a: Automorphism, phi_b: Automorphism):
        """Minimum adjacency-sequence length, or None when unreachable."""
        d = int(self.distances[self.index[phi_a], self.index[phi_b]])
        return None if d == UNREACHABLE else d

    def components(self):
        """The two parity components as tuples of automorphisms."""
        even = tuple(p for p in self.nodes if p.s3s3_parity() == "even")
        odd = tuple(p for p in self.nodes if p.s3s3_parity() == "odd")
        return even, odd

    # -- exports -----------------------------------------------------------

    def distance_csv(self) -> str:
        """72x72 distance matrix ordered by conjugacy class; unreachable
        pairs are written as 'inf'."""
        lines = ["label," + ",".join(str(p) for p in self.nodes)]
        for i, p in enumerate(self.nodes):
            row = [str(p)]
            for j in range(len(self.nodes)):
                d = self.distances[i, j]
                row.append("inf" if d == UNREACHABLE else str(int(d)))
            lines.append(",".join(row))
        return "\n".join(lines) + "\n"

    def dot(self) -> str:
        lines = ["graph fets {"]
        for p in self.nodes:
            lines.append(f'  "{p}" [class="{p.conjugacy_class().ascii_name}"];')
        for i, a in enumerate(self.nodes):
            for j in range(i + 1, len(self.nodes)):
                if self.adjacency[i, j]:
                    lines.append(f'  "{a}" -- "{self.nodes[j]}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


@lru_cache(maxsize=1)
def fet_graph() -> FetGraph:
    return FetGraph()


def adjacent(phi_a: Automorphism, phi_b: Automorphism) -> bool:
    return fet_graph().adjacent(phi_a, phi_b)


def distance(phi_a: Automorphism, phi_b: Automorphism):
    return fet_graph().distance(phi_a, phi_b)


# -- constructive witnesses ----------------------------------------------


@lru_cache(maxsize=None)
def _synthesize_cached(phi, first=None, last=None):
    return synthesize_sequence(phi, first=first, last=last)


@lru_cache(maxsize=1)
def _reachable_by_last_theory():
    """For each CC-adjacent theory, the set of automorphisms realizable
    by a schedule ending there (the boundary contribution pins one side
    of the compile formula, so only part of the group is reachable)."""
    from .sequences import (_R1, _R2, _cc_adjacent_theories,
                            _iso_contribution)
    rparts = [Automorphism.identity(), _R1, _R2, _R1.compose(_R2)]
    isos = [(t, _iso_contribution(t)) for t in _cc_adjacent_theories()]
    table = {}
    for t_last, iso_last in isos:
        reach = set()
        for rp in rparts:
            base = iso_last.compose(rp)
            for _, iso_first in isos:
                reach.add(base.compose(iso_first.inverse()))
        table[t_last] = frozenset(reach)
    return table


@lru_cache(maxsize=1)
def _tagged_model_library():
    """All 1-component models obtained by tagging one condensation of a
    synthesized schedule, keyed by their corner automorphism pair."""
    lib = []
    for phi in all_automorphisms():
        seq = synthesize_sequence(phi)
        for k, stage in enumerate(seq.stages):
            for b in stage.bosons:
                stages = list(seq.stages)
                stages[k] = Stage(stage.bosons, "p", b)
                try:
                    model = DisorderModel(MeasurementSequence(stages))
                    outcomes = model.corner_outcomes()
                except SequenceError:
                    continue
                lo, hi = outcomes[(0,)], outcomes[(1,)]
                if isinstance(lo, IrrP) or isinstance(hi, IrrP) or lo == hi:
                    continue
                lib.append((model, lo, hi))
    return tuple(lib)


def witness_model(phi_a: Automorphism, phi_b: Automorphism) -> DisorderModel:
    """A 1-component disorder model whose corners enact exactly phi_a at
    p=0 and phi_b at p=1, built by concatenating a synthesized prefix with
    a library model whose corner pair has the right transition map."""
    tau = transition_map(phi_a, phi_b)
    if tau.conjugacy_class() is not CLASS_CS3:
        raise SequenceError(
            f"{phi_a} and {phi_b} are not adjacent (transition map {tau})")
    reach = _reachable_by_last_theory()
    for model, lo, hi in _tagged_model_library():
        # single-fermion twists are involutions, so the corner order of the
        # library model does not matter for matching tau
        if transition_map(lo, hi) != tau:
            continue
        prefix_phi = lo.inverse().compose(phi_a)
        boundary = model.sequence.effective_theories()[0]
        if prefix_phi not in reach[boundary]:
            continue  # that boundary contribution cannot produce the prefix
        prefix = _synthesize_cached(prefix_phi, last=boundary)
        witness = DisorderModel(concatenate(prefix, model.sequence))
        outcomes = witness.corner_outcomes()
        if outcomes[(0,)] == phi_a and outcomes[(1,)] == phi_b:
            return witness
    raise SequenceError(f"no witness model found for ({phi_a}, {phi_b})")


# -- logical connectivity ---------------------------------------------------


@dataclass(frozen=True)
class LogicalConnection:
    """Certificate for (non-)logical-connectivity of two FETs."""

    connected: bool
    reason: str
    table: Optional[str] = None   # 'F' or "F'" protected-algebra variant
    path_parity: Optional[str] = None  # 'odd' (adjacent) or 'even'


def _localized_group(tau: Automorphism) -> str:
    ferms = [a for a in localized_anyons(tau) - {VACUUM}]
    groups = {fermion_group(f) for f in ferms}
    assert len(groups) == 1
    return groups.pop()


def logically_connected(phi_a: Automorphism,
                        phi_b: Automorphism) -> LogicalConnection:
    """Protected-subspace criterion for two distinct FETs: both even
    parity and a transition map that is a single-fermion twist (odd-length
    path) or a diagonal translation (even-length path)."""
    if phi_a == phi_b:
        raise ValueError("logical connectivity is defined for distinct FETs")
    if phi_a.s3s3_parity() == "odd" or phi_b.s3s3_parity() == "odd":
        return LogicalConnection(False, "odd-parity FETs are never "
                                        "logically connected")
    tau = transition_map(phi_a, phi_b)
    cls = tau.conjugacy_class()
    if cls is CLASS_CS3:
        group = _localized_group(tau)
        return LogicalConnection(
            True, f"adjacent pair, localized fermion in {group}",
            table=group, path_parity="odd")
    if cls is CLASS_CCC_SSS:
        group = _localized_group(tau)
        return LogicalConnection(
            True, f"two-step pair, localized fermions in {group}",
            table=group, path_parity="even")
    return LogicalConnection(
        False, f"transition map {tau} in {cls.name} measures beyond one "
               "fermion group")


# -- protected logical algebra ------------------------------------------


@dataclass(frozen=True)
class ProtectedOperator:
    """One protected logical operator: anyon string and its expansion in
    the standard 4-qubit logical basis."""

    name: str
    anyon: int
    direction: str          # 'v' | 'h'
    logical_expansion: str  # product of X1..X4 / Z1..Z4


_PROTECTED_TABLES = {
    "F": (
        ProtectedOperator("Xt1", parse_anyon("rx*bz"), "v", "X1*Z4"),
        ProtectedOperator("Zt1", parse_anyon("rz*by"), "h", "Z1*Z2*X3"),
        ProtectedOperator("Xt2", parse_anyon("rx*bz"), "h", "Z1*X4"),
        ProtectedOperator("Zt2", parse_anyon("rz*by"), "v", "X2*Z3*Z4"),
    ),
    "F'": (
        ProtectedOperator("Xt1", parse_anyon("rz*bx"), "v", "X2*Z3"),
        ProtectedOperator("Zt1", parse_anyon("rx*by"), "h", "Z1*X3*X4"),
        ProtectedOperator("Xt2", parse_anyon("rz*bx"), "h", "Z2*X3"),
        ProtectedOperator("Zt2", parse_anyon("rx*by"), "v", "X1*X2*Z4"),
    ),
}


def protected_algebra(group: str) -> tuple:
    """The four protected operators shielding a localized fermion of the
    given group; built from the *other* group's fermions."""
    if group not in _PROTECTED_TABLES:
        raise ValueError(f"unknown fermion group {group!r}")
    return _PROTECTED_TABLES[group]


# -- m-component classification -------------------------------------------


@dataclass(frozen=True)
class ModelClassification:
    result: str            # 'fully-protected' | 'critical-loss' | 'irreversible-risk'
    reasons: tuple


def classify_m_component(dm: DisorderModel) -> ModelClassification:
    """Apply the protected-subspace conditions over the whole parameter
    hypercube: reversible corners, even parities, and the Manhattan-parity
    pairing of transition-map classes."""
    outcomes = dm.corner_outcomes()
    reasons = []
    irr = [(bits, o) for bits, o in outcomes.items() if isinstance(o, IrrP)]
    if irr:
        for bits, o in irr:
            reasons.append(f"corner {bits}: {o} at stage {o.stage_index}")
        return ModelClassification("irreversible-risk", tuple(reasons))

    critical = False
    for bits, phi in outcomes.items():
        if phi.s3s3_parity() == "odd":
            reasons.append(f"corner {bits}: {phi} has odd parity")
            critical = True
    corners = sorted(outcomes)
    for i, b1 in enumerate(corners):
        for b2 in corners[i + 1:]:
            manhattan = sum(abs(x - y) for x, y in zip(b1, b2))
            tau = transition_map(outcomes[b1], outcomes[b2])
            cls = tau.conjugacy_class()
            if manhattan % 2 == 1:
                ok = cls is CLASS_CS3
            else:
                ok = tau == Automorphism.identity() or cls is CLASS_CCC_SSS
            if not ok:
                reasons.append(
                    f"corners {b1}/{b2}: transition {tau} in {cls.name} "
                    f"violates the Manhattan-{'odd' if manhattan % 2 else 'even'} rule")
                critical = True
    if critical:
        return ModelClassification("critical-loss", tuple(reasons))
    groups = set()
    for b1 in corners:
        for b2 in corners:
            if b1 < b2:
                tau = transition_map(outcomes[b1], outcomes[b2])
                if tau != Automorphism.identity():
                    groups.add(_localized_group(tau))
    reasons.append("all corners reversible, even parity, Manhattan-parity "
                   f"rule satisfied (localized groups: {sorted(groups)})")
    return ModelClassification("fully-protected", tuple(reasons))
