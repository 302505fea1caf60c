"""The 72-element automorphism group of the color code anyon theory.

An automorphism is a permutation of the six labels {r, g, b, x, y, z}
whose cycles are color-only, flavor-only, or strictly alternating;
equivalently it maps the color block to either the color or the flavor
block.  The group is (S3 x S3) semidirect S2 and splits into nine
conjugacy classes, each identified by its S6 cycle type.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations

from .anyons import (ALL_ANYONS, VACUUM, _GX, _GZ, _RX, _RZ, anyon_name,
                     braid, is_fermion, fermion_group)

LABELS = "rgbxyz"
_COLOR_IDX = (0, 1, 2)
_FLAVOR_IDX = (3, 4, 5)


class Automorphism:
    """A validity-checked permutation of the six anyon labels."""

    __slots__ = ("perm", "_anyon_map")

    def __init__(self, perm):
        perm = tuple(perm)
        if sorted(perm) != list(range(6)):
            raise ValueError(f"not a permutation of 6 labels: {perm}")
        cimg = {perm[i] for i in _COLOR_IDX}
        if cimg != set(_COLOR_IDX) and cimg != set(_FLAVOR_IDX):
            raise ValueError(
                f"invalid automorphism {cycle_string(perm)}: colors must map "
                "onto the color block or the flavor block")
        self.perm = perm
        self._anyon_map = None

    # -- construction -------------------------------------------------

    @staticmethod
    def identity() -> "Automorphism":
        return Automorphism(range(6))

    @staticmethod
    def parse(text: str) -> "Automorphism":
        """Parse cycle notation, e.g. '(rgb)(xzy)', '(rx)(gy)(bz)', 'id'."""
        s = "".join(text.split())
        if s in ("id", "()", "1"):
            return Automorphism.identity()
        perm = list(range(6))
        if not (s.startswith("(") and s.endswith(")")):
            raise ValueError(f"bad cycle notation: {text!r}")
        for cyc in s[1:-1].split(")("):
            idx = []
            for ch in cyc:
                if ch not in LABELS:
                    raise ValueError(f"unknown label {ch!r} in {text!r}")
                idx.append(LABELS.index(ch))
            if len(idx) != len(set(idx)) or len(idx) < 2:
                raise ValueError(f"bad cycle {cyc!r} in {text!r}")
            for i, a in enumerate(idx):
                perm[a] = idx[(i + 1) % len(idx)]
        return Automorphism(perm)

    # -- group structure ----------------------------------------------

    def __call__(self, label: int) -> int:
        return self.perm[label]

    def compose(self, first: "Automorphism") -> "Automorphism":
        """self after first: (self.compose(first))(a) = self(first(a))."""
        return Automorphism(tuple(self.perm[first.perm[i]] for i in range(6)))

    def inverse(self) -> "Automorphism":
        inv = [0] * 6
        for i, p in enumerate(self.perm):
            inv[p] = i
        return Automorphism(inv)

    def __eq__(self, other):
        return isinstance(other, Automorphism) and self.perm == other.perm

    def __hash__(self):
        return hash(self.perm)

    def __repr__(self):
        return f"Automorphism({str(self)!r})"

    def __str__(self):
        return cycle_string(self.perm)

    # -- action on anyons ----------------------------------------------

    @property
    def swaps_blocks(self) -> bool:
        """True when colors map onto flavors (nontrivial S2 part)."""
        return self.perm[0] >= 3

    def anyon_map(self) -> tuple:
        """Image of each of the 16 anyons (linear extension over fusion)."""
        if self._anyon_map is None:
            gen_img = {}
            for g, (c, f) in ((_RX, (0, 3)), (_RZ, (0, 5)),
                              (_GX, (1, 3)), (_GZ, (1, 5))):
                gen_img[g] = _boson_from_labels(self.perm[c], self.perm[f])
            out = []
            for a in ALL_ANYONS:
                img = 0
                for g in (_RX, _RZ, _GX, _GZ):
                    if a & g:
                        img ^= gen_img[g]
                out.append(img)
            self._anyon_map = tuple(out)
        return self._anyon_map

    def apply(self, a: int) -> int:
        """Image of anyon a (packed vector)."""
        return self.anyon_map()[a]

    # -- classification -------------------------------------------------

    def cycle_type(self) -> tuple:
        """Sorted disjoint-cycle lengths, fixed points included."""
        seen = [False] * 6
        lens = []
        for i in range(6):
            if seen[i]:
                continue
            n, j = 0, i
            while not seen[j]:
                seen[j] = True
                j = self.perm[j]
                n += 1
            lens.append(n)
        return tuple(sorted(lens))

    def s3s3_parity(self) -> str:
        """Parity on the S3 x S3 subgroup: 'even' or 'odd'.

        A block-swapping element is first composed with the color-flavor
        reflection (rx)(gy)(bz) to trivialize its S2 part; the parity is
        then the permutation sign of the result.
        """
        sign = _perm_sign(self.perm)
        if self.swaps_blocks:
            sign = -sign
        return "even" if sign == 1 else "odd"

    def conjugacy_class(self) -> "ConjugacyClass":
        return _CLASS_BY_CYCLE_TYPE[self.cycle_type()]


def _boson_from_labels(a: int, b: int) -> int:
    """Boson from an unordered {color, flavor} label pair (as indices)."""
    if a > b:
        a, b = b, a
    from .anyons import boson
    return boson(LABELS[a], LABELS[b])


def _perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        n, j = 0, i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            n += 1
        if n % 2 == 0:
            sign = -sign
    return sign


def cycle_string(perm) -> str:
    """Canonical disjoint-cycle notation, labels ordered r<g<b<x<y<z."""
    seen = [False] * 6
    cycles = []
    for i in range(6):
        if seen[i] or perm[i] == i:
            seen[i] = True
            continue
        cyc, j = [], i
        while not seen[j]:
            seen[j] = True
            cyc.append(j)
            j = perm[j]
        cycles.append(cyc)
    if not cycles:
        return "id"
    return "".join("(" + "".join(LABELS[k] for k in c) + ")" for c in cycles)


# -- conjugacy classes -------------------------------------------------

@dataclass(frozen=True)
class ConjugacyClass:
    """One of the nine conjugacy classes with its cached invariants."""

    name: str
    ascii_name: str
    cycle_type: tuple
    example: str
    parity: str
    log2_d2: int
    ims: int
    size: int

    def __str__(self):
        return self.name


#: classes in canonical (census) order
CONJUGACY_CLASSES = (
    ConjugacyClass("C{id}", "C{id}", (1, 1, 1, 1, 1, 1), "id",
                   "even", 0, 4, 1),
    ConjugacyClass("C{(cσ)(cσ)(cσ)}", "C{(cs)(cs)(cs)}", (2, 2, 2),
                   "(rx)(gy)(bz)", "even", 1, 2, 6),
    ConjugacyClass("C{(ccc)(σσσ)}", "C{(ccc)(sss)}", (3, 3),
                   "(rgb)(xyz)", "even", 2, 2, 4),
    ConjugacyClass("C{(cc)(σσ)}", "C{(cc)(ss)}", (1, 1, 2, 2),
                   "(rg)(xy)", "even", 2, 0, 9),
    ConjugacyClass("C{(cσcσcσ)}", "C{(cscscs)}", (6,),
                   "(rxgybz)", "even", 3, 0, 12),
    ConjugacyClass("C{(ccc)}", "C{(ccc)}", (1, 1, 1, 3),
                   "(rgb)", "even", 4, 0, 4),
    ConjugacyClass("C{(cc)}", "C{(cc)}", (1, 1, 1, 1, 2),
                   "(rg)", "odd", 2, 0, 6),
    ConjugacyClass("C{(cσcσ)(cσ)}", "C{(cscs)(cs)}", (2, 4),
                   "(rxgy)(bz)", "odd", 3, 0, 18),
    ConjugacyClass("C{(ccc)(σσ)}", "C{(ccc)(ss)}", (1, 2, 3),
                   "(rgb)(xy)", "odd", 4, 0, 12),
)

_CLASS_BY_CYCLE_TYPE = {c.cycle_type: c for c in CONJUGACY_CLASSES}
CLASS_BY_NAME = {c.name: c for c in CONJUGACY_CLASSES}
CLASS_BY_NAME.update({c.ascii_name: c for c in CONJUGACY_CLASSES})

CLASS_ID = CONJUGACY_CLASSES[0]
CLASS_CS3 = CONJUGACY_CLASSES[1]
CLASS_CCC_SSS = CONJUGACY_CLASSES[2]


@lru_cache(maxsize=1)
def all_automorphisms() -> tuple:
    """All 72 automorphisms, grouped by class in census order and sorted
    by cycle notation within each class."""
    elems = []
    for pc in permutations(_COLOR_IDX):
        for pf in permutations(_FLAVOR_IDX):
            elems.append(Automorphism(pc + pf))
            # block swap: colors -> flavors and flavors -> colors
            elems.append(Automorphism(pf + pc))
    order = {c.name: i for i, c in enumerate(CONJUGACY_CLASSES)}
    elems.sort(key=lambda p: (order[p.conjugacy_class().name], str(p)))
    return tuple(elems)


def transition_map(phi_a: Automorphism, phi_b: Automorphism) -> Automorphism:
    """Separation between two automorphisms: phi_b after phi_a^-1."""
    return phi_b.compose(phi_a.inverse())


# -- localized / invariant anyons ---------------------------------------

def localized_anyons(tau: Automorphism) -> frozenset:
    """Anyons b x tau(b) over all b; cardinality is the squared quantum
    dimension of the tau twist (anyons are self-inverse here)."""
    amap = tau.anyon_map()
    return frozenset(b ^ amap[b] for b in ALL_ANYONS)


def invariant_anyons(tau: Automorphism) -> frozenset:
    amap = tau.anyon_map()
    return frozenset(b for b in ALL_ANYONS if amap[b] == b)


# canonical invariant-mutual-semion pairs for the identity; the counts are
# class invariants but the pairing itself is a (documented) choice
_ID_PAIRS = (("rx", "bz"), ("rz", "bx"))


def invariant_mutual_semion_pairs(tau: Automorphism) -> tuple:
    """Canonical invariant mutual-semion pairs of tau.

    Each reported pair (a, b) satisfies tau(a)=a, tau(b)=b, B(a,b)=-1,
    and every reported anyon braids trivially with the members of every
    other reported pair.  The number of pairs is IMS/2 for tau's class.
    """
    from .anyons import BOSONS
    cls = tau.conjugacy_class()
    if cls.ims == 0:
        return ()
    if cls is CLASS_ID:
        pairs = tuple((BOSONS[p], BOSONS[q]) for p, q in _ID_PAIRS)
    elif cls is CLASS_CS3:
        # invariant bosons are the three transposition bosons, one of each
        # color; report the r-colored and b-colored ones
        inv = [a for a in invariant_anyons(tau)
               if a != VACUUM and not is_fermion(a)]
        r = [a for a in inv if anyon_name(a)[0] == "r"]
        b = [a for a in inv if anyon_name(a)[0] == "b"]
        pairs = ((r[0], b[0]),)
    else:  # C{(ccc)(sss)}: invariants are the vacuum plus one fermion group
        ferms = sorted(a for a in invariant_anyons(tau) if is_fermion(a))
        pairs = ((ferms[0], ferms[1]),)
    _check_pairs(tau, pairs)
    return pairs


def _check_pairs(tau, pairs):
    amap = tau.anyon_map()
    flat = [a for p in pairs for a in p]
    for a, b in pairs:
        assert amap[a] == a and amap[b] == b and braid(a, b) == -1
    for i, a in enumerate(flat):
        for j, b in enumerate(flat):
            if j // 2 != i // 2:
                assert braid(a, b) == 1


@dataclass
class Lemma1Report:
    """Result of the invariant-iff-commutes-with-localized check."""

    tau: Automorphism
    passed: bool
    counterexamples: tuple


def lemma1_check(tau: Automorphism) -> Lemma1Report:
    """For every anyon b: tau(b)=b iff b braids trivially with every anyon
    localized at tau.  Returns the failing anyons, if any."""
    amap = tau.anyon_map()
    loc = localized_anyons(tau)
    bad = []
    for b in ALL_ANYONS:
        invariant = amap[b] == b
        commutes = all(braid(b, c) == 1 for c in loc)
        if invariant != commutes:
            bad.append(b)
    return Lemma1Report(tau, not bad, tuple(bad))


def fermion_groups_swap(phi: Automorphism) -> bool:
    """Whether phi exchanges the two fermion groups (odd S3xS3 parity)."""
    f = next(iter(sorted(a for a in ALL_ANYONS if is_fermion(a))))
    return fermion_group(phi.apply(f)) != fermion_group(f)
