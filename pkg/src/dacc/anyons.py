"""Exact anyon algebra of the two-dimensional color code.

The 16 anyons form the fusion group Z2^4 generated by the bosons
{rx, rz, gx, gz}; an anyon is stored as a 4-bit integer with fusion
given by XOR.  Braiding and topological spin are determined by the
magic-square rule: two nontrivial bosons braid trivially exactly when
they share a color (row) or a flavor (column), and extend bilinearly
to the whole group.  All phase tables are precomputed at import.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

COLORS = "rgb"
FLAVORS = "xyz"

# generator bit positions inside the 4-bit anyon vector
_RX, _RZ, _GX, _GZ = 1, 2, 4, 8

VACUUM = 0

#: boson name -> packed vector (derived bosons are fusion products of generators)
BOSONS = {
    "rx": _RX,
    "rz": _RZ,
    "ry": _RX ^ _RZ,
    "gx": _GX,
    "gz": _GZ,
    "gy": _GX ^ _GZ,
    "bx": _RX ^ _GX,
    "bz": _RZ ^ _GZ,
    "by": _RX ^ _RZ ^ _GX ^ _GZ,
}

_BOSON_ORDER = ["rx", "ry", "rz", "gx", "gy", "gz", "bx", "by", "bz"]
_NAME_OF_BOSON = {v: k for k, v in BOSONS.items()}

ALL_ANYONS = tuple(range(16))


def boson(color: str, flavor: str) -> int:
    """Packed vector of the boson with the given color and flavor."""
    return BOSONS[color + flavor]


def _build_braiding() -> np.ndarray:
    # Symplectic pairing rx<->gz, rz<->gx reproduces the row/column rule:
    # bosons sharing a color or flavor commute, all other pairs are
    # mutual-semions.  Entries are +-1.
    tab = np.ones((16, 16), dtype=np.int8)
    for a in range(16):
        for b in range(16):
            p = ((a & _RX) and (b & _GZ)) != 0
            p ^= ((a & _GZ) and (b & _RX)) != 0
            p ^= ((a & _RZ) and (b & _GX)) != 0
            p ^= ((a & _GX) and (b & _RZ)) != 0
            tab[a, b] = -1 if p else 1
    return tab


_BRAID = _build_braiding()


def _build_theta() -> np.ndarray:
    # theta(a x b) = theta(a) theta(b) B(a,b) with theta = +1 on the
    # generating bosons fixes theta on the whole group.
    theta = np.ones(16, dtype=np.int8)
    gens = [_RX, _RZ, _GX, _GZ]
    for a in range(16):
        bits = [g for g in gens if a & g]
        s = 1
        for i in range(len(bits)):
            for j in range(i + 1, len(bits)):
                s *= _BRAID[bits[i], bits[j]]
        theta[a] = s
    return theta


_THETA = _build_theta()

#: the two fermion groups; within a group distinct fermions are
#: mutual-semions, across groups braiding is trivial
FERMIONS_F = frozenset(
    {BOSONS["ry"] ^ BOSONS["bx"] ^ BOSONS["gz"],
     BOSONS["bz"] ^ BOSONS["gy"] ^ BOSONS["rx"],
     BOSONS["gx"] ^ BOSONS["rz"] ^ BOSONS["by"]}
)
FERMIONS_FPRIME = frozenset(
    {BOSONS["ry"] ^ BOSONS["bz"] ^ BOSONS["gx"],
     BOSONS["bx"] ^ BOSONS["gy"] ^ BOSONS["rz"],
     BOSONS["gz"] ^ BOSONS["rx"] ^ BOSONS["by"]}
)


def fuse(a: int, b: int) -> int:
    """Abelian fusion (group law): XOR of the exponent vectors."""
    return a ^ b


def braid(a: int, b: int) -> int:
    """Full braiding phase B(a, b) in {+1, -1}."""
    return int(_BRAID[a, b])


def spin(a: int) -> str:
    """Spin class of an anyon: 'vacuum', 'boson' or 'fermion'."""
    if a == VACUUM:
        return "vacuum"
    return "boson" if _THETA[a] == 1 else "fermion"


def theta(a: int) -> int:
    """Topological spin as a sign in {+1, -1}."""
    return int(_THETA[a])


def is_boson(a: int) -> bool:
    return a != VACUUM and _THETA[a] == 1


def is_fermion(a: int) -> bool:
    return _THETA[a] == -1


def fermion_group(f: int) -> str:
    """Group label 'F' or 'F'' of a fermion; rejects non-fermions."""
    if f in FERMIONS_F:
        return "F"
    if f in FERMIONS_FPRIME:
        return "F'"
    raise ValueError(f"{anyon_name(f)} is not a fermion")


@lru_cache(maxsize=None)
def anyon_name(a: int) -> str:
    """Canonical display name: '1', a boson name, or a minimal boson pair."""
    if a == VACUUM:
        return "1"
    if a in _NAME_OF_BOSON:
        return _NAME_OF_BOSON[a]
    for i, p in enumerate(_BOSON_ORDER):
        for q in _BOSON_ORDER[i + 1:]:
            if BOSONS[p] ^ BOSONS[q] == a:
                return f"{p}*{q}"
    raise AssertionError("unreachable: every fermion is a boson pair")


def parse_anyon(text: str) -> int:
    """Parse '1', boson names, or products like 'rx*gz' (also 'rx×gz')."""
    s = text.strip().replace("×", "*")
    if s == "1":
        return VACUUM
    acc = VACUUM
    for tok in s.split("*"):
        tok = tok.strip()
        if tok == "1" or tok == "":
            continue
        if tok not in BOSONS:
            raise ValueError(f"unknown anyon token {tok!r} in {text!r}")
        acc ^= BOSONS[tok]
    return acc
