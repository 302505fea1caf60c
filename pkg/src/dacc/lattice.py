"""Two-layer 6-6-6 honeycomb torus: sites, colored links, plaquettes,
operator builders and logical string representatives.

Geometry: unit cells (i, j) on an L x L torus hold two sites A and B.
Cell-local edges are E0: A(i,j)-B(i,j), E1: B(i,j)-A(i+1,j) and
E2: B(i,j)-A(i+1,j-1).  Plaquette (i,j) carries color (i+2j) mod 3
(0=r, 1=g, 2=b); a link's color is the color of the two same-colored
plaquettes at its far endpoints.  L must be a multiple of 3 so the
three-coloring closes around the torus.

Layers are stacked as qubit = layer*2L^2 + site.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache


COLOR_NAMES = "rgb"


@dataclass(frozen=True)
class PauliOperator:
    """A Hermitian Pauli as X/Z support index arrays plus a sign bit.

    The operator is (-1)^sign * prod X_q (q in xq) * prod Z_q (q in zq);
    only even-Y operators appear here, so no imaginary phase is needed.
    """

    n: int
    xq: tuple
    zq: tuple
    sign: int = 0

    @staticmethod
    def make(n, xq=(), zq=(), sign=0):
        return PauliOperator(n, tuple(sorted(set(xq))),
                             tuple(sorted(set(zq))), sign & 1)

    @property
    def weight(self) -> int:
        return len(set(self.xq) | set(self.zq))

    @property
    def support(self) -> tuple:
        return tuple(sorted(set(self.xq) | set(self.zq)))

    def commutes(self, other: "PauliOperator") -> bool:
        overlap = len(set(self.xq) & set(other.zq))
        overlap += len(set(self.zq) & set(other.xq))
        return overlap % 2 == 0

    def mul(self, other: "PauliOperator") -> "PauliOperator":
        """Pauli product with sign bookkeeping (operators must commute)."""
        assert self.n == other.n
        phase = len(set(self.zq) & set(other.xq)) & 1
        return PauliOperator(
            self.n,
            tuple(sorted(set(self.xq) ^ set(other.xq))),
            tuple(sorted(set(self.zq) ^ set(other.zq))),
            (self.sign + other.sign + phase) & 1)

    def __str__(self):
        body = []
        for q in self.support:
            x, z = q in set(self.xq), q in set(self.zq)
            body.append(("Y" if x and z else "X" if x else "Z") + str(q))
        return ("-" if self.sign else "+") + ("".join(body) or "I")


class HoneycombTorus:
    """Single-layer indexing shared by both layers of the code."""

    def __init__(self, L: int):
        if L < 3 or L % 3 != 0:
            raise ValueError("L must be a multiple of 3 and at least 3")
        self.L = L
        self.sites_per_layer = 2 * L * L
        self.links_per_layer = 3 * L * L
        self.plaquettes_per_layer = L * L
        self.n_qubits = 2 * self.sites_per_layer

    # -- index helpers ------------------------------------------------------

    def site(self, i, j, s, layer=0):
        L = self.L
        return layer * self.sites_per_layer + ((i % L) * L + (j % L)) * 2 + s

    def plaq_index(self, i, j):
        L = self.L
        return (i % L) * L + (j % L)

    def plaq_color(self, i, j):
        return (i + 2 * j) % 3

    def link_index(self, k, i, j):
        L = self.L
        return ((i % L) * L + (j % L)) * 3 + k

    def link_endpoints(self, k, i, j, layer=0):
        """The two qubits of cell-edge k at cell (i, j)."""
        if k == 0:
            return (self.site(i, j, 0, layer), self.site(i, j, 1, layer))
        if k == 1:
            return (self.site(i, j, 1, layer), self.site(i + 1, j, 0, layer))
        return (self.site(i, j, 1, layer), self.site(i + 1, j - 1, 0, layer))

    def link_color(self, k, i, j):
        base = i + 2 * j
        return (base + (-1, 1, 0)[k]) % 3

    def link_faces(self, k, i, j):
        """Plaquette coords of the two faces bounding the edge."""
        if k == 0:
            return ((i, j), (i, j - 1))
        if k == 1:
            return ((i, j), (i + 1, j - 1))
        return ((i, j - 1), (i + 1, j - 1))

    def link_endpoint_plaquettes(self, k, i, j):
        """The two same-colored plaquettes the edge connects."""
        if k == 0:
            return ((i - 1, j), (i + 1, j - 1))
        if k == 1:
            return ((i + 1, j), (i, j - 1))
        return ((i, j), (i + 1, j - 2))

    def links_of_color(self, color: int):
        out = []
        for i in range(self.L):
            for j in range(self.L):
                for k in range(3):
                    if self.link_color(k, i, j) == color:
                        out.append((k, i, j))
        return out

    def plaquette_sites(self, i, j, layer=0):
        return (self.site(i, j, 0, layer), self.site(i, j, 1, layer),
                self.site(i + 1, j, 0, layer), self.site(i, j + 1, 1, layer),
                self.site(i, j + 1, 0, layer), self.site(i - 1, j + 1, 1, layer))

    # -- same-color plaquette steps for string paths -------------------------

    #: step -> the connecting same-color link, as (dk, di_link, dj_link)
    _STEP_LINK = {
        (1, 1): (1, 0, 1), (-1, -1): (1, -1, 0),
        (1, -2): (2, 0, 0), (-1, 2): (2, -1, 2),
        (2, -1): (0, 1, 0), (-2, 1): (0, -1, 1),
    }

    def step_link(self, i, j, step):
        """Link joining plaquette (i,j) to its same-color neighbor at
        (i,j)+step."""
        dk, di, dj = self._STEP_LINK[step]
        return (dk, i + di, j + dj)

    # -- operator builders ----------------------------------------------------

    def plaquette_x(self, i, j, layer):
        return PauliOperator.make(self.n_qubits,
                                  xq=self.plaquette_sites(i, j, layer))

    def plaquette_z(self, i, j, layer):
        return PauliOperator.make(self.n_qubits,
                                  zq=self.plaquette_sites(i, j, layer))

    def all_plaquette_ops(self):
        ops = []
        for layer in (0, 1):
            for i in range(self.L):
                for j in range(self.L):
                    ops.append(self.plaquette_x(i, j, layer))
                    ops.append(self.plaquette_z(i, j, layer))
        return ops

    def hop_operator(self, k, i, j, flavor: str, layer: int):
        """sigma x sigma on the endpoints of one link; YY carries a -1."""
        a, b = self.link_endpoints(k, i, j, layer)
        if flavor == "x":
            return PauliOperator.make(self.n_qubits, xq=(a, b))
        if flavor == "z":
            return PauliOperator.make(self.n_qubits, zq=(a, b))
        return PauliOperator.make(self.n_qubits, xq=(a, b), zq=(a, b), sign=1)

    def hopping_operators(self, color: int, flavor: str, layer: int):
        """The L^2 weight-2 hopping operators of one condensed boson."""
        return [self.hop_operator(k, i, j, flavor, layer)
                for (k, i, j) in self.links_of_color(color)]

    def interlayer_links(self):
        """Z x Z between the two layers at every lattice site."""
        ops = []
        for s in range(self.sites_per_layer):
            ops.append(PauliOperator.make(
                self.n_qubits, zq=(s, s + self.sites_per_layer)))
        return ops

    # -- canonical string cycles ---------------------------------------------

    def color_cycle(self, color: int, direction: str):
        """Closed same-color link path wrapping the torus once.

        'v' wraps the j direction via steps (+1,+1), (-1,+2);
        'h' wraps the i direction via steps (+1,+1), (+1,+1), (+1,-2).
        """
        steps = ([(1, 1), (-1, 2)] * (self.L // 3) if direction == "v"
                 else [(1, 1), (1, 1), (1, -2)] * (self.L // 3))
        i, j = color, 0  # lexicographically first plaquette of this color
        links = []
        for st in steps:
            links.append(self.step_link(i, j, st))
            i, j = i + st[0], j + st[1]
        assert (i % self.L, j % self.L) == (color % self.L, 0)
        return links

    def string_operator(self, color: int, flavor: str, layers,
                        direction: str) -> PauliOperator:
        """Wilson string of a boson along the canonical cycle: sigma on
        every qubit of every path link, on each requested layer."""
        qubits = []
        for (k, i, j) in self.color_cycle(color, direction):
            for layer in layers:
                qubits.extend(self.link_endpoints(k, i, j, layer))
        if flavor == "x":
            return PauliOperator.make(self.n_qubits, xq=qubits)
        if flavor == "z":
            return PauliOperator.make(self.n_qubits, zq=qubits)
        return PauliOperator.make(self.n_qubits, xq=qubits, zq=qubits,
                                  sign=len(qubits) & 1)

    # -- debug / visualization -------------------------------------------------

    def dump_json(self) -> str:
        L = self.L
        data = {
            "L": L,
            "sites_per_layer": self.sites_per_layer,
            "links": [
                {"id": self.link_index(k, i, j),
                 "color": COLOR_NAMES[self.link_color(k, i, j)],
                 "endpoints": list(self.link_endpoints(k, i, j)),
                 "faces": [list(f) for f in self.link_faces(k, i, j)]}
                for i in range(L) for j in range(L) for k in range(3)],
            "plaquettes": [
                {"id": self.plaq_index(i, j),
                 "coord": [i, j],
                 "color": COLOR_NAMES[self.plaq_color(i, j)],
                 "sites": list(self.plaquette_sites(i, j))}
                for i in range(L) for j in range(L)],
        }
        return json.dumps(data, indent=1)


def build_lattice(L: int) -> HoneycombTorus:
    return HoneycombTorus(L)


# -- logical representatives -------------------------------------------------

#: effective anyon string recipes in the coupled-layer code:
#: x-flavored strings act on both layers, z-flavored on layer 1 only
_BASE_RECIPES = {
    "rx": (0, "x", (0, 1)),
    "rz": (0, "z", (0,)),
    "bx": (2, "x", (0, 1)),
    "bz": (2, "z", (0,)),
}

#: the standard logical dictionary on the torus
LOGICAL_LABELS = {
    "X1": ("rx", "v"), "Z1": ("bz", "h"),
    "X2": ("bx", "v"), "Z2": ("rz", "h"),
    "X3": ("bx", "h"), "Z3": ("rz", "v"),
    "X4": ("rx", "h"), "Z4": ("bz", "v"),
}


def base_decomposition(anyon: int) -> tuple:
    """Exponents of an anyon over the base algebra (rx, bx, rz, bz)."""
    a_rx = (anyon >> 0) & 1
    a_rz = (anyon >> 1) & 1
    a_gx = (anyon >> 2) & 1
    a_gz = (anyon >> 3) & 1
    return (a_rx ^ a_gx, a_gx, a_rz ^ a_gz, a_gz)


@dataclass(frozen=True)
class LogicalRepresentative:
    anyon: int
    direction: str
    operator: PauliOperator


def logical_representative(lat: HoneycombTorus, anyon: int,
                           direction: str) -> LogicalRepresentative:
    """String operator for any anyon along the canonical cycle in the
    requested direction, as a product of base-anyon strings."""
    if direction not in ("v", "h"):
        raise ValueError("direction must be 'v' or 'h'")
    exps = base_decomposition(anyon)
    op = PauliOperator.make(lat.n_qubits)
    for e, name in zip(exps, ("rx", "bx", "rz", "bz")):
        if e:
            color, flavor, layers = _BASE_RECIPES[name]
            op = op.mul(lat.string_operator(color, flavor, layers, direction))
    return LogicalRepresentative(anyon, direction, op)


@lru_cache(maxsize=8)
def standard_logicals(L: int) -> dict:
    """The eight standard logical representatives on an L-torus."""
    from .anyons import BOSONS
    lat = build_lattice(L)
    return {name: logical_representative(lat, BOSONS[a], d).operator
            for name, (a, d) in LOGICAL_LABELS.items()}
