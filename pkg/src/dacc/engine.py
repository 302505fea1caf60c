"""Mixed-state stabilizer tableau driven by projective Pauli measurements.

The tableau holds up to n independent commuting generators (no
destabilizers); entropy in bits is n - rank.  Measurement follows the
standard three cases: recombine on anticommutation (random outcome,
rank unchanged), deterministic when the operator is already in the
span, and rank growth when it commutes but is independent.
"""

from __future__ import annotations

import numpy as np

from . import _kernels as K
from .lattice import PauliOperator


class MeasurementOutcomeStream:
    """Deterministic random bit source: same seed, same trajectory.

    Bits come from a counter-based generator (Philox) so that streams
    for different tasks are independent and reproducible.
    """

    def __init__(self, seed):
        if isinstance(seed, np.random.SeedSequence):
            self._seq = seed
        else:
            self._seq = np.random.SeedSequence(seed)
        self.generator = np.random.Generator(np.random.Philox(self._seq))

    def bits(self, count: int) -> np.ndarray:
        return self.generator.integers(0, 2, size=count, dtype=np.uint8)

    def uniform(self, count: int) -> np.ndarray:
        return self.generator.random(count)


class Tableau:
    """Instantaneous stabilizer group of n qubits, maximally mixed at start."""

    def __init__(self, n: int):
        self.n = n
        self.W = (n + 63) // 64
        self.RW = (n + 63) // 64
        self.rows = np.zeros((n, 2 * self.W), dtype=np.uint64)
        self.signs = np.zeros(n, dtype=np.uint8)
        self.row_pivot = np.full(n, -1, dtype=np.int64)
        self.pivot_slot = np.full(2 * n, -1, dtype=np.int64)
        self.colbits = np.zeros((2 * n, self.RW), dtype=np.uint64)
        self.free_stack = np.arange(n - 1, -1, -1, dtype=np.int64)
        self.meta = np.array([0, n], dtype=np.int64)  # [rank, free_top]
        self._mask = np.zeros(self.RW, dtype=np.uint64)
        self._row = np.zeros(2 * self.W, dtype=np.uint64)

    # -- core observables -------------------------------------------------

    @property
    def rank(self) -> int:
        return int(self.meta[0])

    def entropy(self) -> int:
        """Von Neumann entropy in bits: n - rank."""
        return self.n - self.rank

    # -- measurement ---------------------------------------------------------

    def _op_arrays(self, op: PauliOperator):
        assert op.n == self.n
        return (np.asarray(op.xq, dtype=np.int64),
                np.asarray(op.zq, dtype=np.int64))

    def measure(self, op: PauliOperator, rng=None, forced=None,
                rand_bit=None) -> int:
        """Measure a Hermitian Pauli; returns the outcome in {+1, -1}.

        ``forced`` fixes the outcome of a non-deterministic measurement
        (state preparation by postselection) and raises if the outcome is
        already determined otherwise; ``rand_bit`` supplies the random
        bit explicitly (shared-stream drivers); otherwise a bit is drawn
        from ``rng`` (a MeasurementOutcomeStream or numpy Generator).
        """
        xq, zq = self._op_arrays(op)
        if forced is not None:
            bit = np.uint8(0 if forced > 0 else 1)
        elif rand_bit is not None:
            bit = np.uint8(rand_bit)
        elif rng is not None:
            gen = rng.generator if isinstance(rng, MeasurementOutcomeStream) else rng
            bit = np.uint8(gen.integers(0, 2))
        else:
            bit = np.uint8(0)
        case, out = K._measure(
            self.rows, self.signs, self.row_pivot, self.pivot_slot,
            self.colbits, self.free_stack, self.meta, xq, zq,
            np.uint8(op.sign), bit, self._mask, self._row)
        if case == 1 and forced is not None and int(out) != int(bit):
            raise ValueError("cannot force a deterministic outcome "
                             f"{-1 if out else +1} to {forced:+d}")
        return -1 if out else +1

    def measure_all(self, ops, rng) -> list:
        return [self.measure(op, rng=rng) for op in ops]

    def contains(self, op: PauliOperator) -> str:
        """Membership of op in the ISG: 'yes(+)', 'yes(-)',
        'commutes-not-in-span' or 'anticommutes'."""
        xq, zq = self._op_arrays(op)
        status, sign = K._contains(
            self.rows, self.signs, self.row_pivot, self.pivot_slot,
            self.colbits, xq, zq, np.uint8(op.sign), self._mask, self._row)
        if status == 0:
            return "anticommutes"
        if status == 1:
            return "yes(-)" if sign else "yes(+)"
        return "commutes-not-in-span"

    def expectation_squared(self, op: PauliOperator) -> int:
        """1 iff op is (up to sign) in the stabilizer group, else 0."""
        return 1 if self.contains(op).startswith("yes") else 0

    # -- introspection -------------------------------------------------------

    def generators(self) -> list:
        out = []
        for slot in range(self.n):
            if self.row_pivot[slot] < 0:
                continue
            xq, zq = [], []
            for w in range(self.W):
                xw = int(self.rows[slot, w])
                while xw:
                    q = 64 * w + (xw & -xw).bit_length() - 1
                    xq.append(q)
                    xw &= xw - 1
                zw = int(self.rows[slot, self.W + w])
                while zw:
                    q = 64 * w + (zw & -zw).bit_length() - 1
                    zq.append(q)
                    zw &= zw - 1
            out.append(PauliOperator.make(self.n, xq, zq,
                                          int(self.signs[slot])))
        return out

    def copy(self) -> "Tableau":
        t = Tableau.__new__(Tableau)
        t.n, t.W, t.RW = self.n, self.W, self.RW
        for name in ("rows", "signs", "row_pivot", "pivot_slot", "colbits",
                     "free_stack", "meta"):
            setattr(t, name, getattr(self, name).copy())
        t._mask = np.zeros(self.RW, dtype=np.uint64)
        t._row = np.zeros(2 * self.W, dtype=np.uint64)
        return t
