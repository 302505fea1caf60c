"""Independent reference stabilizer engine (dense bools, fresh elimination).

Deliberately shares no code with the bit-packed tableau: rows are dense
boolean vectors and every membership decision re-runs a from-scratch
Gaussian elimination; the anticommutation pivot is simply the first
anticommuting generator.  Entropy trajectories from both engines must
agree exactly when driven by the same pre-drawn random bits.
"""

from __future__ import annotations

import numpy as np


def _rank_of(m: np.ndarray) -> int:
    m = m.copy()
    rank = 0
    rows, cols = m.shape
    for col in range(cols):
        hits = np.flatnonzero(m[rank:, col])
        if hits.size == 0:
            continue
        p = rank + hits[0]
        if p != rank:
            m[[rank, p]] = m[[p, rank]]
        below = np.flatnonzero(m[rank + 1:, col]) + rank + 1
        m[below] ^= m[rank]
        rank += 1
        if rank == rows:
            break
    return rank


class NaiveTableau:
    def __init__(self, n: int):
        self.n = n
        self.x = np.zeros((0, n), dtype=bool)
        self.z = np.zeros((0, n), dtype=bool)
        self.sign = np.zeros(0, dtype=np.uint8)

    @property
    def rank(self) -> int:
        return self.x.shape[0]

    def entropy(self) -> int:
        return self.n - self.rank

    def _vectors(self, op):
        px = np.zeros(self.n, dtype=bool)
        pz = np.zeros(self.n, dtype=bool)
        px[list(op.xq)] = True
        pz[list(op.zq)] = True
        return px, pz

    def _anticommuting(self, px, pz):
        if self.rank == 0:
            return np.zeros(0, dtype=bool)
        return ((self.x & pz).sum(axis=1) + (self.z & px).sum(axis=1)) % 2 == 1

    def _in_span(self, px, pz) -> bool:
        # generator rows are independent by construction, so the span test
        # reduces to one elimination of the augmented matrix
        m = np.hstack([self.x, self.z])
        probe = np.concatenate([px, pz])[None, :]
        return _rank_of(np.vstack([m, probe])) == self.rank

    @staticmethod
    def _mul(ax, az, asign, bx, bz, bsign):
        phase = int(np.count_nonzero(az & bx)) & 1
        return ax ^ bx, az ^ bz, (asign + bsign + phase) & 1

    def measure(self, op, rand_bit: int, want_outcome: bool = True):
        """Standard three-case projective measurement; the random bit is
        supplied by the caller so streams can be shared across engines.
        Returns the outcome (or None for a deterministic outcome when
        ``want_outcome`` is off, avoiding the sign-tracked elimination).
        """
        px, pz = self._vectors(op)
        idx = np.flatnonzero(self._anticommuting(px, pz))
        if idx.size:
            p = idx[0]
            for r in idx[1:]:
                self.x[r], self.z[r], self.sign[r] = self._mul(
                    self.x[r], self.z[r], self.sign[r],
                    self.x[p], self.z[p], self.sign[p])
            self.x[p], self.z[p] = px, pz
            self.sign[p] = (op.sign + rand_bit) & 1
            return -1 if rand_bit else +1
        if self._in_span(px, pz):
            if not want_outcome:
                return None
            verdict = self._signed_membership(px, pz, op.sign)
            assert verdict is not None
            return verdict
        self.x = np.vstack([self.x, px])
        self.z = np.vstack([self.z, pz])
        self.sign = np.append(self.sign, np.uint8((op.sign + rand_bit) & 1))
        return -1 if rand_bit else +1

    def _signed_membership(self, px, pz, psign):
        """Sign of the operator inside the group via a sign-tracked,
        from-scratch echelonization; None when outside the span."""
        wx, wz = self.x.copy(), self.z.copy()
        ws = list(self.sign)
        used = set()
        pivots = {}
        for col in range(2 * self.n):
            kind, q = (col >= self.n, col % self.n)
            block = wz if kind else wx
            rows = [r for r in range(wx.shape[0])
                    if r not in used and block[r, q]]
            if not rows:
                continue
            p = rows[0]
            pivots[col] = p
            used.add(p)
            for r in rows[1:]:
                wx[r], wz[r], ws[r] = self._mul(wx[r], wz[r], ws[r],
                                                wx[p], wz[p], ws[p])
        rx, rz, rs = px.copy(), pz.copy(), int(psign)
        for col in range(2 * self.n):
            kind, q = (col >= self.n, col % self.n)
            block = rz if kind else rx
            if block[q] and col in pivots:
                p = pivots[col]
                rx, rz, rs = self._mul(rx, rz, rs, wx[p], wz[p], ws[p])
        if rx.any() or rz.any():
            return None
        return -1 if rs else +1

    def contains(self, op) -> str:
        px, pz = self._vectors(op)
        if self._anticommuting(px, pz).any():
            return "anticommutes"
        verdict = self._signed_membership(px, pz, op.sign)
        if verdict is None:
            return "commutes-not-in-span"
        return "yes(+)" if verdict > 0 else "yes(-)"

    def expectation_squared(self, op) -> int:
        return 1 if self.contains(op).startswith("yes") else 0
