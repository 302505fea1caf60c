"""Bit-packed GF(2) kernels for the stabilizer engine.

Generator rows live in two synchronized layouts: row-major packed words
(x block then z block) for pivot extraction and reduction, and a
column-major bitset over row slots for commutation masks.  Columns are
interleaved, col(x_q) = 2q and col(z_q) = 2q+1, so local operators have
early leading columns and reduction cascades stay short.

All kernels are nopython/nogil; the Python wrapper lives in engine.py.
"""

import numba as nb
import numpy as np
from numba import njit

U64 = np.uint64
_M1 = U64(0x5555555555555555)
_M2 = U64(0x3333333333333333)
_M4 = U64(0x0F0F0F0F0F0F0F0F)
_H01 = U64(0x0101010101010101)


@njit(nb.uint64(nb.uint64), cache=True, nogil=True, inline="always")
def _popcount(x):
    x = x - ((x >> U64(1)) & _M1)
    x = (x & _M2) + ((x >> U64(2)) & _M2)
    x = (x + (x >> U64(4))) & _M4
    return (x * _H01) >> U64(56)


@njit(nb.int64(nb.uint64), cache=True, nogil=True, inline="always")
def _ctz(x):
    n = 0
    if x & U64(0xFFFFFFFF) == U64(0):
        n += 32
        x >>= U64(32)
    if x & U64(0xFFFF) == U64(0):
        n += 16
        x >>= U64(16)
    if x & U64(0xFF) == U64(0):
        n += 8
        x >>= U64(8)
    if x & U64(0xF) == U64(0):
        n += 4
        x >>= U64(4)
    if x & U64(0x3) == U64(0):
        n += 2
        x >>= U64(2)
    if x & U64(0x1) == U64(0):
        n += 1
    return n


@njit(cache=True, nogil=True)
def _antimask(colbits, rw, xq, zq, out):
    """Bitset over row slots of rows anticommuting with X(xq) Z(zq)."""
    for w in range(rw):
        out[w] = U64(0)
    for t in range(zq.shape[0]):
        c = 2 * zq[t]
        for w in range(rw):
            out[w] ^= colbits[c, w]
    for t in range(xq.shape[0]):
        c = 2 * xq[t] + 1
        for w in range(rw):
            out[w] ^= colbits[c, w]


@njit(nb.int64(nb.uint64[:], nb.int64), cache=True, nogil=True)
def _leading_col(r, W):
    """Interleaved leading column of a packed row, or -1 when zero."""
    for w in range(W):
        comb = r[w] | r[W + w]
        if comb != U64(0):
            q = 64 * w + _ctz(comb)
            if (r[w] >> U64(q - 64 * w)) & U64(1):
                return 2 * q
            return 2 * q + 1
    return -1


@njit(nb.uint64(nb.uint64[:], nb.uint64[:, :], nb.int64, nb.int64),
      cache=True, nogil=True, inline="always")
def _phase_parity(r, rows, slot, W):
    """Parity of |z(r) & x(rows[slot])| (the Pauli product phase)."""
    acc = U64(0)
    for w in range(W):
        acc ^= _popcount(r[W + w] & rows[slot, w])
    return acc & U64(1)


@njit(cache=True, nogil=True)
def _toggle_row_in_cols(colbits, row, slot, W):
    """Flip this slot's bit in every support column of a packed row."""
    word = slot >> 6
    bit = U64(1) << U64(slot & 63)
    for w in range(W):
        xw = row[w]
        while xw != U64(0):
            q = 64 * w + _ctz(xw)
            colbits[2 * q, word] ^= bit
            xw &= xw - U64(1)
        zw = row[W + w]
        while zw != U64(0):
            q = 64 * w + _ctz(zw)
            colbits[2 * q + 1, word] ^= bit
            zw &= zw - U64(1)


@njit(cache=True, nogil=True)
def _reduce(r, rows, pivot_slot, W, sign_in, signs):
    """Multiply pivot rows into r until its leading column is free.

    Returns (leading_col_or_minus1, sign).  leading == -1 means r reduced
    to the identity and sign is the accumulated (deterministic) sign.
    """
    sign = sign_in
    while True:
        lead = _leading_col(r, W)
        if lead < 0:
            return -1, sign
        slot = pivot_slot[lead]
        if slot < 0:
            return lead, sign
        sign ^= signs[slot] ^ np.uint8(_phase_parity(r, rows, slot, W))
        for w in range(2 * W):
            r[w] ^= rows[slot, w]


@njit(cache=True, nogil=True)
def _measure(rows, signs, row_pivot, pivot_slot, colbits, free_stack, meta,
             xq, zq, base_sign, rand_bit, scratch_mask, scratch_row):
    """Project onto the +-1 eigenspace of X(xq) Z(zq).

    meta = [nrows, free_top]; returns (case, outcome_bit) where case is
    0: random outcome (generator replaced or added), 1: deterministic.
    """
    n = rows.shape[0]
    W = rows.shape[1] // 2
    rw = scratch_mask.shape[0]
    _antimask(colbits, rw, xq, zq, scratch_mask)

    # pick the anticommuting row with the largest leading column so the
    # recombination keeps every other row's pivot intact
    pivot = -1
    best = -1
    nanti = 0
    for w in range(rw):
        m = scratch_mask[w]
        while m != U64(0):
            s = 64 * w + _ctz(m)
            m &= m - U64(1)
            nanti += 1
            if row_pivot[s] > best:
                best = row_pivot[s]
                pivot = s

    if pivot >= 0:
        # multiply the pivot into the other anticommuting rows
        for w in range(rw):
            m = scratch_mask[w]
            while m != U64(0):
                s = 64 * w + _ctz(m)
                m &= m - U64(1)
                if s == pivot:
                    continue
                signs[s] ^= signs[pivot] ^ np.uint8(
                    _phase_parity(rows[s], rows, pivot, W))
                for ww in range(2 * W):
                    rows[s, ww] ^= rows[pivot, ww]
        # column bitsets: every anticommuting row (pivot included) toggles
        # on the pivot's support; this both applies the XOR and erases the
        # pivot row from the column view
        pw = pivot >> 6
        pb = U64(1) << U64(pivot & 63)
        for w in range(W):
            xw = rows[pivot, w]
            while xw != U64(0):
                q = 64 * w + _ctz(xw)
                xw &= xw - U64(1)
                c = 2 * q
                for ww in range(rw):
                    colbits[c, ww] ^= scratch_mask[ww]
            zw = rows[pivot, W + w]
            while zw != U64(0):
                q = 64 * w + _ctz(zw)
                zw &= zw - U64(1)
                c = 2 * q + 1
                for ww in range(rw):
                    colbits[c, ww] ^= scratch_mask[ww]
        pivot_slot[row_pivot[pivot]] = -1
        row_pivot[pivot] = -1
        for w in range(2 * W):
            rows[pivot, w] = U64(0)
        free_stack[meta[1]] = pivot
        meta[1] += 1

    # build the measured operator in the scratch row
    for w in range(2 * W):
        scratch_row[w] = U64(0)
    for t in range(xq.shape[0]):
        q = xq[t]
        scratch_row[q >> 6] ^= U64(1) << U64(q & 63)
    for t in range(zq.shape[0]):
        q = zq[t]
        scratch_row[W + (q >> 6)] ^= U64(1) << U64(q & 63)

    if pivot < 0:
        lead, sign = _reduce(scratch_row, rows, pivot_slot, W,
                             base_sign, signs)
        if lead < 0:
            return 1, sign  # deterministic, state unchanged
        # new independent generator: rank grows
        slot = free_stack[meta[1] - 1]
        meta[1] -= 1
        meta[0] += 1
        signs[slot] = sign ^ rand_bit
        row_pivot[slot] = lead
        pivot_slot[lead] = slot
        for w in range(2 * W):
            rows[slot, w] = scratch_row[w]
        _toggle_row_in_cols(colbits, rows[slot], slot, W)
        return 0, rand_bit

    # replaced-generator case: rank is unchanged, outcome random
    lead, sign = _reduce(scratch_row, rows, pivot_slot, W, base_sign, signs)
    # the operator cannot lie in the span of the commuting remainder
    slot = free_stack[meta[1] - 1]
    meta[1] -= 1
    signs[slot] = sign ^ rand_bit
    row_pivot[slot] = lead
    pivot_slot[lead] = slot
    for w in range(2 * W):
        rows[slot, w] = scratch_row[w]
    _toggle_row_in_cols(colbits, rows[slot], slot, W)
    return 0, rand_bit


@njit(cache=True, nogil=True)
def _contains(rows, signs, row_pivot, pivot_slot, colbits, xq, zq, base_sign,
              scratch_mask, scratch_row):
    """Membership classification without mutating the state.

    Returns (status, sign): 0 anticommutes, 1 in span (sign meaningful),
    2 commutes but outside the span.
    """
    W = rows.shape[1] // 2
    rw = scratch_mask.shape[0]
    _antimask(colbits, rw, xq, zq, scratch_mask)
    for w in range(rw):
        if scratch_mask[w] != U64(0):
            return 0, np.uint8(0)
    for w in range(2 * W):
        scratch_row[w] = U64(0)
    for t in range(xq.shape[0]):
        q = xq[t]
        scratch_row[q >> 6] ^= U64(1) << U64(q & 63)
    for t in range(zq.shape[0]):
        q = zq[t]
        scratch_row[W + (q >> 6)] ^= U64(1) << U64(q & 63)
    lead, sign = _reduce(scratch_row, rows, pivot_slot, W, base_sign, signs)
    if lead < 0:
        return 1, sign
    return 2, np.uint8(0)


@njit(cache=True, nogil=True)
def _measure_batch(rows, signs, row_pivot, pivot_slot, colbits, free_stack,
                   meta, op_x_flat, op_x_off, op_z_flat, op_z_off, op_sign,
                   keep, rand_bits, scratch_mask, scratch_row):
    """Measure a stage's operators in order; keep[i]=0 skips operator i.

    Random bits are consumed positionally (one per scheduled operator)
    so trajectories are reproducible independent of measurement cases.
    """
    for i in range(op_sign.shape[0]):
        if keep[i] == 0:
            continue
        _measure(rows, signs, row_pivot, pivot_slot, colbits, free_stack,
                 meta, op_x_flat[op_x_off[i]:op_x_off[i + 1]],
                 op_z_flat[op_z_off[i]:op_z_off[i + 1]],
                 op_sign[i], rand_bits[i], scratch_mask, scratch_row)
