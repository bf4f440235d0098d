"""Vertex-update kernels for the strip transfer matrix.

A signature is packed into an int64: two bits per cut-line slot (slot ``i`` at
bits ``2i, 2i+1``) plus two flag bits recording whether the walk's start and
end vertices have been placed. Slot states follow the usual edge encoding:
0 empty, 1 lower arc-end, 2 upper arc-end, 3 free end.

While a column is being built the cut line has ``h + 2`` slots: when the vertex
at row ``r`` is processed, slot ``r`` holds the vertical edge entering it from
below and slot ``r + 1`` the horizontal edge entering from the left. The
vertex writes its right edge into slot ``r`` and its upward edge into slot
``r + 1``, so slot order always matches geometric order along the cut line.

Counts are carried as residues modulo a few primes below 2**58 (additions
only, so no products overflow) and reassembled by CRT in the caller.

Two interchangeable implementations exist: per-signature loops compiled with
numba, and a vectorised numpy path used when numba is disabled.
"""
import numpy as np

from ._accel import njit

FLAG_START = np.int64(1) << np.int64(60)
FLAG_END = np.int64(1) << np.int64(61)
MAX_SLOTS = 30  # h + 2 slots must fit below the flag bits

# Largest number of targets one source signature can produce in a vertex step.
MAX_BRANCH = 6


# --------------------------------------------------------------------------
# numba path


@njit
def _slot(key, i):
    return (key >> np.int64(2 * i)) & np.int64(3)


@njit
def _set_slot(key, i, s):
    sh = np.int64(2 * i)
    return (key & ~(np.int64(3) << sh)) | (np.int64(s) << sh)


@njit
def _partner_above(key, i, nslots):
    depth = 1
    for j in range(i + 1, nslots):
        s = _slot(key, j)
        if s == 1:
            depth += 1
        elif s == 2:
            depth -= 1
            if depth == 0:
                return j
    return -1


@njit
def _partner_below(key, i):
    depth = 1
    for j in range(i - 1, -1, -1):
        s = _slot(key, j)
        if s == 2:
            depth += 1
        elif s == 1:
            depth -= 1
            if depth == 0:
                return j
    return -1


@njit
def _is_nested(key, q):
    depth = 0
    for j in range(q):
        s = _slot(key, j)
        if s == 1:
            depth += 1
        elif s == 2:
            depth -= 1
    return depth > 0


@njit
def _expand_numba(keys, r, h, start_row, end_row, prune):
    nslots = h + 2
    slot_mask = (np.int64(1) << np.int64(2 * nslots)) - np.int64(1)
    n = keys.shape[0]
    tkeys = np.empty(n * MAX_BRANCH, dtype=np.int64)
    src = np.empty(n * MAX_BRANCH, dtype=np.int64)
    shift = np.empty(n * MAX_BRANCH, dtype=np.int64)
    done = np.empty(n * MAX_BRANCH, dtype=np.bool_)
    m = 0
    can_up = r < h
    for s_idx in range(n):
        key = keys[s_idx]
        a = _slot(key, r)
        b = _slot(key, r + 1)
        base = _set_slot(_set_slot(key, r, 0), r + 1, 0)
        has_start = (key & FLAG_START) != 0
        has_end = (key & FLAG_END) != 0
        may_start = (not has_start) and r == start_row
        may_end = (not has_end) and (end_row < 0 or r == end_row)
        if a == 0 and b == 0:
            # empty vertex
            tkeys[m] = key
            src[m] = s_idx
            shift[m] = 0
            done[m] = False
            m += 1
            if can_up:
                tkeys[m] = _set_slot(_set_slot(base, r, 1), r + 1, 2)
                src[m] = s_idx
                shift[m] = 2
                done[m] = False
                m += 1
            for which in range(2):
                if which == 0:
                    if not may_start:
                        continue
                    flag = FLAG_START
                else:
                    if not may_end:
                        continue
                    flag = FLAG_END
                for pos in range(r, r + 2):
                    if pos == r + 1 and not can_up:
                        continue
                    nk = _set_slot(base, pos, 3) | flag
                    if prune and _is_nested(nk, pos):
                        continue
                    tkeys[m] = nk
                    src[m] = s_idx
                    shift[m] = 1
                    done[m] = False
                    m += 1
        elif a == 0 or b == 0:
            s = a if b == 0 else b
            # pass the edge straight on, either rightwards or upwards
            tkeys[m] = _set_slot(base, r, s)
            src[m] = s_idx
            shift[m] = 1
            done[m] = False
            m += 1
            if can_up:
                tkeys[m] = _set_slot(base, r + 1, s)
                src[m] = s_idx
                shift[m] = 1
                done[m] = False
                m += 1
            # or end the walk's piece here at an endpoint
            pos_in = r if b == 0 else r + 1
            for which in range(2):
                if which == 0:
                    if not may_start:
                        continue
                    flag = FLAG_START
                else:
                    if not may_end:
                        continue
                    flag = FLAG_END
                if s == 3:
                    if (base & slot_mask) == 0:
                        tkeys[m] = np.int64(0)
                        src[m] = s_idx
                        shift[m] = 0
                        done[m] = True
                        m += 1
                    continue
                if s == 1:
                    p = _partner_above(key, pos_in, nslots)
                else:
                    p = _partner_below(key, pos_in)
                nk = _set_slot(base, p, 3) | flag
                if prune and _is_nested(nk, p):
                    continue
                tkeys[m] = nk
                src[m] = s_idx
                shift[m] = 0
                done[m] = False
                m += 1
        else:
            if a == 1 and b == 2:
                continue  # would close a loop
            if a == 3 and b == 3:
                if (base & slot_mask) == 0:
                    tkeys[m] = np.int64(0)
                    src[m] = s_idx
                    shift[m] = 0
                    done[m] = True
                    m += 1
                continue
            if a == 1 and b == 1:
                p = _partner_above(key, r + 1, nslots)
                nk = _set_slot(base, p, 1)
            elif a == 2 and b == 2:
                p = _partner_below(key, r)
                nk = _set_slot(base, p, 2)
            elif a == 2 and b == 1:
                nk = base
            else:
                # a free end absorbs one end of an arc; the far end becomes free
                if a == 3:
                    pos_arc = r + 1
                    s = b
                else:
                    pos_arc = r
                    s = a
                if s == 1:
                    p = _partner_above(key, pos_arc, nslots)
                else:
                    p = _partner_below(key, pos_arc)
                nk = _set_slot(base, p, 3)
                if prune and _is_nested(nk, p):
                    continue
            tkeys[m] = nk
            src[m] = s_idx
            shift[m] = 0
            done[m] = False
            m += 1
    return tkeys[:m], src[:m], shift[:m], done[:m]


@njit
def _combine_numba(coeffs, tkeys, src, shift, done, primes):
    nmod = coeffs.shape[1]
    length = coeffs.shape[2]
    completed = np.zeros((nmod, length), dtype=np.int64)
    live = np.nonzero(~done)[0]
    order = live[np.argsort(tkeys[live], kind="mergesort")]
    nuniq = 0
    prev = np.int64(-1)
    for t in order:
        if tkeys[t] != prev:
            nuniq += 1
            prev = tkeys[t]
    new_keys = np.empty(nuniq, dtype=np.int64)
    new_coeffs = np.zeros((nuniq, nmod, length), dtype=np.int64)
    j = -1
    prev = np.int64(-1)
    for t in order:
        if tkeys[t] != prev:
            j += 1
            prev = tkeys[t]
            new_keys[j] = prev
        sft = shift[t]
        s = src[t]
        for k in range(nmod):
            p = primes[k]
            for d in range(length - sft):
                v = coeffs[s, k, d]
                if v != 0:
                    w = new_coeffs[j, k, d + sft] + v
                    if w >= p:
                        w -= p
                    new_coeffs[j, k, d + sft] = w
    for t in np.nonzero(done)[0]:
        sft = shift[t]
        s = src[t]
        for k in range(nmod):
            p = primes[k]
            for d in range(length - sft):
                w = completed[k, d + sft] + coeffs[s, k, d]
                if w >= p:
                    w -= p
                completed[k, d + sft] = w
    # drop signatures whose every retained coefficient vanished
    keep = np.zeros(nuniq, dtype=np.bool_)
    for i in range(nuniq):
        for k in range(nmod):
            for d in range(length):
                if new_coeffs[i, k, d] != 0:
                    keep[i] = True
                    break
            if keep[i]:
                break
    return new_keys[keep], new_coeffs[keep], completed


# --------------------------------------------------------------------------
# numpy path


def _slot_v(keys, pos):
    return (keys >> (2 * np.asarray(pos, dtype=np.int64))) & 3


def _set_slot_v(keys, pos, s):
    sh = 2 * np.asarray(pos, dtype=np.int64)
    return (keys & ~(np.int64(3) << sh)) | (np.asarray(s, dtype=np.int64) << sh)


def _partner_above_v(keys, pos, nslots):
    pos = np.broadcast_to(np.asarray(pos, dtype=np.int64), keys.shape)
    depth = np.ones(keys.shape, dtype=np.int64)
    found = np.full(keys.shape, -1, dtype=np.int64)
    for j in range(nslots):
        active = (j > pos) & (found < 0)
        s = _slot_v(keys, j)
        depth += np.where(active & (s == 1), 1, 0)
        depth -= np.where(active & (s == 2), 1, 0)
        found = np.where(active & (s == 2) & (depth == 0), j, found)
    return found


def _partner_below_v(keys, pos, nslots):
    pos = np.broadcast_to(np.asarray(pos, dtype=np.int64), keys.shape)
    depth = np.ones(keys.shape, dtype=np.int64)
    found = np.full(keys.shape, -1, dtype=np.int64)
    for j in range(nslots - 1, -1, -1):
        active = (j < pos) & (found < 0)
        s = _slot_v(keys, j)
        depth += np.where(active & (s == 2), 1, 0)
        depth -= np.where(active & (s == 1), 1, 0)
        found = np.where(active & (s == 1) & (depth == 0), j, found)
    return found


def _nested_v(keys, pos):
    pos = np.broadcast_to(np.asarray(pos, dtype=np.int64), keys.shape)
    depth = np.zeros(keys.shape, dtype=np.int64)
    top = int(pos.max()) if pos.size else 0
    for j in range(top):
        below = j < pos
        s = _slot_v(keys, j)
        depth += np.where(below & (s == 1), 1, 0) - np.where(below & (s == 2), 1, 0)
    return depth > 0


def _expand_numpy(keys, r, h, start_row, end_row, prune):
    nslots = h + 2
    slot_mask = np.int64((1 << (2 * nslots)) - 1)
    idx = np.arange(keys.shape[0], dtype=np.int64)
    a = _slot_v(keys, r)
    b = _slot_v(keys, r + 1)
    base = _set_slot_v(_set_slot_v(keys, r, 0), r + 1, 0)
    has_start = (keys & FLAG_START) != 0
    has_end = (keys & FLAG_END) != 0
    may_start = ~has_start & (r == start_row)
    may_end = ~has_end & ((end_row < 0) | (r == end_row))
    can_up = r < h
    out = []  # (tkeys, src, shift, done) pieces

    def emit(mask, tk, sft, is_done=False):
        tk = np.broadcast_to(tk, keys.shape)
        out.append((tk[mask], idx[mask], np.full(int(mask.sum()), sft, np.int64),
                    np.full(int(mask.sum()), is_done)))

    empty = (a == 0) & (b == 0)
    emit(empty, keys, 0)
    if can_up:
        emit(empty, _set_slot_v(_set_slot_v(base, r, 1), r + 1, 2), 2)
    positions = (r, r + 1) if can_up else (r,)
    for may, flag in ((may_start, FLAG_START), (may_end, FLAG_END)):
        for pos in positions:
            nk = _set_slot_v(base, pos, 3) | flag
            ok = empty & may
            if prune:
                ok &= ~_nested_v(nk, pos)
            emit(ok, nk, 1)

    single = (a == 0) ^ (b == 0)
    s = np.where(b == 0, a, b)
    emit(single, _set_slot_v(base, r, s), 1)
    if can_up:
        emit(single, _set_slot_v(base, r + 1, s), 1)
    pos_in = np.where(b == 0, r, r + 1)
    p_up = _partner_above_v(keys, pos_in, nslots)
    p_dn = _partner_below_v(keys, pos_in, nslots)
    partner = np.where(s == 1, p_up, p_dn)
    for may, flag in ((may_start, FLAG_START), (may_end, FLAG_END)):
        closes = single & may & (s == 3) & ((base & slot_mask) == 0)
        emit(closes, np.int64(0), 0, True)
        arc = single & may & ((s == 1) | (s == 2))
        nk = _set_slot_v(base, np.where(arc, partner, 0), 3) | flag
        if prune:
            arc &= ~_nested_v(nk, np.where(arc, partner, 0))
        emit(arc, nk, 0)

    both = (a != 0) & (b != 0)
    emit(both & (a == 3) & (b == 3) & ((base & slot_mask) == 0), np.int64(0), 0, True)
    m11 = both & (a == 1) & (b == 1)
    p = _partner_above_v(keys, r + 1, nslots)
    emit(m11, _set_slot_v(base, np.where(m11, p, 0), 1), 0)
    m22 = both & (a == 2) & (b == 2)
    p = _partner_below_v(keys, r, nslots)
    emit(m22, _set_slot_v(base, np.where(m22, p, 0), 2), 0)
    emit(both & (a == 2) & (b == 1), base, 0)
    mfree = both & ((a == 3) ^ (b == 3))
    pos_arc = np.where(a == 3, r + 1, r)
    s_arc = np.where(a == 3, b, a)
    p = np.where(s_arc == 1, _partner_above_v(keys, pos_arc, nslots),
                 _partner_below_v(keys, pos_arc, nslots))
    p = np.where(mfree, p, 0)
    nk = _set_slot_v(base, p, 3)
    if prune:
        mfree &= ~_nested_v(nk, p)
    emit(mfree, nk, 0)

    tkeys = np.concatenate([o[0] for o in out])
    src = np.concatenate([o[1] for o in out])
    shift = np.concatenate([o[2] for o in out])
    done = np.concatenate([o[3] for o in out])
    return tkeys, src, shift, done


def _combine_numpy(coeffs, tkeys, src, shift, done, primes):
    nmod, length = coeffs.shape[1], coeffs.shape[2]
    pr = primes.reshape(1, nmod, 1)
    completed = np.zeros((nmod, length), dtype=np.int64)
    for sft in (0, 1, 2):
        sel = done & (shift == sft)
        if sel.any():
            part = coeffs[src[sel], :, : length - sft] % pr
            # residues < 2**58, so summing in chunks of 16 cannot overflow int64
            for lo in range(0, part.shape[0], 16):
                completed[:, sft:] = (completed[:, sft:] + part[lo:lo + 16].sum(axis=0)) % primes[:, None]
    live = ~done
    new_keys, inv = np.unique(tkeys[live], return_inverse=True)
    inv = inv.reshape(-1)
    src_l, shift_l = src[live], shift[live]
    new_coeffs = np.zeros((new_keys.shape[0], nmod, length), dtype=np.int64)
    for sft in (0, 1, 2):
        sel = shift_l == sft
        if not sel.any():
            continue
        tgt, srcs = inv[sel], src_l[sel]
        # split into rounds with at most one contribution per target, so each
        # accumulation is a plain (a + b) mod p on values below 2**58
        order = np.argsort(tgt, kind="stable")
        tgt, srcs = tgt[order], srcs[order]
        first = np.r_[0, np.flatnonzero(np.diff(tgt)) + 1]
        rank = np.arange(tgt.shape[0]) - np.repeat(first, np.diff(np.r_[first, tgt.shape[0]]))
        for rnd in range(int(rank.max()) + 1):
            sel2 = rank == rnd
            t2, s2 = tgt[sel2], srcs[sel2]
            acc = new_coeffs[t2, :, sft:] + coeffs[s2, :, : length - sft]
            new_coeffs[t2, :, sft:] = acc % pr
    keep = new_coeffs.any(axis=(1, 2))
    return new_keys[keep], new_coeffs[keep], completed


# --------------------------------------------------------------------------
# degree pruning at column boundaries
#
# After the last row of a column, slot i holds the horizontal edge in row i. Every
# unit gap between rows y and y + 1 that some future path must cross costs at
# least one vertical edge. A gap must be crossed when occupied edges lie on
# both sides and no arc joins the two sides, or when an endpoint that is still
# to be placed on a fixed row lies on the far side of all occupied edges.


@njit
def _min_extra_edges(key, h, start_row, end_row):
    need = np.zeros(h + 1, dtype=np.bool_)
    lo = -1
    hi = -1
    for y in range(h + 1):
        if _slot(key, y) != 0:
            if lo < 0:
                lo = y
            hi = y
    if lo < 0:
        return 0
    depth = 0
    for y in range(lo, hi):
        s = _slot(key, y)
        if s == 1:
            depth += 1
        elif s == 2:
            depth -= 1
        if depth == 0:
            need[y] = True
    for which in range(2):
        if which == 0:
            row = start_row
            placed = (key & FLAG_START) != 0
        else:
            row = end_row
            placed = (key & FLAG_END) != 0
        if placed or row < 0:
            continue
        for y in range(row, lo):
            need[y] = True
        for y in range(hi, row):
            need[y] = True
    total = 0
    for y in range(h + 1):
        if need[y]:
            total += 1
    return total


@njit
def _prune_numba(keys, coeffs, h, start_row, end_row):
    n = keys.shape[0]
    length = coeffs.shape[2]
    keep = np.zeros(n, dtype=np.bool_)
    for i in range(n):
        extra = _min_extra_edges(keys[i], h, start_row, end_row)
        cut = length - extra
        if cut < 0:
            cut = 0
        for k in range(coeffs.shape[1]):
            for d in range(cut, length):
                coeffs[i, k, d] = 0
            for d in range(cut):
                if coeffs[i, k, d] != 0:
                    keep[i] = True
    return keys[keep], coeffs[keep]


def _prune_numpy(keys, coeffs, h, start_row, end_row):
    n = keys.shape[0]
    if n == 0:
        return keys, coeffs
    occ = np.stack([_slot_v(keys, y) for y in range(h + 1)], axis=1)  # (n, h+1)
    nz = occ != 0
    any_occ = nz.any(axis=1)
    rows = np.arange(h + 1)
    lo = np.where(any_occ, np.argmax(nz, axis=1), 0)
    hi = np.where(any_occ, h - np.argmax(nz[:, ::-1], axis=1), -1)
    depth = np.cumsum(np.where(occ == 1, 1, 0) - np.where(occ == 2, 1, 0), axis=1)
    inside = (rows[None, :] >= lo[:, None]) & (rows[None, :] < hi[:, None])
    need = inside & (depth == 0)
    for row, flag in ((start_row, FLAG_START), (end_row, FLAG_END)):
        if row < 0:
            continue
        open_ = (keys & flag) == 0
        below = (rows[None, :] >= row) & (rows[None, :] < lo[:, None])
        above = (rows[None, :] >= hi[:, None]) & (rows[None, :] < row)
        need |= open_[:, None] & (below | above)
    extra = np.where(any_occ, need.sum(axis=1), 0)
    length = coeffs.shape[2]
    cut = np.clip(length - extra, 0, length)
    mask = np.arange(length)[None, :] < cut[:, None]
    coeffs = coeffs * mask[:, None, :]
    keep = coeffs.any(axis=(1, 2))
    return keys[keep], coeffs[keep]
