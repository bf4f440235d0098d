"""Brute-force depth-first enumerators used as ground truth at small n.

Everything here is deliberately simple: walks are grown one step at a time
with an explicit visited set and backtracking, and per-walk statistics are
tallied into dictionaries. Nothing is shared with the transfer-matrix code.
"""
from __future__ import annotations

from collections import defaultdict

from .heightseries import HeightSeries

DEFAULT_CAP = 16

# two step orderings; identical tallies from both guard against traversal bugs
ORDERINGS = {
    "enws": ((1, 0), (0, 1), (-1, 0), (0, -1)),
    "swne": ((0, -1), (-1, 0), (0, 1), (1, 0)),
}

WALK_KINDS = ("full_plane", "half_plane", "strip", "centered_strip")


class OracleLimitError(RuntimeError):
    """Requested length exceeds the configured enumeration cap."""


def _check(n_max, cap):
    if not isinstance(n_max, int) or n_max < 0:
        raise ValueError(f"n_max must be a nonnegative integer, got {n_max!r}")
    if n_max > cap:
        raise OracleLimitError(f"n_max={n_max} exceeds the oracle cap {cap}")


def _steps(ordering):
    try:
        return ORDERINGS[ordering]
    except KeyError:
        raise ValueError(f"unknown step ordering {ordering!r}") from None


def iter_walks(n_max, half_plane=True, ordering="enws"):
    """Yield every walk of ``1..n_max`` steps from the origin as a vertex list.

    The yielded list is reused between iterations; copy it to keep it.
    """
    steps = _steps(ordering)
    path = [(0, 0)]
    seen = {(0, 0)}

    def grow():
        x, y = path[-1]
        for dx, dy in steps:
            v = (x + dx, y + dy)
            if v in seen or (half_plane and v[1] < 0):
                continue
            path.append(v)
            seen.add(v)
            yield path
            if len(path) <= n_max:
                yield from grow()
            seen.discard(v)
            path.pop()

    if n_max >= 1:
        yield from grow()


def _tally(n_max, half_plane, ordering, key):
    """Count walks by ``(n, key(...))`` in one recursive pass.

    ``key`` receives ``(ymin, ymax, yend, back_to_floor, closes)`` where
    ``back_to_floor`` says some vertex after the first returned to ``y = 0``
    and ``closes`` says the endpoint is a lattice neighbour of the origin.
    """
    steps = _steps(ordering)
    out = defaultdict(int)
    seen = {(0, 0)}

    def rec(x, y, n, ymin, ymax, floor):
        for dx, dy in steps:
            a, b = x + dx, y + dy
            if (a, b) in seen or (half_plane and b < 0):
                continue
            lo, hi, fl = min(ymin, b), max(ymax, b), floor or b == 0
            closes = abs(a) + abs(b) == 1
            out[n + 1, key(lo, hi, b, fl, closes)] += 1
            if n + 1 < n_max:
                seen.add((a, b))
                rec(a, b, n + 1, lo, hi, fl)
                seen.discard((a, b))

    if n_max >= 1:
        rec(0, 0, 0, 0, 0, False)
    return out


def dfs_count_walks(kind, n_max, h=None, cap=DEFAULT_CAP, ordering="enws"):
    """Exhaustive walk counts by length.

    Parameters
    ----------
    kind : str
        ``full_plane``, ``half_plane``, ``strip`` (``0 <= y <= h``) or
        ``centered_strip`` (``-ceil(h/2) <= y <= floor(h/2)``).
    n_max : int
        Longest walk counted; must not exceed ``cap``.
    h : int, optional
        Strip height for the two strip kinds.

    Returns
    -------
    list of int
        ``counts[n]`` for ``n = 0..n_max`` with ``counts[0] = 1``. For
        ``half_plane`` a second value, the max-height table, is also returned.
    """
    _check(n_max, cap)
    if kind not in WALK_KINDS:
        raise ValueError(f"unknown walk kind {kind!r}")
    if kind in ("strip", "centered_strip"):
        if not isinstance(h, int) or h < 0:
            raise ValueError(f"{kind} needs a strip height h >= 0, got {h!r}")
    counts = [1] + [0] * n_max
    if kind == "full_plane":
        for (n, _), c in _tally(n_max, False, ordering, lambda *a: 0).items():
            counts[n] += c
        return counts
    if kind == "centered_strip":
        lo, hi = -((h + 1) // 2), h // 2
        t = _tally(n_max, False, ordering, lambda a, b, *_: a >= lo and b <= hi)
        for (n, inside), c in t.items():
            if inside:
                counts[n] += c
        return counts
    table = dfs_max_height_table(n_max, cap=cap, ordering=ordering)
    for (n, hh), c in table.entries.items():
        if kind == "half_plane" or hh <= h:
            counts[n] += c
    if kind == "half_plane":
        return counts, table
    return counts


def dfs_max_height_table(n_max, cap=DEFAULT_CAP, ordering="enws") -> HeightSeries:
    """``c^max_{n,h}``: half-plane walks from the origin by maximum height."""
    _check(n_max, cap)
    t = _tally(n_max, True, ordering, lambda a, b, *_: b)
    return HeightSeries("walks_max_height", dict(t), n_max=n_max, h_max=n_max)


def dfs_count_bridges(n_max, strict=True, cap=DEFAULT_CAP, ordering="enws") -> HeightSeries:
    """Bridges ``b_{n,h}`` by length and height, ``h >= 1``.

    A bridge ends at its maximum height ``h(w) = y(w)``. With ``strict=True``
    the start is also the unique lowest vertex (``y_j > 0`` for ``j >= 1``),
    the convention under which bridges concatenate freely; ``strict=False``
    allows later vertices back on ``y = 0``.
    """
    _check(n_max, cap)

    def key(lo, hi, yend, floor, _):
        if hi != yend or hi < 1 or (strict and floor):
            return None
        return hi

    entries = {(n, h): c for (n, h), c in
               _tally(n_max, True, ordering, key).items() if h is not None}
    kind = "bridges" if strict else "bridges_weak"
    return HeightSeries(kind, entries, n_max=n_max, h_max=n_max)


def dfs_count_polygons_halfplane(n_max, cap=DEFAULT_CAP, ordering="enws") -> HeightSeries:
    """Origin-anchored half-plane polygons by maximum height.

    Entry ``(n, h)`` counts ``(n-1)``-step half-plane walks from the origin
    whose endpoint is adjacent to the origin and whose maximum height is
    ``h``; closing the last edge gives an ``n``-edge polygon. Odd ``n``
    never occurs.
    """
    _check(n_max, cap)
    t = _tally(max(n_max - 1, 0), True, ordering,
               lambda lo, hi, yend, floor, closes: hi if closes else None)
    entries = {(n + 1, h): c for (n, h), c in t.items() if h is not None and n >= 3}
    return HeightSeries("polygons_max_height", entries, n_max=n_max, h_max=n_max)


def is_bridge(walk, strict=True):
    ys = [v[1] for v in walk]
    if len(walk) < 2 or ys[0] != 0 or ys[-1] < 1 or max(ys) != ys[-1]:
        return False
    if min(ys) < 0 or (strict and min(ys[1:]) <= 0):
        return False
    return _is_walk(walk)


def _is_walk(walk):
    if len(set(walk)) != len(walk):
        return False
    return all(abs(a[0] - b[0]) + abs(a[1] - b[1]) == 1 for a, b in zip(walk, walk[1:]))


def classify_irreducible(walk, strict=True):
    """True when a bridge cannot be cut into two shorter bridges.

    A cut at interior vertex ``t`` needs ``y_t`` to be the running maximum
    of ``y_0..y_t``. For strict bridges every later vertex must lie strictly
    above ``y_t`` so that the upper piece is again a strict bridge; with
    ``strict=False`` later vertices may return to ``y_t``.

    Raises
    ------
    ValueError
        If ``walk`` is not a bridge under the chosen convention.
    """
    walk = [tuple(v) for v in walk]
    if not is_bridge(walk, strict):
        raise ValueError("classify_irreducible needs a bridge")
    ys = [v[1] for v in walk]
    n = len(ys) - 1
    run_max = ys[0]
    future_min = [0] * (n + 2)
    future_min[n + 1] = float("inf")
    for j in range(n, -1, -1):
        future_min[j] = min(ys[j], future_min[j + 1])
    for t in range(1, n):
        run_max = max(run_max, ys[t])
        if ys[t] != run_max:
            continue
        above = future_min[t + 1] > ys[t] if strict else future_min[t] == ys[t]
        if above:
            return False
    return True


def irreducible_tally(n_max, strict=True, cap=DEFAULT_CAP, ordering="enws") -> HeightSeries:
    """Irreducible bridges ``a_{n,h}`` found by classifying every bridge."""
    _check(n_max, cap)
    entries = defaultdict(int)
    for walk in iter_walks(n_max, half_plane=True, ordering=ordering):
        if is_bridge(walk, strict) and classify_irreducible(walk, strict):
            entries[len(walk) - 1, walk[-1][1]] += 1
    return HeightSeries("irreducible_bridges", dict(entries), n_max=n_max, h_max=n_max)


def decode_steps(word):
    """Vertex list for a step string over ``NESW`` starting at the origin."""
    moves = {"N": (0, 1), "E": (1, 0), "S": (0, -1), "W": (-1, 0)}
    x = y = 0
    out = [(0, 0)]
    for ch in word.replace(",", "").replace(" ", "").upper():
        dx, dy = moves[ch]
        x, y = x + dx, y + dy
        out.append((x, y))
    return out
