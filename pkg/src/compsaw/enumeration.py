"""Transfer-matrix enumeration of half-plane walks and bridges in strips.

The strip ``0 <= y <= h`` is swept column by column, one vertex at a time.
Each partial configuration left of the cut line is summarised by its
signature (see :mod:`compsaw._tm_kernels`) and carries a truncated
polynomial in ``z`` counting partial walks by number of edges. Walks are
counted up to horizontal translation by requiring them to occupy column 0,
so each walk from the origin is counted exactly once.
"""
from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import _accel
from . import _tm_kernels as K
from .heightseries import HeightSeries
from .series import GFPoly, TwoVarSeries

log = logging.getLogger(__name__)

# primes below 2**58; counts are reconstructed from residues by CRT
PRIMES = (288230376151711717, 288230376151711687, 288230376151711681,
          288230376151711607, 288230376151711603, 288230376151711597)

MEMORY_BUDGET_ENV = "COMPSAW_MEMORY_BUDGET"
DEFAULT_MEMORY_BUDGET = 2 * 1024**3


class ResourceLimitError(RuntimeError):
    """Signature table outgrew the configured memory budget."""


def moduli_for(n_max):
    """Primes whose product exceeds every n-step walk count, 4 * 3**(n-1)."""
    bound = 4 * 3 ** max(n_max - 1, 0)
    prod, chosen = 1, []
    for p in PRIMES:
        chosen.append(p)
        prod *= p
        if prod > bound:
            return tuple(chosen)
    raise ResourceLimitError(f"n_max={n_max} needs more than {len(PRIMES)} moduli")


def crt(residues, primes):
    """Smallest nonnegative integer with the given residues."""
    x, m = 0, 1
    for r, p in zip(residues, primes):
        r, p = int(r), int(p)
        t = ((r - x) * pow(m, -1, p)) % p
        x += m * t
        m *= p
    return x


def _memory_budget():
    raw = os.environ.get(MEMORY_BUDGET_ENV, "")
    return int(float(raw)) if raw.strip() else DEFAULT_MEMORY_BUDGET


def strip_sweep(h, n_max, start_row=0, end_row=-1, prune=True, use_numba=None,
                memory_budget=None, start_in_first_column=False, by_column=False):
    """Count walks confined to rows ``0..h`` by length.

    Walks start at a vertex of row ``start_row``; if ``end_row >= 0`` they must
    end on that row. Returns a list of ints indexed by length for
    ``n = 0..n_max``; the zero-step walk is not included (index 0 is 0).

    With ``start_in_first_column`` the start may sit on any row but must lie
    in column 0 (``start_row`` is ignored), and walks are counted once per
    placement inside the strip rather than up to translation. With
    ``by_column`` the result is a list over columns ``c`` of such lists,
    counting walks whose rightmost column is ``c``.

    ``prune`` discards signatures in which a free end sits inside an arc. That
    is only safe for bridges, where each free end belongs to a piece holding a
    boundary endpoint and so must stay reachable from the strip edges. For
    ordinary walks a nested free end may still merge with the enclosing arc.
    """
    if h < 0 or h + 2 > K.MAX_SLOTS:
        raise ValueError(f"strip height must be in 0..{K.MAX_SLOTS - 2}, got {h}")
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    if start_in_first_column:
        start_row = -1
    elif not 0 <= start_row <= h:
        raise ValueError("start/end rows must lie inside the strip")
    if end_row > h:
        raise ValueError("start/end rows must lie inside the strip")
    if use_numba is None:
        use_numba = _accel.USE_NUMBA
    expand = K._expand_numba if use_numba else K._expand_numpy
    combine = K._combine_numba if use_numba else K._combine_numpy
    prune_degrees = K._prune_numba if use_numba else K._prune_numpy
    budget = _memory_budget() if memory_budget is None else memory_budget

    primes = np.array(moduli_for(n_max), dtype=np.int64)
    nmod, length = primes.shape[0], n_max + 1
    keys = np.zeros(1, dtype=np.int64)
    coeffs = np.zeros((1, nmod, length), dtype=np.int64)
    coeffs[0, :, 0] = 1
    per_col = []
    col_mask = np.int64((1 << (2 * (h + 1))) - 1)
    flags = K.FLAG_START | K.FLAG_END
    prune = bool(prune)

    # an n-step walk spans at most n + 1 columns
    for col in range(n_max + 1):
        if col > 0:
            keys = ((keys & col_mask) << 2) | (keys & flags)
        col_total = np.zeros((nmod, length), dtype=np.int64)
        for r in range(h + 1):
            srow = (r if col == 0 else -1) if start_in_first_column else start_row
            tk, src, sft, done = expand(keys, r, h, srow, end_row, prune)
            keys, coeffs, comp = combine(coeffs, tk, src, sft, done, primes)
            col_total = (col_total + comp) % primes[:, None]
            need = coeffs.nbytes + 4 * tk.nbytes
            if need > budget:
                raise ResourceLimitError(
                    f"signature table for strip height h={h} needs {need} bytes "
                    f"(budget {budget}); {keys.shape[0]} signatures at column {col}")
        per_col.append(col_total)
        if col == 0:
            if start_in_first_column:
                started = (keys & K.FLAG_START) != 0
            else:
                started = keys != 0
            keys, coeffs = keys[started], coeffs[started]
        keys, coeffs = prune_degrees(keys, coeffs, h, start_row, end_row)
        log.debug("h=%d column %d: %d signatures", h, col, keys.shape[0])
        if keys.shape[0] == 0:
            break
    if by_column:
        return [[0] + [crt(t[:, n], primes) for n in range(1, length)] for t in per_col]
    total = np.zeros((nmod, length), dtype=np.int64)
    for t in per_col:
        total = (total + t) % primes[:, None]
    counts = [crt(total[:, n], primes) for n in range(length)]
    counts[0] = 0
    return counts


def _check_args(h, n_max, h_min=0):
    if not isinstance(h, (int, np.integer)) or h < h_min:
        raise ValueError(f"height must be an integer >= {h_min}, got {h!r}")
    if not isinstance(n_max, (int, np.integer)) or n_max < 0:
        raise ValueError(f"n_max must be a nonnegative integer, got {n_max!r}")


def tm_bridges_per_height(h, n_max, strict=True, **kw) -> GFPoly:
    """Generating function ``B_h(z)`` of bridges of height exactly ``h``.

    ``strict=True`` counts walks whose start is the unique lowest vertex
    (``0 < y_j <= y_n = h`` for ``j >= 1``). These factor uniquely into
    irreducible bridges, which :func:`compsaw.series.extend_bridges` relies
    on. ``strict=False`` counts every half-plane walk with ``h(w) = y(w)``.
    A strict bridge is one north step followed by a non-strict bridge of
    height ``h - 1`` lifted by one row, and is computed that way.
    """
    _check_args(h, n_max, h_min=1)
    if n_max < h:
        raise ValueError(f"n_max={n_max} is below the minimal bridge length h={h}")
    if not strict:
        return GFPoly(tuple(strip_sweep(h, n_max, 0, h, **kw)), n_max)
    inner = strip_sweep(h - 1, n_max - 1, 0, h - 1, **kw)
    if h == 1:
        inner[0] = 1  # the zero-step walk is the height-0 bridge
    return GFPoly((0, *inner), n_max)


def tm_strip_walks(h, n_max, **kw):
    """``W[n]``: n-step walks from the origin with ``0 <= y <= h``; ``W[0] = 1``."""
    _check_args(h, n_max)
    kw.setdefault("prune", False)
    counts = strip_sweep(h, n_max, 0, -1, **kw)
    counts[0] = 1
    return counts


def tm_strip_walks_centered(h, n_max, **kw):
    """Walks from the origin confined to ``-ceil(h/2) <= y <= floor(h/2)``."""
    _check_args(h, n_max)
    kw.setdefault("prune", False)
    counts = strip_sweep(h, n_max, (h + 1) // 2, -1, **kw)
    counts[0] = 1
    return counts


def _map(fn, args, workers):
    if workers <= 1 or len(args) <= 1:
        return [fn(*a) for a in args]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        futures = [ex.submit(fn, *a) for a in args]
        return [f.result() for f in futures]


def tall_walks_by_height(w, n_max, **kw):
    """``T[h][n]``: n-step half-plane walks of height ``h`` and x-span ``<= w``.

    A walk of height ``h`` uses at least ``h`` vertical steps, so its x-span is
    at most ``n - h``; tall walks are therefore narrow. They are counted by
    sweeping a vertical strip of width ``w`` upwards, which is the strip
    sweep rotated by a quarter turn with the start pinned to the bottom row.
    That sweep counts each walk once per horizontal placement, ``w - s + 1``
    times for span ``s``, so the first difference in ``w`` counts each walk
    of span ``<= w`` once.
    """
    _check_args(w, n_max)
    kw.setdefault("prune", False)
    wide = strip_sweep(w, n_max, start_in_first_column=True, by_column=True, **kw)
    if w == 0:
        return wide
    narrow = strip_sweep(w - 1, n_max, start_in_first_column=True, by_column=True, **kw)
    return [[a - b for a, b in zip(wide[h], narrow[h])] for h in range(len(wide))]


def default_split(n_max):
    """Largest height taken from horizontal strips by default."""
    return max((n_max - 1) // 2, 0)


def walks_by_max_height(h_max, n_max, workers=None, strips=None, split=None) -> HeightSeries:
    """``c^max_{n,h}``: half-plane walks from the origin by maximum height.

    Heights ``h <= split`` come from strip counts, ``W_{n,<=h} - W_{n,<=h-1}``.
    Heights above ``split`` come from :func:`tall_walks_by_height` with width
    ``n_max - split - 1``, which every such walk fits. Heights above
    ``min(h_max, n_max)`` are omitted; when ``h_max >= n_max`` the table holds
    every half-plane walk. ``strips`` may supply precomputed strip counts
    ``{h: W}`` (all of the same length).
    """
    _check_args(h_max, n_max)
    top = min(h_max, n_max)
    split = default_split(n_max) if split is None else split
    if split < 0:
        raise ValueError(f"split must be >= 0, got {split}")
    low = min(top, split)
    workers = _accel.worker_count() if workers is None else workers
    strips = dict(strips or {})
    todo = [h for h in range(low + 1) if h not in strips]
    for h, w in zip(todo, _map(tm_strip_walks, [(h, n_max) for h in todo], workers)):
        strips[h] = w
    lengths = {len(strips[h]) for h in range(low + 1)}
    if lengths != {n_max + 1}:
        raise ValueError(f"strip tables disagree on n_max: lengths {sorted(lengths)}")
    entries = {}
    for n in range(1, n_max + 1):
        for h in range(min(low, n) + 1):
            c = strips[h][n] - (strips[h - 1][n] if h else 0)
            if c < 0:
                raise AssertionError(f"strip counts not monotone at n={n}, h={h}")
            if c:
                entries[n, h] = c
    if top > low:
        tall = tall_walks_by_height(n_max - low - 1, n_max)
        for h in range(low + 1, min(top + 1, len(tall))):
            for n in range(h, n_max + 1):
                if tall[h][n]:
                    entries[n, h] = tall[h][n]
    return HeightSeries("walks_max_height", entries, n_max=n_max, h_max=top)


def bridges_by_height(h_max, n_max, strict=True, workers=None) -> TwoVarSeries:
    """Per-height bridge series ``B_1 .. B_{h_max}``, each exact to ``n_max``."""
    _check_args(h_max, n_max, h_min=1)
    workers = _accel.worker_count() if workers is None else workers
    hs = list(range(1, h_max + 1))
    polys = _map(_bridge_task, [(h, n_max, strict) for h in hs], workers)
    return TwoVarSeries(dict(zip(hs, polys)))


def _bridge_task(h, n_max, strict):
    if n_max < h:
        return GFPoly.zero(n_max)
    return tm_bridges_per_height(h, n_max, strict=strict)

