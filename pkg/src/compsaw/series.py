"""Exact truncated power series and the bridge/irreducible-bridge algebra.

Every series records ``degree_valid``, the highest power of ``z`` whose
coefficient is known exactly. Arithmetic never reports coefficients past
the smallest ``degree_valid`` among its inputs.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .heightseries import HeightSeries


class DegreeMismatch(ValueError):
    pass


@dataclass(frozen=True)
class GFPoly:
    """Truncated series ``sum_n coeffs[n] z**n`` exact through ``degree_valid``."""

    coeffs: tuple
    degree_valid: int

    def __post_init__(self):
        if self.degree_valid < 0:
            raise ValueError("degree_valid must be >= 0")
        c = tuple(int(x) for x in self.coeffs)[: self.degree_valid + 1]
        c = c + (0,) * (self.degree_valid + 1 - len(c))
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zero(cls, degree):
        return cls((), degree)

    @classmethod
    def monomial(cls, power, degree, coeff=1):
        c = [0] * (degree + 1)
        if power <= degree:
            c[power] = coeff
        return cls(tuple(c), degree)

    def __getitem__(self, n):
        if n > self.degree_valid:
            raise IndexError(f"coefficient z^{n} beyond degree_valid={self.degree_valid}")
        return self.coeffs[n] if n >= 0 else 0

    def __len__(self):
        return self.degree_valid + 1

    def __add__(self, other):
        return series_add(self, other)

    def __sub__(self, other):
        return series_add(self, other, sign=-1)

    def __mul__(self, other):
        return series_mul(self, other)

    def truncate(self, degree):
        if degree > self.degree_valid:
            raise DegreeMismatch(f"cannot extend validity from {self.degree_valid} to {degree}")
        return GFPoly(self.coeffs[: degree + 1], degree)

    def is_zero(self):
        return not any(self.coeffs)

    def to_json(self, h=None):
        data = {"coeffs": [str(c) for c in self.coeffs]}
        if h is not None:
            data = {"h": int(h), **data}
        return data

    @classmethod
    def from_json(cls, data):
        coeffs = tuple(int(c) for c in data["coeffs"])
        return cls(coeffs, len(coeffs) - 1)


def _check_same(p, q):
    if p.degree_valid != q.degree_valid:
        raise DegreeMismatch(
            f"degree_valid mismatch: {p.degree_valid} vs {q.degree_valid}")


def series_add(p: GFPoly, q: GFPoly, sign=1) -> GFPoly:
    _check_same(p, q)
    return GFPoly(tuple(a + sign * b for a, b in zip(p.coeffs, q.coeffs)), p.degree_valid)


def series_mul(p: GFPoly, q: GFPoly) -> GFPoly:
    _check_same(p, q)
    d = p.degree_valid
    out = [0] * (d + 1)
    qc = q.coeffs
    for i, a in enumerate(p.coeffs):
        if a:
            for j in range(d + 1 - i):
                b = qc[j]
                if b:
                    out[i + j] += a * b
    return GFPoly(tuple(out), d)


def geometric_inverse(p: GFPoly) -> GFPoly:
    """``sum_{m >= 0} p**m`` truncated; ``p`` must have zero constant term."""
    if p.coeffs[0] != 0:
        raise ValueError("geometric_inverse needs a series with zero constant term")
    d = p.degree_valid
    # g = 1 + p*g solved coefficient by coefficient
    g = [0] * (d + 1)
    g[0] = 1
    for n in range(1, d + 1):
        g[n] = sum(p.coeffs[k] * g[n - k] for k in range(1, n + 1))
    return GFPoly(tuple(g), d)


# --------------------------------------------------------------------------
# two-variable series: height-indexed families of GFPoly


@dataclass(frozen=True)
class TwoVarSeries:
    """``sum_h polys[h](z) * t**h`` over heights ``h >= 1`` with ``t = e^{-u}``."""

    polys: dict

    def __post_init__(self):
        if any(h < 1 for h in self.polys):
            raise ValueError("heights start at 1")
        degs = {p.degree_valid for p in self.polys.values()}
        if len(degs) > 1:
            raise DegreeMismatch(f"member series disagree on degree_valid: {sorted(degs)}")

    @property
    def degree_valid(self):
        return next(iter(self.polys.values())).degree_valid if self.polys else 0

    @property
    def h_max(self):
        return max(self.polys, default=0)

    def __getitem__(self, h):
        return self.polys[h]

    def to_table(self, kind="bridges") -> HeightSeries:
        d = self.degree_valid
        entries = {(n, h): c for h, p in self.polys.items()
                   for n, c in enumerate(p.coeffs) if c}
        return HeightSeries(kind, entries, n_max=d, h_max=max(self.h_max, 0))

    @classmethod
    def from_table(cls, table: HeightSeries, h_max=None) -> "TwoVarSeries":
        h_max = table.h_max if h_max is None else h_max
        polys = {}
        for h in range(1, h_max + 1):
            c = [table[n, h] for n in range(table.n_max + 1)]
            polys[h] = GFPoly(tuple(c), table.n_max)
        return cls(polys)

    def to_json(self):
        return [self.polys[h].to_json(h) for h in sorted(self.polys)]

    def write_json(self, path):
        Path(path).write_text(json.dumps(self.to_json(), indent=1) + "\n")

    @classmethod
    def from_json(cls, data):
        if isinstance(data, (str, Path)):
            data = json.loads(Path(data).read_text())
        if isinstance(data, dict):
            data = [data]
        return cls({int(d["h"]): GFPoly.from_json(d) for d in data})


def _require_heights(series, h_max):
    missing = [h for h in range(1, h_max + 1) if h not in series.polys]
    if missing:
        raise ValueError(f"series lacks heights {missing}")


def irreducible_from_bridges(B: TwoVarSeries, h_max=None) -> TwoVarSeries:
    """Peel off concatenations: ``A_h = B_h - sum_{k<h} A_{h-k} B_k``."""
    h_max = B.h_max if h_max is None else h_max
    _require_heights(B, h_max)
    A = {}
    for h in range(1, h_max + 1):
        acc = B[h]
        for k in range(1, h):
            acc = acc - A[h - k] * B[k]
        A[h] = acc
    return TwoVarSeries(A)


def validity_bound(w_max):
    """Highest order at which bridges rebuilt from heights <= w_max are exact.

    Irreducible bridges of height h >= 2 need at least 3h steps, so those
    of height w_max + 1 and above first appear at order 3 w_max + 3.
    """
    return 3 * w_max + 2


def extend_bridges(A: TwoVarSeries, n_target, w_max=None) -> TwoVarSeries:
    """Rebuild all bridge heights from irreducibles: ``B = A / (1 - A)``.

    Only heights ``1..w_max`` of ``A`` are used; the result is exact through
    order ``min(A.degree_valid, 3 w_max + 2)`` and ``n_target`` may not exceed
    that. Heights of the output run up to ``n_target`` (a bridge of height h
    has at least h steps).
    """
    w_max = A.h_max if w_max is None else w_max
    _require_heights(A, w_max)
    bound = min(validity_bound(w_max), A.degree_valid)
    if n_target > bound:
        raise ValueError(
            f"order {n_target} is beyond the guaranteed validity {bound} for w_max={w_max}")
    Ai = {h: A[h].truncate(n_target) for h in range(1, w_max + 1)}
    B = {}
    for H in range(1, n_target + 1):
        acc = Ai[H] if H <= w_max else GFPoly.zero(n_target)
        for k in range(1, H):
            if H - k <= w_max:
                acc = acc + Ai[H - k] * B[k]
        B[H] = acc
    return TwoVarSeries(B)
