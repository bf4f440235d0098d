"""Height-weighted partition functions built from exact count tables.

Values are evaluated with mpmath at a working precision of 50 significant
digits by default: ``e^{-beta n}`` and the stretched-exponential factor span
many orders of magnitude, and the analysis takes differences of logarithms.
"""
from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import mpmath

from .heightseries import HeightSeries

DEFAULT_DPS = 50


@dataclass(frozen=True)
class Constants:
    """Fixed inputs, stored as given and never re-derived."""

    mu_sq_lattice: str = "2.63815853035"  # e^beta, square-lattice connective constant
    sigma: Fraction = Fraction(3, 7)
    g_saws: Fraction = Fraction(3, 16)
    g_bridges: Fraction = Fraction(-13, 28)
    g_polygons: Fraction = Fraction(-11, 7)
    gamma_full: Fraction = Fraction(11, 32)
    gamma_half: Fraction = Fraction(-3, 64)
    gamma_bridges: Fraction = Fraction(-7, 16)

    @property
    def alpha(self):
        return self.g_saws - self.g_bridges

    def exponents(self):
        return {"3/16": self.g_saws, "-13/28": self.g_bridges, "-11/7": self.g_polygons,
                "11/32": self.gamma_full, "-3/64": self.gamma_half,
                "-7/16": self.gamma_bridges}


CONSTANTS = Constants()


def beta(dps=DEFAULT_DPS):
    """``log e^beta`` at the requested precision."""
    with mpmath.workdps(dps):
        return +mpmath.log(mpmath.mpf(CONSTANTS.mu_sq_lattice))


def u_from_weight(t, dps=DEFAULT_DPS):
    """``u = -log t`` for a fugacity ``t = e^{-u}`` given as a decimal."""
    with mpmath.workdps(dps):
        return -mpmath.log(mpmath.mpf(str(t)))


@dataclass(frozen=True)
class WeightedSeries:
    """Real sequence ``n -> a_n(u)`` derived from an exact table.

    ``beta_mode`` is ``"normalized"`` when the values carry ``e^{-beta n}``
    and ``"raw"`` otherwise. ``values`` maps ``n`` to an mpmath float.
    """

    u: object
    beta_mode: str
    values: dict
    provenance: str = ""
    dps: int = DEFAULT_DPS
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.beta_mode not in ("normalized", "raw"):
            raise ValueError(f"beta_mode must be 'normalized' or 'raw', got {self.beta_mode!r}")
        if any(v <= 0 for v in self.values.values()):
            raise ValueError("weighted series values must be positive")

    @property
    def n_values(self):
        return sorted(self.values)

    def __getitem__(self, n):
        return self.values[n]

    def __len__(self):
        return len(self.values)

    def as_raw(self):
        """Same series with any ``e^{-beta n}`` factor removed."""
        if self.beta_mode == "raw":
            return self
        with mpmath.workdps(self.dps):
            b = beta(self.dps)
            vals = {n: v * mpmath.exp(b * n) for n, v in self.values.items()}
        return WeightedSeries(self.u, "raw", vals, self.provenance, self.dps, dict(self.meta))

    def as_normalized(self):
        if self.beta_mode == "normalized":
            return self
        with mpmath.workdps(self.dps):
            b = beta(self.dps)
            vals = {n: v * mpmath.exp(-b * n) for n, v in self.values.items()}
        return WeightedSeries(self.u, "normalized", vals, self.provenance, self.dps,
                              dict(self.meta))

    def header(self):
        return {"u": mpmath.nstr(mpmath.mpf(self.u), self.dps), "beta_mode": self.beta_mode,
                "provenance": self.provenance, "dps": self.dps, **self.meta}

    def to_csv(self, path=None):
        """``# {json header}`` line, then ``n,value`` rows in scientific notation."""
        buf = io.StringIO()
        buf.write("# " + json.dumps(self.header(), sort_keys=True) + "\n")
        buf.write("n,value\n")
        for n in self.n_values:
            buf.write(f"{n},{_sci(self.values[n], self.dps)}\n")
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text)
        return text

    @classmethod
    def from_csv(cls, source):
        text = source if isinstance(source, str) and "\n" in source else Path(source).read_text()
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("#"):
            raise ValueError("weighted series CSV must start with a '# {json}' header")
        head = json.loads(lines[0][1:])
        if lines[1].strip() != "n,value":
            raise ValueError("expected column header 'n,value'")
        dps = int(head.pop("dps", DEFAULT_DPS))
        with mpmath.workdps(dps):
            vals = {}
            for ln in lines[2:]:
                n, v = ln.split(",")
                vals[int(n)] = mpmath.mpf(v)
            u = mpmath.mpf(head.pop("u"))
        mode = head.pop("beta_mode")
        prov = head.pop("provenance", "")
        return cls(u, mode, vals, prov, dps, head)


def _sci(x, dps):
    return mpmath.nstr(x, dps, min_fixed=1, max_fixed=0, strip_zeros=False)


def weight_by_height(table, u, beta_mode="normalized", dps=DEFAULT_DPS) -> WeightedSeries:
    """``a_n = sum_h count(n, h) e^{-u h}``, times ``e^{-beta n}`` if normalized.

    Parameters
    ----------
    table : HeightSeries or TwoVarSeries
        Exact counts. Lengths with no objects at all (odd polygon lengths)
        are left out so that every value is positive.
    u : float, str or mpf
        Compression parameter, ``u >= 0``.
    """
    if hasattr(table, "to_table"):
        table = table.to_table()
    if not isinstance(table, HeightSeries):
        raise TypeError("weight_by_height needs a HeightSeries")
    if not table.entries:
        raise ValueError("cannot weight an empty table")
    if beta_mode not in ("normalized", "raw"):
        raise ValueError(f"beta_mode must be 'normalized' or 'raw', got {beta_mode!r}")
    with mpmath.workdps(dps):
        uu = mpmath.mpf(u)
        if uu < 0:
            raise ValueError("u must be >= 0")
        t = mpmath.exp(-uu)
        b = beta(dps)
        per_n = {}
        for (n, h), c in sorted(table.entries.items()):
            if n >= 1 and c:
                per_n[n] = per_n.get(n, 0) + mpmath.mpf(c) * t ** h
        if beta_mode == "normalized":
            per_n = {n: v * mpmath.exp(-b * n) for n, v in per_n.items()}
    return WeightedSeries(uu, beta_mode, per_n, table.kind, dps,
                          {"n_max": table.n_max, "h_max": table.h_max})


def concat_probability(counts, n, dps=DEFAULT_DPS):
    """``p_n = c_{2n} / c_n**2``, the chance two n-step walks concatenate.

    The ``e^{-beta n}`` factors in ``q_{2n} / q_n**2`` cancel exactly. In one
    dimension ``c_n = 2`` gives ``p_n = 1/2``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if len(counts) <= 2 * n or counts[n] == 0:
        raise ValueError(f"counts must extend to order {2 * n}")
    with mpmath.workdps(dps):
        return mpmath.mpf(counts[2 * n]) / mpmath.mpf(counts[n]) ** 2
