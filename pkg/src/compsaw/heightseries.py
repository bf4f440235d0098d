"""Exact (length, height) count tables and their on-disk formats."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path

KINDS = ("bridges", "bridges_weak", "walks_max_height", "walks_strip_confined",
         "polygons_max_height", "irreducible_bridges")


@dataclass(frozen=True)
class HeightSeries:
    """Table ``(n, h) -> count`` of lattice objects by length and height.

    ``n_max`` and ``h_max`` bound the region in which every entry is exact.
    Missing entries inside that region are zero.
    """

    kind: str
    entries: dict = field(default_factory=dict)
    n_max: int = 0
    h_max: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown table kind {self.kind!r}")
        for (n, h), c in self.entries.items():
            if c < 0:
                raise ValueError(f"negative count at (n={n}, h={h})")
            if n > self.n_max or h > self.h_max:
                raise ValueError(f"entry (n={n}, h={h}) outside validity bounds")

    def __getitem__(self, nh):
        return self.entries.get(nh, 0)

    def heights(self, n):
        return {h: c for (m, h), c in self.entries.items() if m == n}

    def total(self, n):
        return sum(c for (m, _), c in self.entries.items() if m == n)

    def totals(self):
        return [self.total(n) for n in range(self.n_max + 1)]

    def to_csv(self, path=None):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "h", "count"])
        for (n, h) in sorted(self.entries):
            c = self.entries[n, h]
            if c:
                w.writerow([n, h, str(c)])
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text)
        return text

    def manifest(self):
        return {"kind": self.kind, "n_max": self.n_max, "h_max": self.h_max}

    @classmethod
    def from_csv(cls, source, kind, n_max=None, h_max=None):
        """Parse ``n,h,count`` CSV text (or a path). Bounds default to the data."""
        text = source if isinstance(source, str) and "\n" in source else Path(source).read_text()
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or [c.strip() for c in rows[0]] != ["n", "h", "count"]:
            raise ValueError("expected CSV header 'n,h,count'")
        entries = {}
        for row in rows[1:]:
            if not row:
                continue
            n, h, c = int(row[0]), int(row[1]), int(row[2])
            entries[n, h] = entries.get((n, h), 0) + c
        if n_max is None:
            n_max = max((n for n, _ in entries), default=0)
        if h_max is None:
            h_max = max((h for _, h in entries), default=0)
        return cls(kind, entries, n_max, h_max)


def write_manifest(path, table: HeightSeries, **extra):
    """Sidecar JSON recording what a CSV table holds."""
    data = dict(table.manifest(), **extra)
    Path(path).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
    return data
