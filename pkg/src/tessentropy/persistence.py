"""Persistence barcodes in dimensions 0 and 1 over Z/2.

``compute_persistence`` runs the standard column reduction on the boundary
matrix, with each column stored as a Python int used as a bitset.
``dim0_union_find`` recomputes the dimension-0 part with the elder rule. It
shares no code with the reduction and serves as its cross-check.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Optional

from .alpha import FilteredComplex, Simplex, faces

Interval = tuple[int, float, float]


class NonMonotoneFiltrationError(ValueError):
    pass


@dataclass(frozen=True)
class Barcode:
    """Multiset of (dim, birth, death) intervals; death may be ``math.inf``."""

    intervals: tuple[Interval, ...] = ()

    def __post_init__(self):
        ivs = tuple(sorted((int(d), float(b), float(e)) for d, b, e in self.intervals))
        for d, b, e in ivs:
            if not b <= e:
                raise ValueError(f"interval with birth {b} > death {e}")
        object.__setattr__(self, "intervals", ivs)

    def __len__(self):
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def dim(self, d: int) -> "Barcode":
        return Barcode(tuple(iv for iv in self.intervals if iv[0] == d))

    def finite(self) -> "Barcode":
        return Barcode(tuple(iv for iv in self.intervals if math.isfinite(iv[2])))

    def lengths(self, d: Optional[int] = None) -> list[float]:
        return [e - b for dd, b, e in self.intervals if d is None or dd == d]

    def multiset(self) -> Counter:
        return Counter(self.intervals)


@dataclass(frozen=True)
class PersistencePair:
    dim: int
    birth_simplex: Simplex
    death_simplex: Optional[Simplex]
    birth: float
    death: float


def filtration_order(fc: FilteredComplex) -> list[int]:
    """Indices of ``fc.simplices`` sorted by (value, dim, vertices)."""
    return sorted(
        range(len(fc)),
        key=lambda i: (fc.values[i], len(fc.simplices[i]), fc.simplices[i]),
    )


def _check_monotone(fc: FilteredComplex) -> None:
    bad = fc.monotonicity_violations()
    if bad:
        f, s = bad[0]
        raise NonMonotoneFiltrationError(
            f"face {f} (value {fc.value(f)}) enters after coface {s} (value {fc.value(s)})"
        )


def persistence_pairs(fc: FilteredComplex) -> list[PersistencePair]:
    """All pairs from column reduction, including zero-length ones."""
    _check_monotone(fc)
    order = filtration_order(fc)
    simplices = [fc.simplices[i] for i in order]
    values = [fc.values[i] for i in order]
    pos = {s: k for k, s in enumerate(simplices)}

    pivot_of: dict[int, int] = {}  # lowest row -> reduced column
    columns: dict[int, int] = {}
    paired: set[int] = set()
    pairs = []
    for j, s in enumerate(simplices):
        col = 0
        for f in faces(s):
            col |= 1 << pos[f]
        while col:
            low = col.bit_length() - 1
            k = pivot_of.get(low)
            if k is None:
                break
            col ^= columns[k]
        if col:
            low = col.bit_length() - 1
            pivot_of[low] = j
            columns[j] = col
            paired.update((low, j))
            b = simplices[low]
            pairs.append(PersistencePair(len(b) - 1, b, s, values[low], values[j]))

    for k, s in enumerate(simplices):
        if k not in paired:
            pairs.append(PersistencePair(len(s) - 1, s, None, values[k], math.inf))
    return pairs


def compute_persistence(fc: FilteredComplex) -> Barcode:
    """Barcode of the filtration, zero-length intervals discarded."""
    return Barcode(
        tuple(
            (p.dim, p.birth, p.death)
            for p in persistence_pairs(fc)
            if p.death > p.birth and p.dim <= 1
        )
    )


def dim0_union_find(fc: FilteredComplex) -> Barcode:
    """Dimension-0 barcode by union-find with the elder rule."""
    order = filtration_order(fc)
    parent: dict[int, int] = {}
    # root -> (birth value, filtration position) of the component's oldest vertex
    oldest: dict[int, tuple[float, int]] = {}

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    intervals = []
    for k, i in enumerate(order):
        s, v = fc.simplices[i], fc.values[i]
        if len(s) == 1:
            parent[s[0]] = s[0]
            oldest[s[0]] = (v, k)
        elif len(s) == 2:
            ra, rb = find(s[0]), find(s[1])
            if ra == rb:
                continue
            if oldest[ra][1] > oldest[rb][1]:
                ra, rb = rb, ra
            birth = oldest[rb][0]
            if v > birth:
                intervals.append((0, birth, v))
            parent[rb] = ra
    roots = {find(x) for x in parent}
    intervals.extend((0, oldest[r][0], math.inf) for r in roots)
    return Barcode(tuple(intervals))


def format_float(x: float) -> str:
    """Shortest round-trip decimal, with integral values printed without '.0'."""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    r = repr(float(x))
    return r[:-2] if r.endswith(".0") else r


def write_barcode(b: Barcode, fh) -> None:
    fh.write("dim,birth,death\n")
    for d, birth, death in b:
        fh.write(f"{d},{format_float(birth)},{format_float(death)}\n")


def read_barcode(fh) -> Barcode:
    lines = iter(enumerate(fh, 1))
    header = next(lines, (1, ""))[1].strip()
    if header != "dim,birth,death":
        raise ValueError(f"line 1: expected header 'dim,birth,death', got {header!r}")
    intervals = []
    for lineno, line in lines:
        line = line.strip()
        if not line:
            continue
        parts = line.split(",")
        try:
            if len(parts) != 3:
                raise ValueError("expected 3 fields")
            d, birth, death = int(parts[0]), float(parts[1]), float(parts[2])
            if d < 0 or not birth <= death or math.isnan(birth):
                raise ValueError("invalid interval")
        except ValueError as exc:
            raise ValueError(f"line {lineno}: malformed barcode record {line!r} ({exc})") from None
        intervals.append((d, birth, death))
    return Barcode(tuple(intervals))

