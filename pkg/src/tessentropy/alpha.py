"""Alpha-complex filtration on the Delaunay triangulation of a planar point cloud.

Filtration values use the squared-radius convention: vertices enter at 0,
triangles at their squared circumradius, and Gabriel edges at their squared
half-length. An edge whose diametral disk strictly contains the opposite vertex
of an incident triangle enters together with its cheapest incident triangle.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .delaunay import DegenerateInputError, delaunay_triangles

Simplex = tuple[int, ...]

__all__ = [
    "DegenerateInputError",
    "FilteredComplex",
    "Simplex",
    "alpha_filtration",
    "alpha_complex",
    "delaunay_triangulate",
    "faces",
    "read_complex_dump",
    "write_complex_dump",
]


def faces(s: Simplex) -> list[Simplex]:
    """Codimension-one faces of ``s`` (empty for a vertex)."""
    if len(s) == 1:
        return []
    return [s[:i] + s[i + 1:] for i in range(len(s))]


@dataclass
class FilteredComplex:
    points: np.ndarray
    simplices: list[Simplex]
    values: list[float]
    _index: dict[Simplex, int] = field(init=False, repr=False)

    def __post_init__(self):
        if len(self.simplices) != len(self.values):
            raise ValueError("simplices and values differ in length")
        self._index = {s: i for i, s in enumerate(self.simplices)}

    def __len__(self):
        return len(self.simplices)

    def value(self, s: Simplex) -> float:
        return self.values[self._index[s]]

    def with_values(self, values: Sequence[float]) -> "FilteredComplex":
        return FilteredComplex(self.points, list(self.simplices), [float(v) for v in values])

    def count(self, dim: int) -> int:
        return sum(1 for s in self.simplices if len(s) == dim + 1)

    def euler_characteristic(self) -> int:
        return sum((-1) ** (len(s) - 1) for s in self.simplices)

    def max_value(self) -> float:
        return max(self.values)

    def subcomplex(self, r: float) -> list[Simplex]:
        """Simplices with value <= r."""
        return [s for s, v in zip(self.simplices, self.values) if v <= r]

    def monotonicity_violations(self) -> list[tuple[Simplex, Simplex]]:
        bad = []
        for s, v in zip(self.simplices, self.values):
            for f in faces(s):
                if f not in self._index:
                    raise ValueError(f"complex is not closed: face {f} of {s} missing")
                if self.value(f) > v:
                    bad.append((f, s))
        return bad


def _as_xy(pc) -> np.ndarray:
    xy = getattr(pc, "points", pc)
    return np.asarray(xy, dtype=float)


def delaunay_triangulate(pc) -> list[Simplex]:
    """All vertices, edges and triangles of the Delaunay triangulation, sorted by (dim, vertices)."""
    xy = _as_xy(pc)
    tris = delaunay_triangles(xy)
    edges = sorted({e for t in tris for e in faces(t)})
    verts = [(i,) for i in range(len(xy))]
    return verts + edges + tris


def _sq_circumradius(a, b, c) -> float:
    ab = (b[0] - a[0]) ** 2 + (b[1] - a[1]) ** 2
    bc = (c[0] - b[0]) ** 2 + (c[1] - b[1]) ** 2
    ca = (a[0] - c[0]) ** 2 + (a[1] - c[1]) ** 2
    area2 = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return ab * bc * ca / (4.0 * area2 * area2)


def _encroaches(a, b, c) -> bool:
    """True when c lies strictly inside the disk with diameter ab."""
    return (a[0] - c[0]) * (b[0] - c[0]) + (a[1] - c[1]) * (b[1] - c[1]) < 0


def alpha_filtration(pc, delaunay: Iterable[Simplex]) -> FilteredComplex:
    xy = _as_xy(pc)
    pts = xy.tolist()
    simplices = sorted((tuple(s) for s in delaunay), key=lambda s: (len(s), s))

    value: dict[Simplex, float] = {}
    cofaces: dict[Simplex, list[Simplex]] = {}
    for s in simplices:
        if len(s) == 3:
            value[s] = _sq_circumradius(*(pts[i] for i in s))
            for f in faces(s):
                cofaces.setdefault(f, []).append(s)
    for s in simplices:
        if len(s) == 1:
            value[s] = 0.0
        elif len(s) == 2:
            a, b = pts[s[0]], pts[s[1]]
            tris = cofaces.get(s, [])
            attached = any(
                _encroaches(a, b, pts[next(i for i in t if i not in s)]) for t in tris
            )
            if attached:
                value[s] = min(value[t] for t in tris)
            else:
                value[s] = ((a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2) / 4.0

    # Enforce face <= coface; a no-op for exact geometry, guards rounding.
    for s in reversed(simplices):
        for f in faces(s):
            if value[f] > value[s]:
                value[f] = value[s]
    return FilteredComplex(xy, simplices, [value[s] for s in simplices])


def alpha_complex(pc) -> FilteredComplex:
    return alpha_filtration(pc, delaunay_triangulate(pc))


def write_complex_dump(fc: FilteredComplex, fh) -> None:
    tags = {1: "v", 2: "e", 3: "t"}
    for s, v in zip(fc.simplices, fc.values):
        fh.write(f"{tags[len(s)]} {' '.join(map(str, s))} {v!r}\n")


def read_complex_dump(fh, points=None) -> FilteredComplex:
    sizes = {"v": 1, "e": 2, "t": 3}
    simplices, values = [], []
    for lineno, line in enumerate(fh, 1):
        parts = line.split()
        if not parts:
            continue
        if parts[0] not in sizes or len(parts) != sizes[parts[0]] + 2:
            raise ValueError(f"line {lineno}: malformed complex record {line.rstrip()!r}")
        simplices.append(tuple(sorted(int(p) for p in parts[1:-1])))
        values.append(float(parts[-1]))
    pts = np.empty((0, 2)) if points is None else np.asarray(points, dtype=float)
    return FilteredComplex(pts, simplices, values)
