"""Incremental Delaunay triangulation (Bowyer-Watson cavity digging).

Triangles are kept as a map from each directed edge (u, v) to the apex w of the
counter-clockwise triangle (u, v, w). The outside of the convex hull is covered
by ghost triangles (a, b, GHOST) whose directed edge a -> b is a hull edge seen
from outside. Cocircular ties go through ``incircle_perturbed``. That makes the
result independent of insertion order, so the triangulation is unique.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .predicates import incircle_perturbed, orient2d

GHOST = -1


class DegenerateInputError(ValueError):
    pass


class _Triangulation:
    def __init__(self, pts):
        self.pts = pts
        self.apex: dict[tuple[int, int], int] = {}
        self.last: tuple[int, int] | None = None

    def add(self, u, v, w):
        self.apex[(u, v)] = w
        self.apex[(v, w)] = u
        self.apex[(w, u)] = v
        if GHOST not in (u, v, w):
            self.last = (u, v)

    def delete(self, u, v, w):
        del self.apex[(u, v)]
        del self.apex[(v, w)]
        del self.apex[(w, u)]

    def conflicts(self, u, v, w, p) -> bool:
        if GHOST in (u, v, w):
            while w != GHOST:
                u, v, w = v, w, u
            pts = self.pts
            o = orient2d(pts[u], pts[v], pts[p])
            if o != 0:
                return o > 0
            return _strictly_between(pts[u], pts[v], pts[p])
        return incircle_perturbed(self.pts, u, v, w, p) > 0

    def locate(self, p):
        """Return a triangle in conflict with p, found by a visibility walk."""
        pts = self.pts
        a, b = self.last
        c = self.apex[(a, b)]
        came = None
        for _ in range(4 * len(self.apex) + 16):
            for x, y in ((a, b), (b, c), (c, a)):
                if (x, y) == came:
                    continue
                if orient2d(pts[x], pts[y], pts[p]) < 0:
                    z = self.apex[(y, x)]
                    if z == GHOST:
                        return y, x, GHOST
                    a, b, c = y, x, z
                    came = (y, x)
                    break
            else:
                return a, b, c
        # Walk did not settle; fall back to a scan (never hit in practice).
        for (u, v), w in self.apex.items():
            if self.conflicts(u, v, w, p):
                return u, v, w
        raise RuntimeError("no triangle in conflict with inserted point")

    def insert(self, p):
        u, v, w = self.locate(p)
        self.delete(u, v, w)
        stack = [(v, w), (w, u), (u, v)]
        while stack:
            v, w = stack.pop()
            x = self.apex[(w, v)]
            if self.conflicts(w, v, x, p):
                self.delete(w, v, x)
                stack.append((x, w))
                stack.append((v, x))
            else:
                self.add(p, v, w)

    def triangles(self):
        seen = set()
        for (u, v), w in self.apex.items():
            if GHOST in (u, v, w):
                continue
            seen.add(tuple(sorted((u, v, w))))
        return sorted(seen)


def _strictly_between(a, b, p) -> bool:
    ax, ay, bx, by = map(Fraction, (a[0], a[1], b[0], b[1]))
    px, py = Fraction(p[0]), Fraction(p[1])
    return (px - ax) * (bx - ax) + (py - ay) * (by - ay) > 0 and (
        (px - bx) * (ax - bx) + (py - by) * (ay - by) > 0
    )


def _insertion_order(xy: np.ndarray) -> list[int]:
    # Snake order over horizontal strips keeps the walk short.
    n = len(xy)
    strips = max(1, int(math.sqrt(n / 2)))
    lo, hi = xy[:, 1].min(), xy[:, 1].max()
    span = hi - lo if hi > lo else 1.0
    strip = np.minimum(((xy[:, 1] - lo) / span * strips).astype(int), strips - 1)
    xkey = np.where(strip % 2 == 0, xy[:, 0], -xy[:, 0])
    return [int(i) for i in np.lexsort((np.arange(n), xkey, strip))]


def check_points(xy: np.ndarray) -> None:
    if xy.ndim != 2 or xy.shape[1] != 2:
        raise ValueError(f"expected an (n, 2) array, got shape {xy.shape}")
    if not np.all(np.isfinite(xy)):
        raise ValueError("point coordinates must be finite")
    if len(xy) < 3:
        raise DegenerateInputError(f"degenerate input: need at least 3 points, got {len(xy)}")
    seen: dict[tuple[float, float], int] = {}
    for i, (x, y) in enumerate(xy.tolist()):
        j = seen.setdefault((x, y), i)
        if j != i:
            raise DegenerateInputError(f"duplicate points {j} and {i} at ({x}, {y})")


def delaunay_triangles(xy, order=None) -> list[tuple[int, int, int]]:
    """Sorted vertex triples of the Delaunay triangles of ``xy`` (shape (n, 2)).

    ``order`` overrides the insertion order; the output does not depend on it.
    """
    xy = np.asarray(xy, dtype=float)
    check_points(xy)
    pts = [tuple(p) for p in xy.tolist()]
    order = _insertion_order(xy) if order is None else [int(i) for i in order]
    if sorted(order) != list(range(len(pts))):
        raise ValueError("order must be a permutation of the point indices")

    a, b = order[0], order[1]
    c = next((k for k in order[2:] if orient2d(pts[a], pts[b], pts[k]) != 0), None)
    if c is None:
        raise DegenerateInputError("degenerate input: all points are collinear")
    if orient2d(pts[a], pts[b], pts[c]) < 0:
        a, b = b, a

    tri = _Triangulation(pts)
    tri.add(a, b, c)
    for x, y in ((a, b), (b, c), (c, a)):
        tri.add(y, x, GHOST)
    for p in order:
        if p not in (a, b, c):
            tri.insert(p)
    return tri.triangles()
