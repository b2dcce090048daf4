"""Synthetic point clouds and Voronoi label maps standing in for tissue images."""
from __future__ import annotations

import math

import numpy as np
from scipy.spatial import cKDTree

from .ingest import LabelMatrix, PointCloud


def uniform_points(n_points: int, seed: int) -> PointCloud:
    """i.i.d. uniform points in the unit square."""
    if n_points < 3:
        raise ValueError(f"need at least 3 points, got {n_points}")
    rng = np.random.default_rng(seed)
    return PointCloud(rng.random((n_points, 2)))


def hex_lattice_shape(n_points: int) -> tuple[int, int]:
    """(rows, cols) with rows * cols >= n_points, least overshoot, then the most isotropic patch."""
    best = None
    for rows in range(1, n_points + 1):
        cols = math.ceil(n_points / rows)
        waste = rows * cols - n_points
        aspect = abs(math.log(cols / max(rows * math.sqrt(3) / 2, 1e-9)))
        key = (waste, aspect)
        if best is None or key < best[0]:
            best = (key, rows, cols)
    return best[1], best[2]


def hexjitter_points(n_points: int, sigma: float, seed: int) -> PointCloud:
    """Hexagonal lattice with Gaussian jitter of std ``sigma`` times the lattice spacing.

    Rows are filled in order, so when ``n_points`` has no good factorization the
    top row is partial. Coordinates are scaled so the lattice spans about one unit.
    """
    if n_points < 3:
        raise ValueError(f"need at least 3 points, got {n_points}")
    if sigma < 0:
        raise ValueError(f"sigma must be non-negative, got {sigma}")
    rows, cols = hex_lattice_shape(n_points)
    spacing = 1.0 / cols
    r, c = np.divmod(np.arange(n_points), cols)
    xy = np.column_stack([(c + 0.5 * (r % 2)) * spacing, r * spacing * math.sqrt(3) / 2])
    if sigma > 0:
        rng = np.random.default_rng(seed)
        xy = xy + rng.normal(scale=sigma * spacing, size=xy.shape)
    return PointCloud(xy)


def synth_points(kind: str, n_points: int, seed: int, sigma: float = 0.0) -> PointCloud:
    if kind == "uniform":
        return uniform_points(n_points, seed)
    if kind == "hexjitter":
        return hexjitter_points(n_points, sigma, seed)
    raise ValueError(f"unknown synthetic kind {kind!r}")


def voronoi_label_matrix(n_sites: int, shape: tuple[int, int] = (1024, 1024), seed: int = 0) -> LabelMatrix:
    """Voronoi tessellation raster: pixel label = 1 + index of its nearest site, and 0 on
    pixels that border a differently labeled pixel (4-neighbourhood, right/down side)."""
    rng = np.random.default_rng(seed)
    rows, cols = shape
    sites = rng.random((n_sites, 2)) * [cols, rows]
    rr, cc = np.indices(shape)
    _, nearest = cKDTree(sites).query(np.column_stack([cc.ravel(), rr.ravel()]))
    labels = nearest.reshape(shape).astype(np.int64) + 1
    boundary = np.zeros(shape, dtype=bool)
    boundary[:, :-1] |= labels[:, :-1] != labels[:, 1:]
    boundary[:-1, :] |= labels[:-1, :] != labels[1:, :]
    labels[boundary] = 0
    return LabelMatrix(labels)
