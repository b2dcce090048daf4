"""Labeled segmentation rasters: parsing, spiral cell selection, centroids.

Coordinates follow image convention: x is the column index and y the row index.
Label 0 marks cell boundaries; any positive label is a cell ID.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

MAX_LABEL = 2**31 - 1


class ParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class InsufficientCellsError(ValueError):
    def __init__(self, wanted: int, found: int):
        super().__init__(f"insufficient cells: wanted {wanted}, found {found}")
        self.wanted = wanted
        self.found = found


@dataclass
class LabelMatrix:
    labels: np.ndarray

    def __post_init__(self):
        labels = np.asarray(self.labels)
        if labels.ndim != 2 or labels.shape[0] < 1 or labels.shape[1] < 1:
            raise ValueError(f"label matrix must be a non-empty 2D grid, got shape {labels.shape}")
        if labels.dtype.kind not in "iu":
            if not np.all(labels == np.round(labels)):
                raise ValueError("labels must be integers")
        if labels.min() < 0:
            raise ValueError("labels must be non-negative")
        self.labels = labels.astype(np.int64)

    @property
    def rows(self) -> int:
        return self.labels.shape[0]

    @property
    def cols(self) -> int:
        return self.labels.shape[1]

    def cell_ids(self) -> list[int]:
        ids = np.unique(self.labels)
        return [int(i) for i in ids if i != 0]


@dataclass
class PointCloud:
    points: np.ndarray
    source_ids: Optional[list[int]] = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float).reshape(-1, 2)
        if not np.all(np.isfinite(pts)):
            raise ValueError("point coordinates must be finite")
        self.points = pts
        if self.source_ids is not None:
            self.source_ids = [int(i) for i in self.source_ids]
            if len(self.source_ids) != len(pts):
                raise ValueError("source_ids and points differ in length")
            if len(set(self.source_ids)) != len(self.source_ids):
                raise ValueError("source_ids must be distinct")

    def __len__(self):
        return len(self.points)


# -- parsing ----------------------------------------------------------------

_TOKEN = re.compile(rb"#[^\n]*|\S+")


def _pgm_tokens(data: bytes, start: int = 0):
    for m in _TOKEN.finditer(data, start):
        if not m.group().startswith(b"#"):
            yield m


def _header_int(tokens, what: str, end: int) -> tuple[int, int]:
    m = next(tokens, None)
    if m is None:
        raise ParseError(f"malformed PGM header: missing {what}", end)
    if not m.group().isdigit():
        raise ParseError(f"malformed PGM header: bad {what} {m.group()[:20]!r}", m.start())
    return int(m.group()), m.end()


def _parse_pgm(data: bytes) -> LabelMatrix:
    tokens = _pgm_tokens(data)
    magic = next(tokens, None)
    if magic is None or magic.group() not in (b"P2", b"P5"):
        raise ParseError("malformed PGM header: expected magic P2 or P5", 0)
    width, _ = _header_int(tokens, "width", len(data))
    height, _ = _header_int(tokens, "height", len(data))
    maxval, end = _header_int(tokens, "maxval", len(data))
    if width < 1 or height < 1:
        raise ParseError(f"malformed PGM header: dimensions {width}x{height}", 0)
    if not 1 <= maxval <= 65535:
        raise ParseError(f"malformed PGM header: maxval {maxval} outside 1..65535", end)
    count = width * height

    if magic.group() == b"P5":
        start = end + 1  # exactly one whitespace byte after maxval
        nbytes = 2 if maxval > 255 else 1
        raster = data[start:]
        if len(raster) != count * nbytes:
            raise ParseError(
                f"dimension mismatch: {width}x{height} needs {count * nbytes} raster bytes, "
                f"found {len(raster)}",
                start,
            )
        values = np.frombuffer(raster, dtype=">u2" if nbytes == 2 else np.uint8).astype(np.int64)
        over = np.flatnonzero(values > maxval)
        if over.size:
            raise ParseError(f"value overflow: {values[over[0]]} > maxval {maxval}", start + over[0] * nbytes)
        return LabelMatrix(values.reshape(height, width))

    values = []
    for m in _pgm_tokens(data, end):
        tok = m.group()
        if not tok.isdigit():
            raise ParseError(f"non-integer pixel value {tok[:20]!r}", m.start())
        v = int(tok)
        if v > maxval:
            raise ParseError(f"value overflow: {v} > maxval {maxval}", m.start())
        if len(values) == count:
            raise ParseError(f"dimension mismatch: more than {count} pixel values", m.start())
        values.append(v)
    if len(values) != count:
        raise ParseError(f"dimension mismatch: expected {count} pixel values, found {len(values)}", len(data))
    return LabelMatrix(np.array(values, dtype=np.int64).reshape(height, width))


def _parse_csv(data: bytes) -> LabelMatrix:
    rows = []
    offset = 0
    for line in data.splitlines(keepends=True):
        content = line.rstrip(b"\r\n")
        if content.strip():
            row = []
            pos = offset
            for field in content.split(b","):
                tok = field.strip()
                if not tok.isdigit():
                    raise ParseError(f"invalid label {tok[:20].decode(errors='replace')!r}", pos)
                v = int(tok)
                if v > MAX_LABEL:
                    raise ParseError(f"value overflow: {v} > {MAX_LABEL}", pos)
                row.append(v)
                pos += len(field) + 1
            if rows and len(row) != len(rows[0]):
                raise ParseError(
                    f"dimension mismatch: row {len(rows) + 1} has {len(row)} columns, expected {len(rows[0])}",
                    offset,
                )
            rows.append(row)
        offset += len(line)
    if not rows:
        raise ParseError("empty label matrix", 0)
    return LabelMatrix(np.array(rows, dtype=np.int64))


def load_label_matrix(data: bytes, fmt: str) -> LabelMatrix:
    """Parse raw file content. ``fmt`` is "pgm16" (or "pgm", P2/P5) or "csv"."""
    if fmt in ("pgm", "pgm16"):
        return _parse_pgm(data)
    if fmt == "csv":
        return _parse_csv(data)
    raise ValueError(f"unknown label matrix format {fmt!r}")


def write_pgm(m: LabelMatrix, fh, binary: bool = True) -> None:
    """Write ``m`` as P5 (big-endian 16-bit when labels exceed 255) or P2."""
    maxval = max(1, int(m.labels.max()))
    if maxval > 65535:
        raise ValueError(f"label {maxval} does not fit a 16-bit PGM")
    header = f"{'P5' if binary else 'P2'}\n{m.cols} {m.rows}\n{maxval}\n".encode()
    fh.write(header)
    if binary:
        dtype = ">u2" if maxval > 255 else np.uint8
        fh.write(m.labels.astype(dtype).tobytes())
    else:
        for row in m.labels.tolist():
            fh.write((" ".join(map(str, row)) + "\n").encode())


def write_label_csv(m: LabelMatrix, fh) -> None:
    for row in m.labels.tolist():
        fh.write(",".join(map(str, row)) + "\n")


# -- selection --------------------------------------------------------------

def default_start(m: LabelMatrix) -> tuple[int, int]:
    return m.rows // 2, m.cols // 2


def spiral_select(m: LabelMatrix, n: int, start: Optional[tuple[int, int]] = None) -> list[int]:
    """First ``n`` distinct nonzero labels met on a square spiral around ``start``.

    ``start`` is (row, col) and its own label is taken first. Leg ``i`` moves
    i pixels along y (the row) in direction (-1)**(i+1), then i pixels along x
    (the column) in direction (-1)**i. Positions off the grid are skipped.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    row, col = default_start(m) if start is None else (int(start[0]), int(start[1]))
    if not (0 <= row < m.rows and 0 <= col < m.cols):
        raise ValueError(f"start {(row, col)} outside {m.rows}x{m.cols} matrix")
    labels = m.labels
    chosen: dict[int, None] = {}

    def visit(values) -> bool:
        for v in values[values != 0].tolist():
            if v not in chosen:
                chosen[v] = None
                if len(chosen) == n:
                    return True
        return False

    if visit(labels[row:row + 1, col]):
        return list(chosen)

    max_leg = 2 * math.ceil(math.hypot(m.rows, m.cols)) + 2
    for i in range(1, max_leg + 1):
        step = 1 if i % 2 else -1  # (-1)**(i+1); the x-run uses -step
        ks = np.arange(1, i + 1)
        if 0 <= col < m.cols:
            rr = row + step * ks
            rr = rr[(rr >= 0) & (rr < m.rows)]
            if visit(labels[rr, col]):
                return list(chosen)
        row += step * i
        if 0 <= row < m.rows:
            cc = col - step * ks
            cc = cc[(cc >= 0) & (cc < m.cols)]
            if visit(labels[row, cc]):
                return list(chosen)
        col -= step * i
    raise InsufficientCellsError(n, len(chosen))


def compute_centroids(m: LabelMatrix, cells: Sequence[int]) -> PointCloud:
    """Pixel-mean centroid (x = column, y = row) of every pixel carrying each label."""
    flat = m.labels.ravel()
    size = int(flat.max()) + 1
    rr, cc = np.indices(m.labels.shape)
    counts = np.bincount(flat, minlength=size)
    sum_x = np.bincount(flat, weights=cc.ravel(), minlength=size)
    sum_y = np.bincount(flat, weights=rr.ravel(), minlength=size)
    pts = []
    for cid in cells:
        cid = int(cid)
        if cid <= 0 or cid >= size or counts[cid] == 0:
            raise ValueError(f"cell ID {cid} does not occur in the label matrix")
        pts.append((sum_x[cid] / counts[cid], sum_y[cid] / counts[cid]))
    return PointCloud(np.array(pts, dtype=float).reshape(-1, 2), [int(c) for c in cells])


# -- point cloud CSV ----------------------------------------------------------

def _fmt(x: float) -> str:
    return np.format_float_positional(float(x), unique=True, trim="-")


def write_point_cloud(pc: PointCloud, fh) -> None:
    """Header "x,y" (plus "cell_id" when source IDs are known), one point per line."""
    if pc.source_ids is None:
        fh.write("x,y\n")
        for x, y in pc.points.tolist():
            fh.write(f"{_fmt(x)},{_fmt(y)}\n")
    else:
        fh.write("x,y,cell_id\n")
        for (x, y), cid in zip(pc.points.tolist(), pc.source_ids):
            fh.write(f"{_fmt(x)},{_fmt(y)},{cid}\n")


def is_point_cloud_csv(data: bytes) -> bool:
    first = data.lstrip().split(b"\n", 1)[0].strip().replace(b" ", b"")
    return first in (b"x,y", b"x,y,cell_id")


def read_point_cloud(text: str) -> PointCloud:
    lines = text.splitlines()
    header = lines[0].strip().replace(" ", "") if lines else ""
    if header not in ("x,y", "x,y,cell_id"):
        raise ValueError(f"line 1: expected header 'x,y', got {header!r}")
    with_ids = header.endswith("cell_id")
    pts, ids = [], []
    for lineno, line in enumerate(lines[1:], 2):
        if not line.strip():
            continue
        parts = line.split(",")
        try:
            if len(parts) != (3 if with_ids else 2):
                raise ValueError("wrong field count")
            x, y = float(parts[0]), float(parts[1])
            if with_ids:
                ids.append(int(parts[2]))
        except ValueError:
            raise ValueError(f"line {lineno}: malformed point record {line!r}") from None
        pts.append((x, y))
    return PointCloud(np.array(pts, dtype=float).reshape(-1, 2), ids if with_ids else None)
