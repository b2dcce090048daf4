import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from tessentropy.ingest import (
    InsufficientCellsError,
    LabelMatrix,
    ParseError,
    PointCloud,
    compute_centroids,
    is_point_cloud_csv,
    load_label_matrix,
    read_point_cloud,
    spiral_select,
    write_label_csv,
    write_pgm,
    write_point_cloud,
)
from tessentropy.synth import voronoi_label_matrix

HAND_GRID = [
    [0, 7, 7, 2, 2],
    [1, 3, 0, 5, 5],
    [1, 3, 4, 5, 9],
    [0, 0, 4, 6, 9],
    [8, 8, 0, 6, 9],
]


def _walk(rows, cols, start):
    """Yield every on-grid (row, col) of the square spiral, one unit step at a time."""
    r, c = start
    yield r, c
    leg = 1
    while True:
        sign = 1 if leg % 2 else -1
        for dr, dc in ((sign, 0), (0, -sign)):
            for _ in range(leg):
                r, c = r + dr, c + dc
                if 0 <= r < rows and 0 <= c < cols:
                    yield r, c
        if abs(r - start[0]) > rows + 2 and abs(c - start[1]) > cols + 2:
            return
        leg += 1


def _spiral_oracle(labels, n, start=None):
    labels = np.asarray(labels)
    rows, cols = labels.shape
    start = start or (rows // 2, cols // 2)
    seen = []
    for r, c in _walk(rows, cols, start):
        v = int(labels[r, c])
        if v and v not in seen:
            seen.append(v)
            if len(seen) == n:
                return seen
    return seen


def test_hand_grid_example():
    assert spiral_select(LabelMatrix(np.array(HAND_GRID)), 7) == [4, 3, 5, 6, 8, 1, 7]
    assert _spiral_oracle(HAND_GRID, 7) == [4, 3, 5, 6, 8, 1, 7]


def test_constant_matrix():
    assert spiral_select(LabelMatrix(np.full((4, 6), 5)), 1) == [5]
    with pytest.raises(InsufficientCellsError, match="wanted 2, found 1"):
        spiral_select(LabelMatrix(np.full((4, 6), 5)), 2)


def test_insufficient_cells():
    with pytest.raises(InsufficientCellsError) as info:
        spiral_select(LabelMatrix(np.array(HAND_GRID)), 10)
    assert info.value.found == 9 and info.value.wanted == 10
    with pytest.raises(InsufficientCellsError):
        spiral_select(LabelMatrix(np.zeros((3, 3), dtype=int)), 1)


def test_start_outside_grid():
    with pytest.raises(ValueError):
        spiral_select(LabelMatrix(np.array(HAND_GRID)), 1, start=(5, 0))


grids = arrays(np.int64, st.tuples(st.integers(1, 12), st.integers(1, 12)), elements=st.integers(0, 9))


@settings(max_examples=200)
@given(grids, st.data())
def test_spiral_matches_oracle(labels, data):
    m = LabelMatrix(labels)
    ids = m.cell_ids()
    start = (data.draw(st.integers(0, m.rows - 1)), data.draw(st.integers(0, m.cols - 1)))
    if not ids:
        with pytest.raises(InsufficientCellsError):
            spiral_select(m, 1, start)
        return
    n = data.draw(st.integers(1, len(ids)))
    got = spiral_select(m, n, start)
    assert got == _spiral_oracle(labels, n, start)
    assert len(got) == n and len(set(got)) == n and 0 not in got
    # asking for every label returns every label
    assert sorted(spiral_select(m, len(ids), start)) == ids


def test_voronoi_selection_matches_oracle():
    m = voronoi_label_matrix(500, shape=(1024, 1024), seed=3)
    assert len(m.cell_ids()) >= 450
    got = spiral_select(m, 400)
    assert got == _spiral_oracle(m.labels, 400)
    cloud = compute_centroids(m, got)
    assert cloud.points.shape == (400, 2)


def test_centroid_examples():
    m = LabelMatrix(np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]]))
    np.testing.assert_array_equal(compute_centroids(m, [1]).points, [[1.0, 1.0]])
    m = LabelMatrix(np.array([[0, 2, 2, 2], [0, 0, 0, 0]]))
    # pixels (row 0, cols 1..3): x = column mean, y = row mean
    np.testing.assert_array_equal(compute_centroids(m, [2]).points, [[2.0, 0.0]])
    m = LabelMatrix(np.pad(np.ones((2, 2), dtype=int), ((4, 4), (4, 4))))
    np.testing.assert_array_equal(compute_centroids(m, [1]).points, [[4.5, 4.5]])
    with pytest.raises(ValueError, match="does not occur"):
        compute_centroids(m, [3])


@settings(max_examples=50)
@given(grids, st.integers(0, 5), st.integers(0, 5))
def test_centroid_translation_equivariance(labels, dr, dc):
    m = LabelMatrix(labels)
    ids = m.cell_ids()
    if not ids:
        return
    shifted = LabelMatrix(np.pad(labels, ((dr, 0), (dc, 0))))
    a = compute_centroids(m, ids).points
    b = compute_centroids(shifted, ids).points
    np.testing.assert_allclose(b, a + [dc, dr], rtol=0, atol=1e-12)


def test_csv_loading():
    m = load_label_matrix(b"1,2,0\n3,4,5\n", "csv")
    np.testing.assert_array_equal(m.labels, [[1, 2, 0], [3, 4, 5]])
    with pytest.raises(ParseError, match="byte offset 8"):
        load_label_matrix(b"1,2,0\n3,x,5\n", "csv")
    with pytest.raises(ParseError):
        load_label_matrix(b"1,2,0\n3,4\n", "csv")
    with pytest.raises(ParseError):
        load_label_matrix(b"", "csv")


def test_ascii_pgm():
    m = load_label_matrix(b"P2\n# comment\n3 2\n9\n1 2 3\n4 5 9\n", "pgm")
    np.testing.assert_array_equal(m.labels, [[1, 2, 3], [4, 5, 9]])
    with pytest.raises(ParseError, match="overflow"):
        load_label_matrix(b"P2\n3 2\n9\n1 2 3\n4 5 10\n", "pgm")
    with pytest.raises(ParseError, match="dimension mismatch"):
        load_label_matrix(b"P2\n3 2\n9\n1 2 3\n4 5\n", "pgm")
    with pytest.raises(ParseError, match="byte offset 0"):
        load_label_matrix(b"P7\n3 2\n9\n", "pgm")


def test_binary_pgm_8_and_16_bit():
    m = load_label_matrix(b"P5\n2 2\n255\n" + bytes([0, 1, 200, 255]), "pgm")
    np.testing.assert_array_equal(m.labels, [[0, 1], [200, 255]])
    data = b"P5\n2 1\n65535\n" + (300).to_bytes(2, "big") + (65535).to_bytes(2, "big")
    np.testing.assert_array_equal(load_label_matrix(data, "pgm16").labels, [[300, 65535]])
    with pytest.raises(ParseError, match="dimension mismatch"):
        load_label_matrix(b"P5\n2 2\n255\n" + bytes([0, 1, 2]), "pgm")


@settings(max_examples=50)
@given(arrays(np.int64, st.tuples(st.integers(1, 8), st.integers(1, 8)), elements=st.integers(0, 65535)))
def test_matrix_roundtrips(labels):
    m = LabelMatrix(labels)
    for binary in (True, False):
        buf = io.BytesIO()
        write_pgm(m, buf, binary=binary)
        np.testing.assert_array_equal(load_label_matrix(buf.getvalue(), "pgm").labels, labels)
    buf = io.StringIO()
    write_label_csv(m, buf)
    np.testing.assert_array_equal(load_label_matrix(buf.getvalue().encode(), "csv").labels, labels)


def test_point_cloud_roundtrip(rng):
    pc = PointCloud(rng.random((20, 2)) * 1000)
    buf = io.StringIO()
    write_point_cloud(pc, buf)
    assert is_point_cloud_csv(buf.getvalue().encode())
    back = read_point_cloud(buf.getvalue())
    np.testing.assert_array_equal(back.points, pc.points)
    assert back.source_ids is None

    pc = PointCloud(np.array([[0.5, 1.0], [2.25, 3.0]]), [7, 9])
    buf = io.StringIO()
    write_point_cloud(pc, buf)
    assert buf.getvalue() == "x,y,cell_id\n0.5,1,7\n2.25,3,9\n"
    assert read_point_cloud(buf.getvalue()).source_ids == [7, 9]


def test_point_cloud_errors():
    assert not is_point_cloud_csv(b"1,2,3\n")
    with pytest.raises(ValueError, match="line 3"):
        read_point_cloud("x,y\n1,2\n1,b\n")
    with pytest.raises(ValueError):
        PointCloud(np.array([[math.nan, 0.0]]))
