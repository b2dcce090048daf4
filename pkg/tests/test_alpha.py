import io
import math

import numpy as np
import pytest

from conftest import EQUILATERAL
from tessentropy.alpha import (
    FilteredComplex,
    alpha_complex,
    alpha_filtration,
    delaunay_triangulate,
    faces,
    read_complex_dump,
    write_complex_dump,
)


def test_equilateral_values():
    fc = alpha_complex(EQUILATERAL)
    for s, v in zip(fc.simplices, fc.values):
        if len(s) == 1:
            assert v == 0.0
        elif len(s) == 2:
            assert v == pytest.approx(0.25, abs=1e-12)
        else:
            assert v == pytest.approx(1 / 3, abs=1e-12)


def _circumradius_sq(a, b, c):
    # solve |x - a|^2 = |x - b|^2 = |x - c|^2 for the circumcenter x
    a, b, c = map(np.asarray, (a, b, c))
    A = 2 * np.array([b - a, c - a])
    rhs = np.array([b @ b - a @ a, c @ c - a @ a])
    center = np.linalg.solve(A, rhs)
    return float((center - a) @ (center - a))


def test_obtuse_triangle_long_edge_is_attached():
    pts = [(0.0, 0.0), (4.0, 0.0), (2.0, 0.5)]
    fc = alpha_complex(pts)
    # (2, 0.5) is within distance 2 of (2, 0): inside the diametral disk of the long edge
    assert math.dist((2, 0.5), (2, 0)) < 2
    r2 = _circumradius_sq(*pts)
    assert fc.value((0, 1, 2)) == pytest.approx(r2, rel=1e-12)
    assert fc.value((0, 1)) == pytest.approx(r2, rel=1e-12)
    assert fc.value((0, 2)) == pytest.approx(math.dist(pts[0], pts[2]) ** 2 / 4, rel=1e-12)
    assert fc.value((1, 2)) == pytest.approx(math.dist(pts[1], pts[2]) ** 2 / 4, rel=1e-12)


def test_full_complex_is_the_delaunay_triangulation(rng):
    xy = rng.random((40, 2))
    fc = alpha_complex(xy)
    assert sorted(fc.subcomplex(fc.max_value())) == sorted(delaunay_triangulate(xy))


def test_monotone_and_closed(rng):
    fc = alpha_complex(rng.random((100, 2)))
    assert fc.monotonicity_violations() == []
    assert all(v >= 0 for v in fc.values)


def test_triangle_values_against_circumcenter_oracle(rng):
    xy = rng.random((30, 2))
    fc = alpha_complex(xy)
    for s, v in zip(fc.simplices, fc.values):
        if len(s) == 3:
            assert v == pytest.approx(_circumradius_sq(*xy[list(s)]), rel=1e-9)


def _rigid(xy, theta, shift):
    rot = np.array([[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]])
    return xy @ rot.T + shift


def test_rigid_motion_invariance(rng):
    xy = rng.random((60, 2))
    fc = alpha_complex(xy)
    for _ in range(5):
        moved = alpha_complex(_rigid(xy, rng.uniform(0, 2 * math.pi), rng.uniform(-10, 10, 2)))
        assert moved.simplices == fc.simplices
        np.testing.assert_allclose(moved.values, fc.values, rtol=1e-9, atol=1e-15)


@pytest.mark.parametrize("scale", [0.01, 3.0, 1024.0])
def test_scaling_is_quadratic(rng, scale):
    xy = rng.random((60, 2))
    fc = alpha_complex(xy)
    scaled = alpha_complex(xy * scale)
    np.testing.assert_allclose(scaled.values, np.array(fc.values) * scale**2, rtol=1e-12)


def test_euler_characteristic(rng):
    for _ in range(20):
        assert alpha_complex(rng.random((rng.integers(3, 80), 2))).euler_characteristic() == 1


def test_monotonicity_enforced_exactly(rng):
    fc = alpha_complex(rng.random((200, 2)))
    for s in fc.simplices:
        for f in faces(s):
            assert fc.value(f) <= fc.value(s)


def test_alpha_filtration_accepts_any_simplex_order(rng):
    xy = rng.random((25, 2))
    dl = delaunay_triangulate(xy)
    shuffled = [dl[i] for i in rng.permutation(len(dl))]
    assert alpha_filtration(xy, shuffled).values == alpha_filtration(xy, dl).values


def test_complex_dump_roundtrip(rng):
    fc = alpha_complex(rng.random((12, 2)))
    buf = io.StringIO()
    write_complex_dump(fc, buf)
    text = buf.getvalue()
    assert text.splitlines()[0].startswith("v 0 ")
    back = read_complex_dump(io.StringIO(text))
    assert back.simplices == fc.simplices and back.values == fc.values
    with pytest.raises(ValueError, match="line 1"):
        read_complex_dump(io.StringIO("q 1 2\n"))


def test_matches_gudhi_alpha_complex(rng):
    gudhi = pytest.importorskip("gudhi")
    for _ in range(10):
        xy = rng.random((80, 2))
        fc = alpha_complex(xy)
        st = gudhi.AlphaComplex(points=xy.tolist(), precision="exact").create_simplex_tree()
        ref = {tuple(sorted(s)): v for s, v in st.get_filtration()}
        assert set(ref) == set(fc.simplices)
        for s, v in zip(fc.simplices, fc.values):
            assert v == pytest.approx(ref[s], rel=1e-9, abs=1e-15)


def test_filtered_complex_rejects_mismatched_lengths():
    with pytest.raises(ValueError):
        FilteredComplex(np.zeros((1, 2)), [(0,)], [0.0, 1.0])
