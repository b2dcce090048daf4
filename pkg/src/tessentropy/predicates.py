"""Exact orientation and in-circle predicates for points with float coordinates.

Each predicate evaluates the determinant in floating point first and accepts the
sign when it clears a static error bound (Shewchuk's stage-A bounds). Otherwise
it recomputes with ``fractions.Fraction``, which is exact for float input.
"""
from __future__ import annotations

from fractions import Fraction

_EPS = 2.0**-53
_CCW_ERRBOUND = (3.0 + 16.0 * _EPS) * _EPS
_ICC_ERRBOUND = (10.0 + 96.0 * _EPS) * _EPS


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def orient2d(a, b, c) -> int:
    """Sign of the signed area of (a, b, c): +1 counter-clockwise, -1 clockwise, 0 collinear."""
    detleft = (a[0] - c[0]) * (b[1] - c[1])
    detright = (a[1] - c[1]) * (b[0] - c[0])
    det = detleft - detright
    errbound = _CCW_ERRBOUND * (abs(detleft) + abs(detright))
    if det > errbound or -det > errbound:
        return _sign(det)
    return _orient2d_exact(a, b, c)


def _orient2d_exact(a, b, c) -> int:
    ax, ay = Fraction(a[0]), Fraction(a[1])
    bx, by = Fraction(b[0]), Fraction(b[1])
    cx, cy = Fraction(c[0]), Fraction(c[1])
    return _sign((ax - cx) * (by - cy) - (ay - cy) * (bx - cx))


def incircle(a, b, c, d) -> int:
    """+1 if d lies strictly inside the circle through a, b, c (given counter-clockwise),
    -1 if strictly outside, 0 if cocircular. The sign flips for clockwise (a, b, c)."""
    adx, ady = a[0] - d[0], a[1] - d[1]
    bdx, bdy = b[0] - d[0], b[1] - d[1]
    cdx, cdy = c[0] - d[0], c[1] - d[1]

    bdxcdy, cdxbdy = bdx * cdy, cdx * bdy
    alift = adx * adx + ady * ady
    cdxady, adxcdy = cdx * ady, adx * cdy
    blift = bdx * bdx + bdy * bdy
    adxbdy, bdxady = adx * bdy, bdx * ady
    clift = cdx * cdx + cdy * cdy

    det = (
        alift * (bdxcdy - cdxbdy)
        + blift * (cdxady - adxcdy)
        + clift * (adxbdy - bdxady)
    )
    permanent = (
        (abs(bdxcdy) + abs(cdxbdy)) * alift
        + (abs(cdxady) + abs(adxcdy)) * blift
        + (abs(adxbdy) + abs(bdxady)) * clift
    )
    errbound = _ICC_ERRBOUND * permanent
    if det > errbound or -det > errbound:
        return _sign(det)
    return _incircle_exact(a, b, c, d)


def _incircle_exact(a, b, c, d) -> int:
    dx, dy = Fraction(d[0]), Fraction(d[1])
    adx, ady = Fraction(a[0]) - dx, Fraction(a[1]) - dy
    bdx, bdy = Fraction(b[0]) - dx, Fraction(b[1]) - dy
    cdx, cdy = Fraction(c[0]) - dx, Fraction(c[1]) - dy
    det = (
        (adx * adx + ady * ady) * (bdx * cdy - cdx * bdy)
        + (bdx * bdx + bdy * bdy) * (cdx * ady - adx * cdy)
        + (cdx * cdx + cdy * cdy) * (adx * bdy - bdx * ady)
    )
    return _sign(det)


def incircle_perturbed(pts, i: int, j: int, k: int, l: int) -> int:
    """In-circle test for point ``l`` against triangle (i, j, k), never returning 0.

    Exact ties are resolved by symbolic perturbation of the paraboloid lift: point
    ``p`` is lowered by eps**(p + 1), so the smallest index dominates. A lowered
    point falls inside the circle of the others, which makes every cocircular
    configuration prefer the diagonal through its smallest index.
    """
    a, b, c, d = pts[i], pts[j], pts[k], pts[l]
    s = incircle(a, b, c, d)
    if s != 0:
        return s
    # Coefficient of each lifted coordinate in the determinant, negated because
    # the perturbation lowers the lift.
    terms = (
        (i, lambda: -orient2d(b, c, d)),
        (j, lambda: orient2d(a, c, d)),
        (k, lambda: -orient2d(a, b, d)),
        (l, lambda: orient2d(a, b, c)),
    )
    for _, term in sorted(terms, key=lambda t: t[0]):
        s = term()
        if s != 0:
            return s
    raise ValueError("in-circle test on four collinear points")
