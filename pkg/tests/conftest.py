import math
from fractions import Fraction

import numpy as np
import pytest

ACCEPTANCE_LINES: list[str] = []

EQUILATERAL = [(0.0, 0.0), (1.0, 0.0), (0.5, math.sqrt(3) / 2)]


@pytest.fixture
def rng():
    return np.random.default_rng(20240518)


def exact_incircle(a, b, c, d) -> int:
    """Sign of the in-circle determinant, computed directly in rationals (test oracle)."""
    m = []
    for p in (a, b, c):
        dx, dy = Fraction(p[0]) - Fraction(d[0]), Fraction(p[1]) - Fraction(d[1])
        m.append((dx, dy, dx * dx + dy * dy))
    det = (
        m[0][0] * (m[1][1] * m[2][2] - m[2][1] * m[1][2])
        - m[0][1] * (m[1][0] * m[2][2] - m[2][0] * m[1][2])
        + m[0][2] * (m[1][0] * m[2][1] - m[2][0] * m[1][1])
    )
    return (det > 0) - (det < 0)


def exact_orient(a, b, c) -> int:
    det = (Fraction(b[0]) - Fraction(a[0])) * (Fraction(c[1]) - Fraction(a[1])) - (
        Fraction(b[1]) - Fraction(a[1])
    ) * (Fraction(c[0]) - Fraction(a[0]))
    return (det > 0) - (det < 0)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def monotone_perturbation(fc, delta, rng):
    """Values of ``fc`` plus U(-delta, delta) noise, then raised to the max over faces.

    The result is a monotone filtration within sup-distance delta of the original.
    """
    index = {s: i for i, s in enumerate(fc.simplices)}
    noisy = [v + rng.uniform(-delta, delta) for v in fc.values]
    for i in sorted(range(len(fc.simplices)), key=lambda i: len(fc.simplices[i])):
        s = fc.simplices[i]
        if len(s) > 1:
            for k in range(len(s)):
                noisy[i] = max(noisy[i], noisy[index[s[:k] + s[k + 1:]]])
    return noisy
