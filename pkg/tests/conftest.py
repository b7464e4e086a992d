from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from pelldescent.conic import PellConic, is_fundamental_discriminant

POSITIVE = [n for n in range(5, 400) if is_fundamental_discriminant(n)]
NEGATIVE = [n for n in range(-400, -2) if is_fundamental_discriminant(n)]


def brute_fundamental(delta: int, y_cap: int = 10**5):
    """Smallest y > 0 with D y^2 + 4 a square, by plain search."""
    for y in range(1, y_cap + 1):
        t = delta * y * y + 4
        x = math.isqrt(t)
        if x * x == t:
            return x, y
    return None


def is_square_mod(a: int, m: int) -> bool:
    return any((x * x - a) % m == 0 for x in range(m))


slopes = st.fractions(min_value=-50, max_value=50, max_denominator=60)


def rational_point(C: PellConic, t: Fraction):
    try:
        return C.point_from_slope(t)
    except ValueError:
        return None


@pytest.fixture(scope="session")
def c205():
    return PellConic(205)


@pytest.fixture(scope="session")
def c1045():
    return PellConic(1045)


def brute_descendant_points(a: int, b: int, r_max: int) -> list[tuple[int, int]]:
    """Integral (r, s), 0 < r <= r_max, s >= 0 with a r^2 - b s^2 = 4 (vectorized, a r_max^2 < 2^62)."""
    import numpy as np

    if a * r_max * r_max >= 2**62:
        raise ValueError("bound too large for int64")
    r = np.arange(1, r_max + 1, dtype=np.int64)
    t = a * r * r - 4
    ok = (t >= 0) & (t % b == 0)
    r, q = r[ok], t[ok] // b
    s = np.floor(np.sqrt(q.astype(np.float64))).astype(np.int64)
    for _ in range(2):
        s = np.where(s * s > q, s - 1, s)
        s = np.where((s + 1) * (s + 1) <= q, s + 1, s)
    hit = s * s == q
    return [(int(x), int(y)) for x, y in zip(r[hit], s[hit])]
