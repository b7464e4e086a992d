"""Pell conics X^2 - D Y^2 = 4 and their group law.

Points carry one shared reduced denominator, so a rational point is stored
as integers (r, s, n) with x = r/n, y = s/n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .integers import Factorization, factor, is_prime, kronecker, squarefree_decompose


class DegenerateConic(ValueError):
    pass


class NotOnCurve(ValueError):
    pass


@dataclass(frozen=True)
class Discriminant:
    delta: int
    d: int
    factorization: Factorization

    @property
    def is_odd(self) -> bool:
        return self.delta % 2 == 1

    @property
    def primes(self) -> list[int]:
        return self.factorization.primes

    def __int__(self) -> int:
        return self.delta


def normalize_discriminant(d_in: int) -> Discriminant:
    """Discriminant of Q(sqrt(d_in)): d if d = 1 mod 4, else 4d, for the squarefree core d."""
    if d_in == 0:
        raise DegenerateConic("discriminant must be nonzero")
    d, _ = squarefree_decompose(d_in)
    if d == 1:
        raise DegenerateConic(f"{d_in} is a square: degenerate conic")
    delta = d if d % 4 == 1 else 4 * d
    return Discriminant(delta, d, factor(abs(delta)))


def is_fundamental_discriminant(n: int) -> bool:
    if n in (0, 1):
        return False
    d, cof = squarefree_decompose(n)
    if d == 1:
        return False
    return n == (d if d % 4 == 1 else 4 * d)


@dataclass(frozen=True, order=True)
class ConicPoint:
    r: int
    s: int
    n: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("denominator must be positive")

    @classmethod
    def from_xy(cls, x, y) -> ConicPoint:
        x, y = Fraction(x), Fraction(y)
        n = math.lcm(x.denominator, y.denominator)
        return cls(int(x * n), int(y * n), n)

    @property
    def x(self) -> Fraction:
        return Fraction(self.r, self.n)

    @property
    def y(self) -> Fraction:
        return Fraction(self.s, self.n)

    @property
    def is_integral(self) -> bool:
        return self.n == 1

    def __str__(self) -> str:
        return f"({self.x}, {self.y})"


NEUTRAL = ConicPoint(2, 0)
MINUS_TWO = ConicPoint(-2, 0)


@dataclass(frozen=True)
class QuadraticUnit:
    """The element (x + y sqrt(D)) / 2 with integers x, y."""

    x: int
    y: int
    delta: int

    def __mul__(self, other: QuadraticUnit) -> QuadraticUnit:
        if self.delta != other.delta:
            raise ValueError("units over different discriminants")
        xx = self.x * other.x + self.delta * self.y * other.y
        yy = self.x * other.y + self.y * other.x
        if xx % 2 or yy % 2:
            raise ArithmeticError("product left the maximal order")
        return QuadraticUnit(xx // 2, yy // 2, self.delta)

    def norm(self) -> Fraction:
        return Fraction(self.x * self.x - self.delta * self.y * self.y, 4)

    def __str__(self) -> str:
        return f"({self.x} + {self.y}*sqrt({self.delta}))/2"


class PellConic:
    """The curve X^2 - D Y^2 = 4 with neutral element (2, 0)."""

    def __init__(self, disc: Discriminant | int):
        if not isinstance(disc, Discriminant):
            disc = normalize_discriminant(disc)
        self.disc = disc
        self.delta = disc.delta
        self._fundamental: ConicPoint | None = None

    def __repr__(self) -> str:
        return f"PellConic({self.delta})"

    def __eq__(self, other) -> bool:
        return isinstance(other, PellConic) and other.delta == self.delta

    def __hash__(self) -> int:
        return hash(("PellConic", self.delta))

    neutral = NEUTRAL

    # -- membership -----------------------------------------------------

    def contains(self, P: ConicPoint) -> bool:
        r, s, n = P.r, P.s, P.n
        if r * r - self.delta * s * s != 4 * n * n:
            return False
        return math.gcd(r, n) == 1 and math.gcd(s, n) == 1

    def check(self, P: ConicPoint) -> ConicPoint:
        if not self.contains(P):
            raise NotOnCurve(f"{P} is not a reduced point of X^2 - {self.delta}Y^2 = 4")
        return P

    def point(self, x, y) -> ConicPoint:
        return self.check(ConicPoint.from_xy(x, y))

    def point_from_slope(self, t) -> ConicPoint:
        """Second intersection of the line through N with slope t; every rational point but (2, 0) arises."""
        t = Fraction(t)
        den = self.delta * t * t - 1
        if den == 0:
            raise ValueError(f"slope {t} is an asymptote direction")
        return self.point(2 * (self.delta * t * t + 1) / den, 4 * t / den)

    # -- group law ------------------------------------------------------

    def add(self, P: ConicPoint, Q: ConicPoint) -> ConicPoint:
        self.check(P)
        self.check(Q)
        return self._add(P, Q)

    def _add(self, P: ConicPoint, Q: ConicPoint) -> ConicPoint:
        r, s, m = P.r, P.s, P.n
        t, u, n = Q.r, Q.s, Q.n
        den = 2 * m * n
        return ConicPoint.from_xy(
            Fraction(r * t + self.delta * s * u, den), Fraction(r * u + s * t, den)
        )

    def chord_add(self, P: ConicPoint, Q: ConicPoint) -> ConicPoint:
        """Sum via the parallel-chord construction through (2, 0); independent of ``add``."""
        self.check(P)
        self.check(Q)
        x1, y1, x2, y2 = P.x, P.y, Q.x, Q.y
        if P == Q:
            return ConicPoint.from_xy(x1 * x1 - 2, x1 * y1)
        D = self.delta
        den = D * (y1 - y2) ** 2 - (x1 - x2) ** 2
        X = 2 * (D * (y1 - y2) ** 2 + (x1 - x2) ** 2) / den
        Y = 4 * (x1 - x2) * (y1 - y2) / den
        return ConicPoint.from_xy(X, Y)

    def negate(self, P: ConicPoint) -> ConicPoint:
        self.check(P)
        return ConicPoint(P.r, -P.s, P.n)

    def double(self, P: ConicPoint) -> ConicPoint:
        self.check(P)
        x, y = P.x, P.y
        return ConicPoint.from_xy(x * x - 2, x * y)

    def sub(self, P: ConicPoint, Q: ConicPoint) -> ConicPoint:
        return self.add(P, self.negate(Q))

    def multiply(self, P: ConicPoint, m: int) -> ConicPoint:
        self.check(P)
        if m < 0:
            P, m = ConicPoint(P.r, -P.s, P.n), -m
        result, base = NEUTRAL, P
        while m:
            if m & 1:
                result = self._add(result, base)
            m >>= 1
            if m:
                base = ConicPoint.from_xy(base.x * base.x - 2, base.x * base.y)
        return result

    def halve(self, P: ConicPoint) -> list[ConicPoint]:
        """All rational Q with 2Q = P (empty or two points)."""
        self.check(P)
        r, n = P.r, P.n
        if r == -2 * n:
            # x = 0 and -D y^2 = 4
            if self.delta > 0 or not _is_rational_square(Fraction(4, -self.delta)):
                return []
            y = _rational_sqrt(Fraction(4, -self.delta))
            return sorted([ConicPoint.from_xy(0, y), ConicPoint.from_xy(0, -y)])
        num = r + 2 * n
        a, b = math.isqrt(num) if num >= 0 else -1, math.isqrt(n)
        if num < 0 or a * a != num or b * b != n:
            return []
        x = Fraction(a, b)
        halves = {ConicPoint.from_xy(x, P.y / x), ConicPoint.from_xy(-x, -P.y / x)}
        return sorted(halves)

    def is_torsion(self, P: ConicPoint) -> bool:
        return P in self.torsion()

    def torsion(self) -> list[ConicPoint]:
        pts = [NEUTRAL, MINUS_TWO]
        if self.delta == -3:
            pts += [ConicPoint(1, 1), ConicPoint(1, -1), ConicPoint(-1, 1), ConicPoint(-1, -1)]
        elif self.delta == -4:
            pts += [ConicPoint(0, 1), ConicPoint(0, -1)]
        return pts

    def torsion_generator(self) -> ConicPoint:
        return {-3: ConicPoint(1, 1), -4: ConicPoint(0, 1)}.get(self.delta, MINUS_TWO)

    # -- integral structure --------------------------------------------

    def fundamental_point(self) -> ConicPoint:
        """Integral point with x > 2, y > 0 and minimal x (D > 0)."""
        if self.delta <= 0:
            raise ValueError("fundamental point needs D > 0")
        if self._fundamental is None:
            x, y, norm = fundamental_unit(self.delta)
            if norm == -1:
                x, y = x * x + 2, x * y
            self._fundamental = ConicPoint(x, y)
        return self._fundamental

    def to_unit(self, P: ConicPoint) -> QuadraticUnit:
        self.check(P)
        if not P.is_integral:
            raise ValueError(f"{P} is not integral")
        return QuadraticUnit(P.r, P.s, self.delta)

    def from_unit(self, u: QuadraticUnit) -> ConicPoint:
        if u.delta != self.delta:
            raise ValueError("unit belongs to a different field")
        return self.check(ConicPoint(u.x, u.y))

    def integral_points_up_to(self, x_bound: int) -> list[ConicPoint]:
        """All integral points with |x| <= x_bound, found without the fundamental unit."""
        D = self.delta
        if D < 0:
            return [P for P in self.torsion() if abs(P.r) <= x_bound]
        found = set()
        y_max = math.isqrt(max(x_bound * x_bound - 4, 0) // D) if x_bound >= 2 else -1
        if D <= 16 or y_max <= 200_000:
            for y in range(0, y_max + 1):
                t = D * y * y + 4
                x = math.isqrt(t)
                if x * x == t and x <= x_bound:
                    found.add((x, y))
        else:
            # a solution has |x/y - sqrt D| < 1/(2 (y/g)^2), so x/y is a convergent (D > 16)
            found.add((2, 0))
            for p, q in sqrt_convergents(D, y_max):
                for k in (1, 2):
                    x, y = k * p, k * q
                    if x * x - D * y * y == 4 and x <= x_bound:
                        found.add((x, y))
        pts = set()
        for x, y in found:
            for sx in (1, -1):
                for sy in (1, -1):
                    pts.add(ConicPoint(sx * x, sy * y))
        return sorted(pts)

    def points_mod_p(self, p: int) -> ConicModP:
        return ConicModP(self.delta, p)


def _is_rational_square(q: Fraction) -> bool:
    return q >= 0 and math.isqrt(q.numerator) ** 2 == q.numerator and math.isqrt(q.denominator) ** 2 == q.denominator


def _rational_sqrt(q: Fraction) -> Fraction:
    return Fraction(math.isqrt(q.numerator), math.isqrt(q.denominator))


def _floor_quadratic(P: int, D: int, Q: int) -> int:
    """floor((P + sqrt D) / Q) for nonsquare D > 0."""
    r = math.isqrt(D)
    if Q > 0:
        return (P + r) // Q
    return (-P - r - 1) // (-Q)


def fundamental_unit(delta: int) -> tuple[int, int, int]:
    """Fundamental unit (x + y sqrt(delta))/2 of the order of discriminant ``delta``.

    Runs the PQa continued fraction of (P0 + sqrt(delta))/2 until Q returns to 2.
    Returns (x, y, norm) with x, y > 0 and x^2 - delta y^2 = 4 * norm.
    """
    if delta <= 0 or math.isqrt(delta) ** 2 == delta:
        raise ValueError("need a positive nonsquare discriminant")
    P, Q = delta % 2, 2
    Q0, P0 = Q, P
    A_prev, A = 0, 1
    B_prev, B = 1, 0
    i = 0
    while True:
        a = _floor_quadratic(P, delta, Q)
        A_prev, A = A, a * A + A_prev
        B_prev, B = B, a * B + B_prev
        P = a * Q - P
        Q = (delta - P * P) // Q
        if Q == Q0 and B > 0:
            G = Q0 * A - P0 * B
            norm = -1 if i % 2 == 0 else 1
            assert G * G - delta * B * B == 4 * norm
            return G, B, norm
        i += 1


def sqrt_convergents(D: int, q_max: int) -> Iterator[tuple[int, int]]:
    """Convergents p/q of sqrt(D) with q <= q_max."""
    a0 = math.isqrt(D)
    m, d, a = 0, 1, a0
    p_prev, p = 1, a0
    q_prev, q = 0, 1
    while q <= q_max:
        yield p, q
        m = d * a - m
        d = (D - m * m) // d
        a = (a0 + m) // d
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev


def sqrt_period_length(D: int) -> int:
    """Period length of the continued fraction of sqrt(D), D a positive nonsquare."""
    a0 = math.isqrt(D)
    if a0 * a0 == D:
        raise ValueError("D is a square")
    m, d, a = 0, 1, a0
    length = 0
    while a != 2 * a0:
        m = d * a - m
        d = (D - m * m) // d
        a = (a0 + m) // d
        length += 1
    return length


class ConicModP:
    """X^2 - D Y^2 = 4 over F_p, p an odd prime not dividing D."""

    def __init__(self, delta: int, p: int):
        if p == 2 or not is_prime(p):
            raise ValueError("p must be an odd prime")
        if delta % p == 0:
            raise ValueError("p divides the discriminant")
        self.delta = delta % p
        self.p = p
        self._inv2 = (p + 1) // 2

    @property
    def neutral(self) -> tuple[int, int]:
        return (2 % self.p, 0)

    def expected_order(self) -> int:
        return self.p - kronecker(self.delta, self.p)

    def points(self) -> list[tuple[int, int]]:
        p = self.p
        roots: dict[int, list[int]] = {}
        for x in range(p):
            roots.setdefault(x * x % p, []).append(x)
        pts = []
        for y in range(p):
            for x in roots.get((4 + self.delta * y * y) % p, ()):
                pts.append((x, y))
        return sorted(pts)

    def contains(self, P: tuple[int, int]) -> bool:
        x, y = P
        return (x * x - self.delta * y * y - 4) % self.p == 0

    def add(self, P: tuple[int, int], Q: tuple[int, int]) -> tuple[int, int]:
        (x, y), (z, w) = P, Q
        p, h = self.p, self._inv2
        return ((x * z + self.delta * y * w) * h % p, (x * w + y * z) * h % p)

    def multiply(self, P: tuple[int, int], m: int) -> tuple[int, int]:
        if m < 0:
            P, m = (P[0], -P[1] % self.p), -m
        result, base = self.neutral, P
        while m:
            if m & 1:
                result = self.add(result, base)
            base = self.add(base, base)
            m >>= 1
        return result
