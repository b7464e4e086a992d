"""First 2-descent: square classes, the Weil map and the first descendants."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable

from .conic import MINUS_TWO, ConicPoint, NotOnCurve, PellConic
from .integers import factor, is_square, squarefree_core, valuation


@dataclass(frozen=True, order=True)
class SquareClass:
    """A coset of Q^x / Q^x^2, represented by its signed squarefree integer."""

    rep: int

    def __post_init__(self):
        if self.rep == 0 or squarefree_core(self.rep) != self.rep:
            raise ValueError(f"{self.rep} is not a squarefree nonzero integer")

    @classmethod
    def of(cls, q) -> SquareClass:
        q = Fraction(q)
        return cls(squarefree_core(q.numerator * q.denominator))

    def __mul__(self, other: SquareClass) -> SquareClass:
        g = math.gcd(self.rep, other.rep)
        return SquareClass((self.rep // g) * (other.rep // g))

    def support(self) -> frozenset[int]:
        """Primes in the class, with -1 standing for the sign."""
        primes = set(factor(abs(self.rep)).primes)
        if self.rep < 0:
            primes.add(-1)
        return frozenset(primes)

    @property
    def is_trivial(self) -> bool:
        return self.rep == 1

    def __int__(self) -> int:
        return self.rep

    def __str__(self) -> str:
        return str(self.rep)


ONE = SquareClass(1)


class TwoGroup:
    """Finite elementary abelian 2-subgroup of Q^x / Q^x^2 with an explicit basis.

    Elements are encoded as bitmasks over their prime support, so membership
    and independence are plain linear algebra over F_2.
    """

    def __init__(self, generators: Iterable[SquareClass] = ()):
        self._primes: list[int] = []
        self._pivots: dict[int, tuple[int, SquareClass]] = {}
        self.basis: list[SquareClass] = []
        for g in generators:
            self.adjoin(g)

    def _mask(self, c: SquareClass, grow: bool) -> int | None:
        mask = 0
        for p in c.support():
            if p not in self._primes:
                if not grow:
                    return None
                self._primes.append(p)
            mask |= 1 << self._primes.index(p)
        return mask

    def _reduce(self, mask: int) -> int:
        while mask:
            top = mask.bit_length() - 1
            if top not in self._pivots:
                break
            mask ^= self._pivots[top][0]
        return mask

    def adjoin(self, g: SquareClass) -> bool:
        """Add ``g``; returns True if it enlarged the group."""
        mask = self._reduce(self._mask(g, grow=True))
        if not mask:
            return False
        top = mask.bit_length() - 1
        self._pivots[top] = (mask, g)
        self.basis.append(g)
        return True

    def __contains__(self, c: SquareClass) -> bool:
        mask = self._mask(c, grow=False)
        return mask is not None and self._reduce(mask) == 0

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def order(self) -> int:
        return 2 ** len(self.basis)

    def __len__(self) -> int:
        return self.order

    def elements(self) -> list[SquareClass]:
        out = [ONE]
        for b in self.basis:
            out += [e * b for e in out]
        return sorted(out, key=lambda c: (abs(c.rep), c.rep))

    def __iter__(self):
        return iter(self.elements())

    def __eq__(self, other) -> bool:
        if not isinstance(other, TwoGroup):
            return NotImplemented
        return self.order == other.order and all(b in self for b in other.basis)

    def issubgroup(self, other: TwoGroup) -> bool:
        return all(b in other for b in self.basis)

    def __repr__(self) -> str:
        return f"TwoGroup<{', '.join(str(b) for b in self.basis)}>"


@dataclass(frozen=True)
class Descendant:
    """The torsor T_a : a r^2 - b s^2 = 4 with a b = D."""

    a: int
    b: int

    def __post_init__(self):
        if self.a == 0 or self.b == 0:
            raise ValueError("degenerate descendant")

    @property
    def delta(self) -> int:
        return self.a * self.b

    def contains(self, r, s) -> bool:
        r, s = Fraction(r), Fraction(s)
        return self.a * r * r - self.b * s * s == 4

    def equation(self) -> str:
        b = self.b
        a_txt = "" if self.a == 1 else str(self.a)
        b_txt = "" if abs(b) == 1 else str(abs(b))
        sign = "-" if b > 0 else "+"
        return f"{a_txt}r^2 {sign} {b_txt}s^2 = 4"

    def __str__(self) -> str:
        return f"T_{self.a}"


@dataclass(frozen=True)
class DescendantPoint:
    r: Fraction
    s: Fraction
    host: Descendant

    def __post_init__(self):
        object.__setattr__(self, "r", Fraction(self.r))
        object.__setattr__(self, "s", Fraction(self.s))
        if not self.host.contains(self.r, self.s):
            raise NotOnCurve(f"({self.r}, {self.s}) is not on {self.host.equation()}")

    @property
    def is_integral(self) -> bool:
        return self.r.denominator == 1 and self.s.denominator == 1


def descendant(C: PellConic, a: int) -> Descendant:
    if C.delta % a:
        raise ValueError(f"{a} does not divide {C.delta}")
    return Descendant(a, C.delta // a)


def alpha(C: PellConic, P: ConicPoint) -> SquareClass:
    """Weil map: the class of x + 2, or of -D at (-2, 0)."""
    C.check(P)
    if P == MINUS_TWO:
        return SquareClass.of(-C.delta)
    t = P.x + 2
    if t.denominator == 1:
        # integral points have x + 2 = a r^2 with a | D, so only D's primes can survive
        m = t.numerator
        a = math.prod(p for p in C.disc.primes if valuation(m, p) % 2) * (1 if m > 0 else -1)
        if is_square(m // a):
            return SquareClass(a)
    return SquareClass.of(t)


def enumerate_descendants(C: PellConic) -> list[Descendant]:
    """T_a for every positive squarefree a dividing D."""
    primes = C.disc.primes
    out = []
    for k in range(len(primes) + 1):
        for combo in combinations(primes, k):
            a = math.prod(combo)
            out.append(Descendant(a, C.delta // a))
    return sorted(out, key=lambda T: T.a)


def canonical_a(C: PellConic, c: SquareClass) -> int:
    """Positive representative of ``c`` among the descendant indices.

    Negative classes are moved across the identification T_a ~ T_{-D/a}.
    """
    if c.rep < 0:
        c = c * SquareClass.of(-C.delta)
    if C.delta % c.rep:
        raise ValueError(f"class {c} has no descendant over D = {C.delta}")
    return c.rep


def compose(C: PellConic, S: Descendant, T: Descendant) -> Descendant:
    """T_a . T_b = T_c with ab = c m^2."""
    if S.delta != C.delta or T.delta != C.delta:
        raise ValueError("descendants of different conics")
    return descendant(C, canonical_a(C, SquareClass(S.a) * SquareClass(T.a)))


def lift(T: Descendant, r, s) -> ConicPoint:
    """(r, s) on T_a maps to (a r^2 - 2, r s) on the conic."""
    r, s = Fraction(r), Fraction(s)
    if not T.contains(r, s):
        raise NotOnCurve(f"({r}, {s}) is not on {T.equation()}")
    return ConicPoint.from_xy(T.a * r * r - 2, r * s)


def classify_integral(C: PellConic, P: ConicPoint) -> tuple[Descendant, int, int]:
    """The descendant T_a (a > 0) and integers r > 0, s with x + 2 = a r^2 and y = r s."""
    C.check(P)
    if not P.is_integral:
        raise ValueError(f"{P} is not integral")
    if P.r <= 0:
        raise ValueError(
            f"{P} has x <= 0; classify -P + (-2, 0) = (-x, -y) instead, it lands on T_(-D/a)"
        )
    a = alpha(C, P).rep
    r = math.isqrt((P.r + 2) // a)
    s, rem = divmod(P.s, r)
    T = descendant(C, a)
    if rem or a * r * r != P.r + 2 or not T.contains(r, s):
        raise ArithmeticError(f"descent of {P} failed")
    return T, r, s


def image_alpha(C: PellConic) -> TwoGroup:
    """alpha(C(Z)) inside Q^x / Q^x^2."""
    if C.delta > 0:
        return TwoGroup([alpha(C, MINUS_TWO), alpha(C, C.fundamental_point())])
    return TwoGroup(alpha(C, T) for T in C.torsion())


def integral_classes_positive(C: PellConic) -> TwoGroup:
    """W_2: positive a with T_a carrying an integral point (D > 0)."""
    if C.delta <= 0:
        raise ValueError("W_2 is defined here for D > 0")
    return TwoGroup(SquareClass(canonical_a(C, c)) for c in image_alpha(C).elements())


def integral_point_on(C: PellConic, T: Descendant) -> tuple[int, int] | None:
    """Smallest integral point with r > 0 on T_a, read off from the fundamental point."""
    if T.a == 1:
        return (2, 0)
    F = C.fundamental_point()
    T_F, r, s = classify_integral(C, F)
    if T_F.a == T.a:
        return (r, s)
    return None


def search_integral(T: Descendant, r_max: int) -> list[tuple[int, int]]:
    """Brute force: integral (r, s) with 0 < r <= r_max, s >= 0 on T_a."""
    out = []
    a, b = T.a, T.b
    for r in range(1, r_max + 1):
        t = a * r * r - 4
        if t % b:
            continue
        q = t // b
        if q < 0:
            continue
        s = math.isqrt(q)
        if s * s == q:
            out.append((r, s))
    return out
