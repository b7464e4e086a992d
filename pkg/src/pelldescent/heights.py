"""Naive, limit and closed-form canonical heights; Mordell-Weil generators by descent."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import gmpy2
import mpmath

from .conic import MINUS_TWO, NEUTRAL, ConicPoint, PellConic
from .descent import Descendant, alpha, image_alpha, lift

LOG4 = math.log(4)
CLOSED_PREC = 128
DEFAULT_TOLERANCE = 1e-9
DEFAULT_MAX_BITS = 1 << 26


@dataclass(frozen=True)
class HeightValue:
    value: float
    provenance: str  # "naive", "limit", "closed-form"
    iterations: int | None = None
    error_bound: float = 0.0
    partial: bool = False

    def __post_init__(self):
        if self.value < -self.error_bound - 1e-12:
            raise ValueError(f"negative height {self.value}")

    def __float__(self) -> float:
        return self.value


def naive_H(q) -> int:
    """H of a rational number or of a point (the height of its x-coordinate)."""
    if isinstance(q, ConicPoint):
        return max(abs(q.r), q.n)
    q = Fraction(q)
    return max(abs(q.numerator), q.denominator)


def _log_int(m: int) -> float:
    """log of a positive integer of any size, to double precision."""
    bits = m.bit_length()
    if bits <= 1000:
        return math.log(m)
    shift = bits - 64
    return math.log(int(m >> shift)) + shift * math.log(2)


def h0(P: ConicPoint) -> HeightValue:
    return HeightValue(_log_int(naive_H(P)), "naive")


def canonical_h_limit(
    C: PellConic, P: ConicPoint, iterations: int = 20, max_bits: int = DEFAULT_MAX_BITS
) -> HeightValue:
    """2^-k h0(2^k P) with exact integer doubling x -> x^2 - 2.

    The telescoping estimate gives an error of at most 2^-k log 4. If the
    numerator would exceed ``max_bits`` the last completed iterate is
    returned, flagged partial, with its own (larger) bound.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    C.check(P)
    r, n = gmpy2.mpz(P.r), gmpy2.mpz(P.n)
    k = 0
    partial = False
    while k < iterations:
        if 2 * max(r.bit_length(), n.bit_length()) + 2 > max_bits:
            partial = True
            break
        r, n = r * r - 2 * n * n, n * n
        k += 1
    H = max(abs(r), n)
    value = _log_int(int(H)) / 2**k
    return HeightValue(value, "limit", k, LOG4 / 2**k, partial)


def _closed_mp(C: PellConic, P: ConicPoint) -> mpmath.mpf:
    C.check(P)
    with mpmath.workprec(CLOSED_PREC):
        if C.delta > 0:
            return mpmath.log((abs(P.r) + abs(P.s) * mpmath.sqrt(C.delta)) / 2)
        return mpmath.log(P.n)


def canonical_h_closed(C: PellConic, P: ConicPoint) -> HeightValue:
    """log((|r| + |s| sqrt D)/2) for D > 0, log n for D < 0."""
    v = _closed_mp(C, P)
    return HeightValue(float(v), "closed-form", None, float(abs(v)) * 2.0**-120)


# --------------------------------------------------------------------------
# axioms


@dataclass(frozen=True)
class AxiomCheck:
    name: str
    lhs: str
    rhs: str
    passed: bool


@dataclass
class AxiomReport:
    checks: list[AxiomCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[AxiomCheck]:
        return [c for c in self.checks if not c.passed]

    def add(self, name: str, lhs, rhs, ok: bool):
        self.checks.append(AxiomCheck(name, str(lhs), str(rhs), bool(ok)))


def check_height_axioms(
    C: PellConic, P: ConicPoint, Q: ConicPoint, tolerance: float = DEFAULT_TOLERANCE
) -> AxiomReport:
    """Evaluate the canonical-height theorem on P, Q in closed form; failures are reported."""
    rep = AxiomReport()
    with mpmath.workprec(CLOSED_PREC):
        h = lambda X: _closed_mp(C, X)  # noqa: E731
        hP, hQ = h(P), h(Q)
        hS, hD = h(C.add(P, Q)), h(C.sub(P, Q))
        tol = mpmath.mpf(tolerance)
        for name, X, hX in (("P", P, hP), ("Q", Q, hQ)):
            rep.add(f"torsion iff h = 0 ({name})", hX, C.is_torsion(X), (abs(hX) <= tol) == C.is_torsion(X))
        rep.add("h(2P) = 2h(P)", h(C.double(P)), 2 * hP, abs(h(C.double(P)) - 2 * hP) <= tol)
        rep.add("h(P+Q) <= h(P) + h(Q)", hS, hP + hQ, hS <= hP + hQ + tol)
        rep.add("h(P) + h(Q) <= h(P-Q) + h(P+Q)", hP + hQ, hS + hD, hP + hQ <= hS + hD + tol)
        rep.add("h(P-Q) + h(P+Q) <= 2h(P) + 2h(Q)", hS + hD, 2 * (hP + hQ), hS + hD <= 2 * (hP + hQ) + tol)
        lhs, rhs = hD**2 + hS**2, 2 * hP**2 + 2 * hQ**2
        rep.add("parallelogram", lhs, rhs, abs(lhs - rhs) <= tol * max(1, rhs))
        for m in range(1, 9):
            hm = h(C.multiply(P, m))
            rep.add(f"h({m}P) = {m}h(P)", hm, m * hP, abs(hm - m * hP) <= tol * max(1, m * hP))
        for name, X, hX in (("P", P, hP), ("Q", Q, hQ)):
            gap = abs(hX - mpmath.log(naive_H(X)))
            rep.add(f"|h - h0| <= log 4 ({name})", gap, "log 4", gap <= mpmath.log(4) + tol)
    HP, HQ = naive_H(P), naive_H(Q)
    H2 = naive_H(C.double(P))
    rep.add("H(P)^2 / 4 <= H(2P)", HP * HP, 4 * H2, HP * HP <= 4 * H2)
    rep.add("H(2P) <= 4 H(P)^2", H2, 4 * HP * HP, H2 <= 4 * HP * HP)
    HS = naive_H(C.add(P, Q))
    rep.add("H(P+Q) <= 5 H(P) H(Q)", HS, 5 * HP * HQ, HS <= 5 * HP * HQ)
    rep.add("H(P) / (5 H(Q)) <= H(P+Q)", HP, 5 * HQ * HS, HP <= 5 * HQ * HS)
    return rep


@dataclass(frozen=True)
class DescendantHeightReport:
    H_P: int
    H_Q: int
    a: int
    lower_ok: bool
    upper_ok: bool

    @property
    def passed(self) -> bool:
        return self.lower_ok and self.upper_ok


def descendant_height_bound(T: Descendant, r, s) -> DescendantHeightReport:
    """H(P)^2 / 4a <= H(Q) <= 4a H(P)^2 for Q the lift of P = (r, s), all in integers."""
    if T.a <= 0 or T.delta <= 0:
        raise ValueError("need a > 0 and D > 0")
    Q = lift(T, r, s)
    HP, HQ, a = naive_H(Fraction(r)), naive_H(Q), T.a
    return DescendantHeightReport(HP, HQ, a, HP * HP <= 4 * a * HQ, HQ <= 4 * a * HP * HP)


# --------------------------------------------------------------------------
# Mordell-Weil


@dataclass
class MordellWeil:
    torsion: list[ConicPoint]
    free: list[ConicPoint]
    representatives: list[ConicPoint] = field(default_factory=list)
    bound: float = 0.0

    @property
    def rank(self) -> int:
        return len(self.free)


def _canonical_integral(P: ConicPoint) -> ConicPoint:
    # +-P and +-P + (-2, 0) are (+-x, +-y); pick x > 0, y >= 0
    return ConicPoint(abs(P.r), abs(P.s))


def mordell_weil_generators(C: PellConic) -> MordellWeil:
    """Generators of C(Z) by the descent procedure.

    Representatives of C(Z)/2C(Z) come from the image of alpha; every integral
    point of height at most their maximum is collected, and the collection is
    cut down to one free generator by a subtractive Euclidean algorithm.
    """
    if C.delta < 0:
        return MordellWeil([C.torsion_generator()], [], list(C.torsion()), 0.0)
    reps_classes = image_alpha(C)
    F = C.fundamental_point()
    gamma = [NEUTRAL, MINUS_TWO, F, C.add(F, MINUS_TWO)]
    assert len({alpha(C, g) for g in gamma}) == reps_classes.order
    c_mp = max(_closed_mp(C, g) for g in gamma)
    c = float(c_mp)
    with mpmath.workprec(CLOSED_PREC):
        x_bound = int(mpmath.ceil(2 * mpmath.exp(c_mp))) + 2
    pool = {_canonical_integral(P) for P in gamma}
    pool |= {_canonical_integral(P) for P in C.integral_points_up_to(x_bound)}
    pool.discard(NEUTRAL)
    # canonical non-torsion points are eps^k with k > 0; x grows with k
    while len(pool) > 1:
        B, A = sorted(pool, key=lambda P: P.r)[-2:]
        pool.discard(A)
        D = _canonical_integral(C.sub(A, B))
        if D != NEUTRAL:
            pool.add(D)
    free = sorted(pool)
    return MordellWeil([MINUS_TWO], free, gamma, c)
