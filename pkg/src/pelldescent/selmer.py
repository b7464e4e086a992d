"""Local solvability of descendants, Sel_2, W_2, Sha_2 and the Redei cross-check."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .conic import ConicPoint, PellConic
from .descent import (
    Descendant,
    DescendantPoint,
    SquareClass,
    TwoGroup,
    enumerate_descendants,
    integral_classes_positive,
    integral_point_on,
    lift,
)
from .integers import (
    Place,
    factor,
    hilbert,
    kronecker,
    relevant_places,
    squarefree_decompose,
    valuation,
)


class InconsistentLocalData(AssertionError):
    """The Legendre-condition and Hilbert-symbol routes disagreed."""


class NotPrimeDiscriminantProduct(ValueError):
    pass


class SearchBudgetExceeded(ArithmeticError):
    """The Holzer box is larger than the configured search bound."""


@dataclass(frozen=True)
class LocalVerdict:
    place: Place
    solvable: bool
    witness: str | None = None
    local_zero: tuple[int, int, int] | None = None


# --------------------------------------------------------------------------
# local conditions


def legendre_conditions(T: Descendant) -> list[str]:
    """Failed conditions (a/q) = 1 for odd q | b and (-b/p) = 1 for odd p | a; empty if solvable."""
    a, b = T.a, T.b
    if a <= 0:
        raise ValueError("need a > 0")
    failed = []
    for q in factor(abs(b)).primes:
        if q != 2 and kronecker(a, q) != 1:
            failed.append(f"({a}/{q}) = -1")
    for p in factor(a).primes:
        if p != 2 and kronecker(-b, p) != 1:
            failed.append(f"({-b}/{p}) = -1")
    return failed


def hilbert_verdicts(T: Descendant) -> list[LocalVerdict]:
    D = T.delta
    out = []
    for v in relevant_places(T.a, D):
        h = hilbert(T.a, D, v)
        out.append(LocalVerdict(v, h == 1, None if h == 1 else f"({T.a}, {D})_{v} = -1"))
    return out


def _reduce_squares(c: int) -> tuple[int, int]:
    return squarefree_decompose(c)


def local_zero(coeffs: tuple[int, int, int], p: int | None) -> tuple[int, int, int] | None:
    """Exhaustive search for a nontrivial zero of sum c_i x_i^2 over Q_p.

    Returns an approximate zero (mod p^N) whose Hensel lift exists, or None
    when no zero exists. Square factors of the coefficients are stripped
    first, which only rescales variables.
    """
    if p is None:
        return (1, 1, 1) if len({c > 0 for c in coeffs}) == 2 else None
    cs = [_reduce_squares(c)[0] for c in coeffs]
    units = [c % p != 0 for c in cs]
    for i in range(3):
        j, k = [t for t in range(3) if t != i]
        if p != 2 and not units[i] and units[j] and units[k]:
            # a zero with x_i the only unit would force c_j y^2 + c_k z^2 = 0 mod p with y, z
            # not both 0 mod p; that zero has a unit coordinate with unit coefficient
            continue
        N = 2 * valuation(2 * cs[i], p) + 1
        M = p**N
        hit = _search_mod(cs[i], cs[j], cs[k], M, p)
        if hit is not None:
            y, z = hit
            vec = [0, 0, 0]
            vec[i], vec[j], vec[k] = 1, y, z
            return tuple(vec)
    return None


def _search_mod(ci: int, cj: int, ck: int, M: int, p: int) -> tuple[int, int] | None:
    """(y, z) mod M with ci + cj y^2 + ck z^2 = 0 mod M."""
    if ck % p == 0 and cj % p != 0:
        hit = _search_mod(ci, ck, cj, M, p)
        return None if hit is None else (hit[1], hit[0])
    if ck % p == 0:
        for y in range(M):
            for z in range(M):
                if (ci + cj * y * y + ck * z * z) % M == 0:
                    return y, z
        return None
    inv = pow(ck, -1, M)
    roots = {}
    for z in range(M):
        roots.setdefault(z * z % M, z)
    for y in range(M):
        t = -(ci + cj * y * y) * inv % M
        if t in roots:
            return y, roots[t]
    return None


def locally_solvable(T: Descendant, certify: bool = False) -> tuple[bool, list[LocalVerdict]]:
    """Everywhere-local solvability of T_a, checked two independent ways.

    With ``certify`` each place also gets a brute-force p-adic zero (or its
    exhaustive absence) for the form a r^2 - b s^2 - 4 z^2.
    """
    verdicts = hilbert_verdicts(T)
    by_hilbert = all(v.solvable for v in verdicts)
    by_legendre = not legendre_conditions(T)
    if by_hilbert != by_legendre:
        raise InconsistentLocalData(f"{T}: Hilbert says {by_hilbert}, Legendre says {by_legendre}")
    if certify:
        form = (T.a, -T.b, -4)
        certified = []
        for v in verdicts:
            z = local_zero(form, v.place.p)
            if (z is not None) != v.solvable:
                raise InconsistentLocalData(f"{T}: local search disagrees with the symbol at {v.place}")
            certified.append(LocalVerdict(v.place, v.solvable, v.witness, z))
        verdicts = certified
    return by_hilbert, verdicts


# --------------------------------------------------------------------------
# global witnesses


def solve_ternary(c0: int, c1: int, c2: int, max_box: int | None = None) -> tuple[int, int, int] | None:
    """Smallest-denominator primitive integer zero of c0 x^2 + c1 y^2 + c2 z^2, or None.

    The form is reduced to squarefree pairwise-coprime coefficients, then the
    Holzer box |x| <= sqrt|c1 c2|, |y| <= sqrt|c0 c2| is scanned completely,
    so None is a proof that no rational zero exists. ``max_box`` caps the
    number of (x, y) cells scanned.
    """
    cs = [c0, c1, c2]
    scale = [Fraction(1)] * 3  # original var = scale * reduced var
    changed = True
    while changed:
        changed = False
        for i in range(3):
            core, sq = squarefree_decompose(cs[i])
            if sq != 1:
                cs[i] = core
                scale[i] /= sq
                changed = True
        g = math.gcd(*cs)
        if g != 1:
            cs = [c // g for c in cs]
            changed = True
        for i in range(3):
            j, k = [t for t in range(3) if t != i]
            g = math.gcd(cs[j], cs[k])
            if g != 1:
                # g | c_i x_i^2 with gcd(g, c_i) = 1 forces g | x_i
                cs[j] //= g
                cs[k] //= g
                cs[i] *= g
                scale[i] *= g
                changed = True
    if len({c > 0 for c in cs}) == 1:
        return None
    # solve for the variable with the smallest coefficient
    order = sorted(range(3), key=lambda t: abs(cs[t]))
    k, i, j = order[0], order[1], order[2]
    ci, cj, ck = cs[i], cs[j], cs[k]
    x_max, y_max = math.isqrt(abs(cj * ck)), math.isqrt(abs(ci * ck))
    if max_box is not None and (x_max + 1) * (y_max + 1) > max_box:
        raise SearchBudgetExceeded(f"Holzer box {x_max + 1} x {y_max + 1} exceeds {max_box}")
    best = None
    for x in range(x_max + 1):
        for y in range(y_max + 1):
            if x == 0 and y == 0:
                continue
            t = -(ci * x * x + cj * y * y)
            if t % ck:
                continue
            q = t // ck
            if q < 0:
                continue
            z = math.isqrt(q)
            if z * z != q:
                continue
            vec = [Fraction(0)] * 3
            vec[i], vec[j], vec[k] = Fraction(x), Fraction(y), Fraction(z)
            orig = [vec[t] * scale[t] for t in range(3)]
            den = math.lcm(*(v.denominator for v in orig))
            ints = [int(v * den) for v in orig]
            g = math.gcd(*ints)
            ints = tuple(v // g for v in ints)
            key = (abs(ints[2]) == 0, abs(ints[2]), abs(ints[0]), abs(ints[1]))
            if best is None or key < best[0]:
                best = (key, ints)
    return None if best is None else best[1]


def rational_witness(T: Descendant, max_box: int | None = None) -> DescendantPoint | None:
    """A rational point on T_a of smallest denominator, or None if there is none."""
    sol = solve_ternary(T.a, -T.b, -4, max_box)
    if sol is None:
        return None
    R, S, Z = sol
    if Z == 0:
        return None
    return DescendantPoint(Fraction(abs(R), abs(Z)), Fraction(abs(S), abs(Z)), T)


# --------------------------------------------------------------------------
# groups


def _require_real(C: PellConic):
    if C.delta <= 0:
        raise ValueError("Selmer machinery here is for D > 0")


def selmer_group(C: PellConic) -> TwoGroup:
    _require_real(C)
    return TwoGroup(SquareClass(T.a) for T in enumerate_descendants(C) if locally_solvable(T)[0])


def sha2(C: PellConic) -> tuple[int, list[Descendant]]:
    """Order of Sha_2 = Sel_2 / W_2 and one descendant per nontrivial coset."""
    sel = selmer_group(C)
    w2 = integral_classes_positive(C)
    if not w2.issubgroup(sel):
        raise AssertionError(f"W_2 not inside Sel_2 for D = {C.delta}")
    order = sel.order // w2.order
    reps: list[Descendant] = []
    for c in sorted(sel.elements(), key=lambda c: c.rep):
        if c in w2 or any(c * SquareClass(t.a) in w2 for t in reps):
            continue
        reps.append(Descendant(c.rep, C.delta // c.rep))
    assert len(reps) == order - 1
    return order, reps


@dataclass
class DescendantRow:
    descendant: Descendant
    locally_solvable: bool
    integral_point: tuple[int, int] | None = None
    rational_witness: DescendantPoint | None = None
    lifted: ConicPoint | None = None


@dataclass
class SelmerReport:
    delta: int
    selmer: TwoGroup
    w2: TwoGroup
    sha_order: int
    sha_representatives: list[Descendant] = field(default_factory=list)
    rows: list[DescendantRow] = field(default_factory=list)


def selmer_report(C: PellConic, witnesses: bool = True, max_box: int | None = None) -> SelmerReport:
    sel = selmer_group(C)
    w2 = integral_classes_positive(C)
    order, reps = sha2(C)
    rows = []
    for T in enumerate_descendants(C):
        ok, _ = locally_solvable(T)
        row = DescendantRow(T, ok)
        if SquareClass(T.a) in w2:
            pt = integral_point_on(C, T)
            if pt is None:
                raise AssertionError(f"{T} is in W_2 but carries no integral point")
            row.integral_point = pt
            row.lifted = lift(T, *pt)
        elif ok and witnesses:
            w = rational_witness(T, max_box)
            if w is None:
                raise AssertionError(f"{T} is locally solvable but has no rational point")
            row.rational_witness = w
            row.lifted = lift(T, w.r, w.s)
        rows.append(row)
    if sel.order != sum(r.locally_solvable for r in rows):
        raise AssertionError("Selmer group is not closed under composition")
    return SelmerReport(C.delta, sel, w2, order, reps, rows)


# --------------------------------------------------------------------------
# Redei


@dataclass(frozen=True)
class RedeiMatrix:
    primes: tuple[int, ...]
    entries: tuple[tuple[int, ...], ...]

    def rank(self) -> int:
        rows = [sum(bit << j for j, bit in enumerate(row)) for row in self.entries]
        rank = 0
        for col in range(len(self.primes)):
            pivot = next((i for i in range(rank, len(rows)) if rows[i] >> col & 1), None)
            if pivot is None:
                continue
            rows[rank], rows[pivot] = rows[pivot], rows[rank]
            for i in range(len(rows)):
                if i != rank and rows[i] >> col & 1:
                    rows[i] ^= rows[rank]
            rank += 1
        return rank


def _prime_discriminants(delta: int) -> list[int]:
    if delta <= 1:
        raise NotPrimeDiscriminantProduct(f"{delta} is not a product of positive prime discriminants")
    f = factor(delta)
    if not f.is_squarefree() or any(p % 4 != 1 for p in f.primes):
        raise NotPrimeDiscriminantProduct(f"{delta} is not a product of primes = 1 mod 4")
    return f.primes


def redei_matrix(delta: int) -> RedeiMatrix:
    """Off-diagonal entries encode (p_j/p_i) additively; the diagonal makes each row sum to 0."""
    primes = _prime_discriminants(delta)
    rows = []
    for i, p in enumerate(primes):
        row = [0 if kronecker(q, p) == 1 else 1 for q in primes]
        row[i] = 0
        row[i] = sum(row) % 2
        rows.append(tuple(row))
    return RedeiMatrix(tuple(primes), tuple(rows))


def redei_check(C: PellConic) -> tuple[int, bool]:
    """4-rank e4 = t - 1 - rank(M), and whether #Sel_2 = 2^(e4 + 1)."""
    M = redei_matrix(C.delta)
    e4 = len(M.primes) - 1 - M.rank()
    return e4, selmer_group(C).order == 2 ** (e4 + 1)


def splitting_second_kind(delta: int, delta1: int) -> bool:
    """Is delta = delta1 * delta2 a splitting with (delta1/p2) = (delta2/p1) = +1 throughout?"""
    if delta1 == 0 or delta % delta1:
        raise ValueError(f"{delta1} does not divide {delta}")
    delta2 = delta // delta1
    for part in (delta1, delta2):
        if part % 4 not in (0, 1):
            raise ValueError(f"{part} is not a discriminant")
    for p in factor(abs(delta2)).primes:
        if kronecker(delta1, p) != 1:
            return False
    for p in factor(abs(delta1)).primes:
        if kronecker(delta2, p) != 1:
            return False
    return True
